#include <doctest.h>

#include "carnotkit/bch.hpp"
#include "carnotkit/catalog.hpp"
#include "support/oracles.hpp"

using namespace carnotkit;
using namespace carnotkit::testing;

TEST_CASE("filiform constructors produce the stated bracket tables") {
  AlgebraPtr engel = make_filiform(FiliformKind::first, 3);
  CHECK(engel->dim() == 4);
  CHECK(engel->layer_dims() == std::vector<int>{2, 1, 1});

  // first kind at s = 2 is the Heisenberg algebra
  AlgebraPtr h = make_filiform(FiliformKind::first, 2);
  CHECK(h->dim() == 3);
  CHECK(h->layer_dims() == std::vector<int>{2, 1});

  AlgebraPtr f2 = make_filiform(FiliformKind::second, 5);
  CHECK(f2->dim() == 6);
  auto b = [&](int i, int j) { return bracket(basis_element<Rat>(f2, i), basis_element<Rat>(f2, j)); };
  CHECK(b(0, 1).coeffs == basis_element<Rat>(f2, 2).coeffs);
  CHECK(b(0, 2).coeffs == basis_element<Rat>(f2, 3).coeffs);
  CHECK(b(0, 3).coeffs == basis_element<Rat>(f2, 4).coeffs);
  CHECK(b(1, 4).coeffs == scale(Rat(-1), basis_element<Rat>(f2, 5)).coeffs);
  CHECK(b(2, 3).coeffs == basis_element<Rat>(f2, 5).coeffs);
  CHECK(is_zero(b(0, 4)));  // the chain stops at s-2 in the second kind
}

TEST_CASE("filiform preconditions") {
  CHECK_THROWS_AS(make_filiform(FiliformKind::first, 1), CarnotError);
  CHECK_THROWS_AS(make_filiform(FiliformKind::second, 4), CarnotError);  // even step
  CHECK_THROWS_AS(make_filiform(FiliformKind::second, 3), CarnotError);  // needs n >= 2
  CHECK_NOTHROW(make_filiform(FiliformKind::second, 7));
}

TEST_CASE("every constructor output validates exactly") {
  for (const char* name : {"abelian:1", "abelian:4", "heis", "engel", "filiform1:7",
                           "filiform2:7", "free:2,4", "free:3,3", "cartan"}) {
    AlgebraPtr alg = builtin_algebra(name);
    ValidationReport report = validate_algebra(alg->def());
    CHECK(report.ok());
  }
}

TEST_CASE("filiform layer signature") {
  for (int s : {3, 4, 5, 6, 7}) {
    AlgebraPtr f = make_filiform(FiliformKind::first, s);
    CHECK(f->layer_dims()[0] == 2);
    for (int k = 2; k <= s; ++k) CHECK(f->layer_dims()[k - 1] == 1);
    CHECK(f->dim() == s + 1);
  }
}

TEST_CASE("free nilpotent layer dimensions match the Witt formula") {
  for (auto [m, s] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {2, 5}, {2, 6}, {3, 2},
                                                      {3, 3}, {3, 4}, {4, 2}, {5, 2}}) {
    AlgebraPtr f = make_free_nilpotent(m, s);
    REQUIRE(static_cast<int>(f->layer_dims().size()) == s);
    for (int k = 1; k <= s; ++k) CHECK(f->layer_dims()[k - 1] == witt_dimension(m, k));
  }
}

TEST_CASE("free nilpotent special cases") {
  AlgebraPtr heis_like = make_free_nilpotent(2, 2);
  CHECK(heis_like->layer_dims() == std::vector<int>{2, 1});

  AlgebraPtr cartan = builtin_algebra("cartan");
  CHECK(cartan->dim() == 5);
  CHECK(cartan->layer_dims() == std::vector<int>{2, 1, 2});

  CHECK_THROWS_AS(make_free_nilpotent(2, 8), CarnotError);  // dim 71 > 64 cap
  CHECK_THROWS_AS(make_free_nilpotent(1, 3), CarnotError);
}

TEST_CASE("direct product sums layers componentwise") {
  AlgebraPtr heis = make_heisenberg();
  AlgebraPtr line = make_abelian(1);
  AlgebraPtr prod = direct_product(heis, line);
  CHECK(prod->dim() == 4);
  CHECK(prod->layer_dims() == std::vector<int>{3, 1});

  AlgebraPtr engel2 = direct_product(make_filiform(FiliformKind::first, 3),
                                     make_filiform(FiliformKind::first, 3));
  CHECK(engel2->dim() == 8);
  CHECK(engel2->layer_dims() == std::vector<int>{4, 2, 2});
}

TEST_CASE("ad splits componentwise over a product") {
  AlgebraPtr engel = make_filiform(FiliformKind::first, 3);
  AlgebraPtr prod = direct_product(engel, engel);
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    RatElement y1 = random_rational_element(engel, rng);
    RatElement y2 = random_rational_element(engel, rng);
    RatElement z1 = random_rational_element(engel, rng);
    RatElement z2 = random_rational_element(engel, rng);
    auto embed = [&](const RatElement& a, const RatElement& b) {
      RatElement e = zero<Rat>(prod);
      for (int i = 0; i < engel->dim(); ++i) {
        e.coeffs[*prod->index_of(engel->label(i) + "_1")] = a.coeffs[i];
        e.coeffs[*prod->index_of(engel->label(i) + "_2")] = b.coeffs[i];
      }
      return e;
    };
    for (int k = 0; k <= 3; ++k) {
      RatElement lhs = ad_power(embed(y1, y2), embed(z1, z2), k);
      RatElement rhs = embed(ad_power(y1, z1, k), ad_power(y2, z2, k));
      REQUIRE(lhs.coeffs == rhs.coeffs);
    }
  }
}

TEST_CASE("quotient of engel by the top layer is heisenberg-shaped") {
  AlgebraPtr engel = make_filiform(FiliformKind::first, 3);
  QuotientOutcome q = quotient(engel, {basis_element<Rat>(engel, 3)});
  REQUIRE(q.accepted);
  CHECK(q.algebra->dim() == 3);
  CHECK(q.algebra->step() == 2);
  CHECK(q.algebra->layer_dims() == std::vector<int>{2, 1});
  // [X0, X1] = X2 survives
  RatElement br = bracket(basis_element<Rat>(q.algebra, 0), basis_element<Rat>(q.algebra, 1));
  CHECK(br.coeffs == basis_element<Rat>(q.algebra, 2).coeffs);
}

TEST_CASE("quotient by zero is the identity projection") {
  AlgebraPtr engel = make_filiform(FiliformKind::first, 3);
  QuotientOutcome q = quotient(engel, {zero<Rat>(engel)});
  REQUIRE(q.accepted);
  CHECK(q.algebra->dim() == engel->dim());
  std::mt19937_64 rng(3);
  RatElement p = random_rational_element(engel, rng);
  CHECK(push_forward(q, p).coeffs == p.coeffs);
}

TEST_CASE("quotient rejects a non-ideal span with a witness") {
  AlgebraPtr heis = make_heisenberg();
  QuotientOutcome q = quotient(heis, {basis_element<Rat>(heis, 1)});  // span{X2}, horizontal
  REQUIRE_FALSE(q.accepted);
  REQUIRE(q.witness.has_value());
  // the escaping bracket is [X1, X2] = Z up to sign
  CHECK(q.witness->coeffs[2] != 0);
}

TEST_CASE("quotient rejects a non-graded span") {
  AlgebraPtr heis = make_heisenberg();
  RatElement mixed = zero<Rat>(heis);
  mixed.coeffs[0] = 1;  // X1 + Z mixes layers 1 and 2
  mixed.coeffs[2] = 1;
  QuotientOutcome q = quotient(heis, {mixed});
  REQUIRE_FALSE(q.accepted);
  CHECK(q.reject_reason.find("graded") != std::string::npos);
}

TEST_CASE("quotient projection is a bracket morphism") {
  AlgebraPtr f = make_filiform(FiliformKind::second, 5);
  // kill the top layer: graded ideal
  QuotientOutcome q = quotient(f, {basis_element<Rat>(f, 5)});
  REQUIRE(q.accepted);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    RatElement a = random_rational_element(f, rng);
    RatElement b = random_rational_element(f, rng);
    REQUIRE(push_forward(q, bracket(a, b)).coeffs ==
            bracket(push_forward(q, a), push_forward(q, b)).coeffs);
  }
}

TEST_CASE("builtin parser") {
  CHECK(builtin_algebra("heis")->name() == "heis");
  CHECK(builtin_algebra("engel")->dim() == 4);
  CHECK(builtin_algebra("filiform1:4")->dim() == 5);
  CHECK(builtin_algebra("free:3,2")->layer_dims() == std::vector<int>{3, 3});
  CHECK(builtin_algebra("cartan")->name() == "free:2,3");
  CHECK_THROWS_AS(builtin_algebra("nope"), CarnotError);
  CHECK_THROWS_AS(builtin_algebra("filiform1:x"), CarnotError);
}

TEST_CASE("algebra tags cover product and quotient") {
  AlgebraSpecTag tag;
  tag.family = AlgebraSpecTag::Family::product;
  tag.factors.resize(2);
  tag.factors[0].family = AlgebraSpecTag::Family::heisenberg;
  tag.factors[1].family = AlgebraSpecTag::Family::abelian;
  tag.factors[1].m = 1;
  AlgebraPtr prod = make_algebra(tag);
  CHECK(prod->layer_dims() == std::vector<int>{3, 1});

  AlgebraSpecTag qtag;
  qtag.family = AlgebraSpecTag::Family::quotient;
  qtag.factors.resize(1);
  qtag.factors[0].family = AlgebraSpecTag::Family::filiform_first;
  qtag.factors[0].s = 3;
  qtag.ideal = {{Rat(0), Rat(0), Rat(0), Rat(1)}};
  CHECK(make_algebra(qtag)->layer_dims() == std::vector<int>{2, 1});
}
