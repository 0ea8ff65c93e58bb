#include <doctest.h>

#include "carnotkit/abnormality.hpp"
#include "carnotkit/catalog.hpp"
#include "carnotkit/control.hpp"
#include "support/oracles.hpp"

using namespace carnotkit;
using namespace carnotkit::testing;

namespace {

template <class T>
HorizontalControl<T> make_control(const AlgebraPtr& alg,
                                  std::vector<std::pair<T, std::vector<T>>> pieces) {
  HorizontalControl<T> control;
  const auto& g1 = alg->layer_indices(1);
  for (auto& [dur, coords] : pieces) {
    Element<T> dir = zero<T>(alg);
    for (std::size_t j = 0; j < g1.size(); ++j) dir.coeffs[g1[j]] = coords[j];
    control.pieces.push_back({dur, std::move(dir)});
  }
  return control;
}

}  // namespace

TEST_CASE("endpoint basics") {
  AlgebraPtr heis = make_heisenberg();
  // single piece (1, X) flows to exp(X) = X
  auto single = make_control<Rat>(heis, {{Rat(1), {Rat(1), Rat(0)}}});
  CHECK(endpoint(heis, single).coeffs == basis_element<Rat>(heis, 0).coeffs);
  // out and back
  auto back = make_control<Rat>(heis, {{Rat(1), {Rat(1), Rat(0)}}, {Rat(1), {Rat(-1), Rat(0)}}});
  CHECK(is_zero(endpoint(heis, back)));
  // empty control ends at the identity
  CHECK(is_zero(endpoint(heis, HorizontalControl<Rat>{})));
}

TEST_CASE("endpoint rejects malformed controls") {
  AlgebraPtr heis = make_heisenberg();
  HorizontalControl<Rat> bad;
  bad.pieces.push_back({Rat(1), basis_element<Rat>(heis, 2)});  // Z is not horizontal
  CHECK_THROWS_AS(endpoint(heis, bad), CarnotError);
  HorizontalControl<Rat> nonpos;
  nonpos.pieces.push_back({Rat(0), basis_element<Rat>(heis, 0)});
  CHECK_THROWS_AS(endpoint(heis, nonpos), CarnotError);
}

TEST_CASE("heisenberg square path is pure holonomy") {
  AlgebraPtr heis = make_heisenberg();
  auto square = make_control<Rat>(heis, {{Rat(1), {Rat(1), Rat(0)}},
                                         {Rat(1), {Rat(0), Rat(1)}},
                                         {Rat(1), {Rat(-1), Rat(0)}},
                                         {Rat(1), {Rat(0), Rat(-1)}}});
  RatElement end = endpoint(heis, square);
  CHECK(end.coeffs[0] == 0);
  CHECK(end.coeffs[1] == 0);
  CHECK(end.coeffs[2] == 1);  // the enclosed signed area
}

TEST_CASE("endpoint concatenation is the group product") {
  AlgebraPtr f = make_filiform(FiliformKind::second, 5);
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> num(-3, 3);
  std::uniform_int_distribution<int> den(1, 3);
  for (int trial = 0; trial < 25; ++trial) {
    auto rand_control = [&](int pieces) {
      HorizontalControl<Rat> c;
      for (int k = 0; k < pieces; ++k) {
        RatElement dir = zero<Rat>(f);
        for (int i : f->layer_indices(1)) dir.coeffs[i] = Rat(num(rng), den(rng));
        c.pieces.push_back({Rat(den(rng)), dir});
      }
      return c;
    };
    HorizontalControl<Rat> h1 = rand_control(3), h2 = rand_control(2);
    HorizontalControl<Rat> glued = h1;
    for (const auto& piece : h2.pieces) glued.pieces.push_back(piece);
    REQUIRE(endpoint(f, glued).coeffs ==
            bch_product(endpoint(f, h1), endpoint(f, h2)).coeffs);
  }
}

TEST_CASE("endpoint is reparametrization invariant") {
  AlgebraPtr engel = make_filiform(FiliformKind::first, 3);
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<int> num(-3, 3);
  for (int trial = 0; trial < 25; ++trial) {
    HorizontalControl<Rat> h;
    for (int k = 0; k < 4; ++k) {
      RatElement dir = zero<Rat>(engel);
      dir.coeffs[0] = Rat(num(rng));
      dir.coeffs[1] = Rat(num(rng));
      h.pieces.push_back({Rat(1, k + 1), dir});
    }
    Rat lambda(3, 2);
    HorizontalControl<Rat> scaled;
    for (const auto& piece : h.pieces)
      scaled.pieces.push_back({piece.duration * lambda, scale(Rat(1 / lambda), piece.direction)});
    REQUIRE(endpoint(engel, scaled).coeffs == endpoint(engel, h).coeffs);
  }
}

TEST_CASE("reverse_negate drives to the inverse point") {
  AlgebraPtr f = make_filiform(FiliformKind::second, 5);
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> num(-3, 3);
  for (int trial = 0; trial < 20; ++trial) {
    HorizontalControl<Rat> h;
    for (int k = 0; k < 3; ++k) {
      RatElement dir = zero<Rat>(f);
      dir.coeffs[0] = Rat(num(rng));
      dir.coeffs[1] = Rat(num(rng));
      h.pieces.push_back({Rat(1, 2), dir});
    }
    REQUIRE(endpoint(f, reverse_negate(h)).coeffs == group_inverse(endpoint(f, h)).coeffs);
  }
}

TEST_CASE("jacobian rank matches the ad-chain span on catalog directions") {
  AlgebraPtr engel = make_filiform(FiliformKind::first, 3);
  DblElement x0 = basis_element<double>(engel, 0);
  DblElement x1 = basis_element<double>(engel, 1);
  CHECK(endpoint_jacobian_rank(x0, 8, 1e-5) == 4);
  CHECK(endpoint_jacobian_rank(x1, 8, 1e-5) == 3);

  AlgebraPtr cartan = builtin_algebra("cartan");
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    DblElement x = random_horizontal(cartan, rng);
    if (quasi_norm(x) < 0.1) continue;
    int rank = endpoint_jacobian_rank(x, 8, 1e-5);
    CHECK(rank <= 4);
    CHECK(rank == ad_chain_span_dim(x));
  }
}

TEST_CASE("jacobian scan kernels agree serial vs parallel") {
  AlgebraPtr f = builtin_algebra("filiform2:5");
  std::vector<DblElement> dirs = sphere_directions(f, 24);
  CHECK(jacobian_rank_scan(f, dirs, 8, 1e-5) == jacobian_rank_scan_serial(f, dirs, 8, 1e-5));
}

TEST_CASE("jacobian along the X1-then-X0 broken line of a second-kind group is singular") {
  // abnormality of the concatenated curve survives any restriction of the
  // variation space, so the finite-difference rank must stay deficient;
  // a generic broken line with the same subdivision reaches full rank
  AlgebraPtr f = make_filiform(FiliformKind::second, 5);
  auto dir = [&](double a, double b) {
    DblElement d = zero<double>(f);
    d.coeffs[0] = a;
    d.coeffs[1] = b;
    return d;
  };
  HorizontalControl<double> broken, generic;
  for (int k = 0; k < 4; ++k) {
    broken.pieces.push_back({0.25, dir(0.0, 1.0)});
    generic.pieces.push_back({0.25, dir(1.0, 0.3 + 0.2 * k)});
  }
  for (int k = 0; k < 4; ++k) {
    broken.pieces.push_back({0.25, dir(1.0, 0.0)});
    generic.pieces.push_back({0.25, dir(0.5, -0.4 - 0.1 * k)});
  }
  CHECK(control_jacobian_rank(f, broken, 1e-5) < f->dim());
  CHECK(control_jacobian_rank(f, generic, 1e-5) == f->dim());
}

TEST_CASE("jacobian argument guards") {
  AlgebraPtr heis = make_heisenberg();
  DblElement x = basis_element<double>(heis, 0);
  CHECK_THROWS_AS(endpoint_jacobian_rank(x, 0, 1e-5), CarnotError);
  CHECK_THROWS_AS(endpoint_jacobian_rank(x, 8, 0.0), CarnotError);
  CHECK_THROWS_AS(endpoint_jacobian_rank(x, 8, 1e-2), CarnotError);
  CHECK_THROWS_AS(endpoint_jacobian_rank(basis_element<double>(heis, 2), 8, 1e-5), CarnotError);
}
