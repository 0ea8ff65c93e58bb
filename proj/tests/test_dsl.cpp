#include <doctest.h>

#include "carnotkit/catalog.hpp"
#include "carnotkit/dsl.hpp"

using namespace carnotkit;

namespace {

const char* kEngelText = R"(# Engel group, step 3
algebra engel
step 3
layer 1: X0 X1
layer 2: X2
layer 3: X3
bracket [X0,X1] = 1*X2
bracket [X0,X2] = 1*X3
)";

}  // namespace

TEST_CASE("parses and validates the engel file") {
  AlgebraDocument doc = parse_algebra_file(kEngelText);
  REQUIRE(doc.ok());
  CHECK(doc.algebra->name() == "engel");
  CHECK(doc.algebra->dim() == 4);
  CHECK(doc.algebra->step() == 3);
  CHECK(doc.algebra->layer_dims() == std::vector<int>{2, 1, 1});
}

TEST_CASE("empty bracket section with step 1 gives an abelian algebra") {
  AlgebraDocument doc = parse_algebra_file("algebra flat\nstep 1\nlayer 1: a b c\n");
  REQUIRE(doc.ok());
  CHECK(doc.algebra->dim() == 3);
  CHECK(doc.algebra->step() == 1);
  CHECK(doc.algebra->def().brackets.empty());
}

TEST_CASE("duplicate bracket pairs are rejected with positions") {
  std::string text = std::string(kEngelText) + "bracket [X1,X0] = -1*X2\n";
  AlgebraDocument doc = parse_algebra_file(text);
  CHECK_FALSE(doc.ok());
  REQUIRE_FALSE(doc.diagnostics.empty());
  const Diagnostic& d = doc.diagnostics.front();
  CHECK(d.line == 9);
  CHECK(d.column > 0);
  CHECK(d.message.find("duplicates") != std::string::npos);
}

TEST_CASE("duplicate labels are rejected") {
  AlgebraDocument doc = parse_algebra_file("algebra a\nstep 2\nlayer 1: X X\nlayer 2: Z\n");
  CHECK_FALSE(doc.ok());
  bool found = false;
  for (const auto& d : doc.diagnostics)
    if (d.message.find("duplicate label") != std::string::npos && d.line == 3) found = true;
  CHECK(found);
}

TEST_CASE("wrong-layer targets are rejected at the bracket line") {
  AlgebraDocument doc = parse_algebra_file(
      "algebra a\nstep 3\nlayer 1: X Y\nlayer 2: Z\nlayer 3: W\nbracket [X,Y] = 1*W\n");
  CHECK_FALSE(doc.ok());
  bool found = false;
  for (const auto& d : doc.diagnostics)
    if (d.line == 6 && d.message.find("layer") != std::string::npos) found = true;
  CHECK(found);
}

TEST_CASE("lexical errors carry positions") {
  AlgebraDocument doc = parse_algebra_file("algebra a\nstep 2\nlayer 1: X Y\nlayer 2: Z\nbracket [X,Y] = 1*\n");
  CHECK_FALSE(doc.ok());
  REQUIRE_FALSE(doc.diagnostics.empty());
  CHECK(doc.diagnostics.front().line == 5);
  CHECK(doc.diagnostics.front().phase == Diagnostic::Phase::parse);
}

TEST_CASE("identity violations surface as validation diagnostics") {
  // jacobi(X,Y,Z) = [X,[Y,Z]] + [Y,[Z,X]] + [Z,[X,Y]] = V - 0 + 0 != 0
  AlgebraDocument doc = parse_algebra_file(
      "algebra a\nstep 4\nlayer 1: X Y\nlayer 2: Z\nlayer 3: W\nlayer 4: V\n"
      "bracket [X,Y] = 1*Z\nbracket [X,Z] = 1*W\nbracket [Y,Z] = 1*W\nbracket [X,W] = 1*V\n");
  CHECK(doc.def.has_value());
  CHECK_FALSE(doc.ok());
  bool jacobi = false;
  for (const auto& d : doc.diagnostics) {
    if (d.phase == Diagnostic::Phase::validation && d.message.find("jacobi") != std::string::npos)
      jacobi = true;
  }
  CHECK(jacobi);
}

TEST_CASE("rational coefficients round-trip") {
  const char* text =
      "algebra frac\nstep 2\nlayer 1: A B\nlayer 2: C\nbracket [A,B] = -3/4*C\n";
  AlgebraDocument doc = parse_algebra_file(text);
  REQUIRE(doc.ok());
  RatElement br = bracket(basis_element<Rat>(doc.algebra, 0), basis_element<Rat>(doc.algebra, 1));
  CHECK(br.coeffs[2] == Rat(-3, 4));
}

TEST_CASE("serialize/parse round-trip preserves the structure tensor") {
  for (const char* name : {"heis", "engel", "filiform2:5", "free:2,3", "free:3,2"}) {
    AlgebraPtr alg = builtin_algebra(name);
    AlgebraDocument doc = parse_algebra_file(serialize_algebra(*alg));
    REQUIRE(doc.ok());
    CHECK(doc.algebra->def().labels == alg->def().labels);
    CHECK(doc.algebra->def().weights == alg->def().weights);
    CHECK(doc.algebra->def().brackets == alg->def().brackets);
    // and the round trip is idempotent at the text level
    CHECK(serialize_algebra(*doc.algebra) == serialize_algebra(*alg));
  }
}

TEST_CASE("product output survives the round trip") {
  AlgebraPtr prod = direct_product(builtin_algebra("engel"), builtin_algebra("heis"));
  AlgebraDocument doc = parse_algebra_file(serialize_algebra(*prod));
  REQUIRE(doc.ok());
  CHECK(doc.algebra->def().brackets == prod->def().brackets);
}
