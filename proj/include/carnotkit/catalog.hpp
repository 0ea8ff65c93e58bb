#ifndef CARNOTKIT_CATALOG_HPP
#define CARNOTKIT_CATALOG_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "carnotkit/algebra.hpp"
#include "carnotkit/linalg.hpp"

namespace carnotkit {

enum class FiliformKind { first, second };

/// Filiform algebra of step s on basis {X0, ..., Xs}:
/// first kind:  [X0, Xi] = X_{i+1} for i = 1..s-1;
/// second kind: [X0, Xi] = X_{i+1} for i = 1..s-2 and
///              [Xi, X_{s-i}] = (-1)^i X_s for i = 1..s-1
/// (second kind requires s = 2n+1 with n >= 2).
AlgebraPtr make_filiform(FiliformKind kind, int s);

/// Abelian algebra of rank m: step 1, every bracket zero.
AlgebraPtr make_abelian(int m);

/// Heisenberg algebra on {X1, X2, Z} with [X1, X2] = Z.
AlgebraPtr make_heisenberg();

/// Free nilpotent algebra of rank m and step s on a Hall basis; layer
/// dimensions follow the Witt formula. Throws when the total dimension
/// exceeds `dim_cap`.
AlgebraPtr make_free_nilpotent(int m, int s, int dim_cap = 64);

/// Componentwise-bracket direct sum; layer k is g_k(A) + g_k(B), step is
/// the larger step. Factor labels get suffixes "_1" / "_2".
AlgebraPtr direct_product(const AlgebraPtr& a, const AlgebraPtr& b);

struct QuotientOutcome {
  bool accepted = false;
  AlgebraPtr algebra;    // set when accepted
  RatMat projection;     // n_quotient x n_original, graded morphism
  std::string reject_reason;
  std::optional<RatElement> witness;  // bracket escaping the span, when not an ideal
};

/// Quotient by the span of `ideal_span`, verified to be graded and an
/// ideal (brute force per layer). The surviving basis consists of the
/// original basis vectors whose layer coordinates are not pivots of the
/// ideal, so labels carry over.
QuotientOutcome quotient(const AlgebraPtr& a, const std::vector<RatElement>& ideal_span);

RatElement push_forward(const QuotientOutcome& q, const RatElement& p);

/// Tagged constructor spec; also the parse target for builtin names
/// ("heis", "engel", "filiform1:4", "free:2,3", "abelian:2", "cartan").
struct AlgebraSpecTag {
  enum class Family {
    abelian,
    heisenberg,
    filiform_first,
    filiform_second,
    free_nilpotent,
    product,
    quotient,
  };
  Family family = Family::abelian;
  int m = 0;
  int s = 0;
  std::vector<AlgebraSpecTag> factors;  // product
  std::vector<RatVec> ideal;            // quotient (coefficient vectors)
};

AlgebraPtr make_algebra(const AlgebraSpecTag& tag);
std::optional<AlgebraSpecTag> parse_spec_tag(std::string_view text);

/// Resolves a builtin name; throws CarnotError with the known names on
/// failure.
AlgebraPtr builtin_algebra(std::string_view name);
std::vector<std::string> builtin_names();

}  // namespace carnotkit

#endif
