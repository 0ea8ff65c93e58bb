#ifndef CARNOTKIT_SEMIGROUP_HPP
#define CARNOTKIT_SEMIGROUP_HPP

#include <cstdint>
#include <vector>

#include "carnotkit/control.hpp"

namespace carnotkit {

struct SemigroupParams {
  int count = 1000;
  int max_pieces = 8;
  double magnitude_cap = 1.0;
  std::uint64_t seed = 0;
};

/// Monte-Carlo sample of the semigroup generated by exponentials of the
/// control half-space nu^perp + R+ nu in g_1. Every point is the end
/// point of a recorded control whose pieces all have a nonnegative
/// nu-component, so <nu, layer-1 part> >= 0 holds for every point.
struct SemigroupCloud {
  AlgebraPtr algebra;
  std::vector<double> nu;  // unit layer-1 coordinates
  SemigroupParams params;
  std::vector<DblElement> points;
  std::vector<HorizontalControl<double>> generators;
};

/// Deterministic in (seed, params): each point draws from its own
/// splitmix-seeded generator, so the OpenMP kernel and the serial
/// reference produce identical clouds.
SemigroupCloud sample_semigroup(const AlgebraPtr& alg, const std::vector<double>& nu,
                                const SemigroupParams& params);
SemigroupCloud sample_semigroup_serial(const AlgebraPtr& alg, const std::vector<double>& nu,
                                       const SemigroupParams& params);

enum class Membership { inside, inconclusive };

/// One-sided interior test: `inside` only when cloud points surround the
/// target on all 2n signed coordinate directions within the given
/// Euclidean radius. Callers must pre-filter targets that violate the
/// nu-component invariant; the heuristic never confirms those. Note that
/// coordinate surrounding does not imply interiority: semigroup boundary
/// points whose complement approaches through an oblique wedge (as
/// happens for horizontal exponentials in the rank-2 step-3 free group)
/// can still report `inside`.
Membership interior_membership_heuristic(const DblElement& target, const SemigroupCloud& cloud,
                                         double radius);

}  // namespace carnotkit

#endif
