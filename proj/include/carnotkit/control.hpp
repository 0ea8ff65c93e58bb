#ifndef CARNOTKIT_CONTROL_HPP
#define CARNOTKIT_CONTROL_HPP

#include <optional>
#include <utility>
#include <vector>

#include "carnotkit/algebra.hpp"
#include "carnotkit/bch.hpp"

namespace carnotkit {

/// Piecewise-constant horizontal curve: positive durations with
/// horizontal directions. Each constant piece flows along a
/// one-parameter subgroup, so the end point is computed exactly by BCH.
template <class T>
struct ControlPiece {
  T duration;
  Element<T> direction;
};

template <class T>
struct HorizontalControl {
  std::vector<ControlPiece<T>> pieces;

  T total_duration() const {
    T sum(0);
    for (const auto& p : pieces) sum += p.duration;
    return sum;
  }
};

template <class T>
void validate_control(const HorizontalControl<T>& h, const AlgebraPtr& alg) {
  for (const auto& piece : h.pieces) {
    detail::require_same(piece.direction.algebra, alg);
    if (!(piece.duration > T(0))) throw CarnotError("control durations must be positive");
    if (!is_horizontal(piece.direction))
      throw CarnotError("control directions must be horizontal");
  }
}

/// End point of the curve driven from the identity: the ordered BCH
/// product of exp(duration * direction) over the pieces. Empty control
/// ends at the identity.
template <class T>
Element<T> endpoint(const AlgebraPtr& alg, const HorizontalControl<T>& h) {
  validate_control(h, alg);
  Element<T> point = zero<T>(alg);
  for (const auto& piece : h.pieces)
    point = bch_product(point, scale(piece.duration, piece.direction));
  return point;
}

/// Reversed control with negated directions; drives to the group inverse
/// of the original end point.
template <class T>
HorizontalControl<T> reverse_negate(const HorizontalControl<T>& h) {
  HorizontalControl<T> out;
  for (auto it = h.pieces.rbegin(); it != h.pieces.rend(); ++it)
    out.pieces.push_back({it->duration, scale(T(-1), it->direction)});
  return out;
}

/// Numerical rank of the end-point differential along the constant
/// control X split into `pieces` equal sub-intervals: central differences
/// of per-piece horizontal perturbations, SVD rank at rel_tol*sigma_max.
int endpoint_jacobian_rank(const DblElement& x, int pieces, double h, double rel_tol = 1e-8);

/// Same finite-difference rank along an arbitrary control.
int control_jacobian_rank(const AlgebraPtr& alg, const HorizontalControl<double>& control,
                          double h, double rel_tol = 1e-8);

/// Jacobian ranks for a batch of directions (OpenMP kernel + serial
/// reference).
std::vector<int> jacobian_rank_scan(const AlgebraPtr& alg, const std::vector<DblElement>& dirs,
                                    int pieces, double h, double rel_tol = 1e-8);
std::vector<int> jacobian_rank_scan_serial(const AlgebraPtr& alg,
                                           const std::vector<DblElement>& dirs, int pieces,
                                           double h, double rel_tol = 1e-8);

/// Dilation-invariant region. `cap` keeps the points whose quasi-norm
/// normalization lies within `radius` (Euclidean, ambient coordinates) of
/// `center`; `halfspace_lift` tests the sign of <layer-1, nu>; `cloud`
/// tests conic proximity to a normalized point set. `inverse` tests the
/// group inverse against the direct cone.
struct ConeSpec {
  enum class Kind { cap, halfspace_lift, cloud };
  Kind kind = Kind::cap;
  bool inverse = false;
  // cap
  DblElement center;
  double radius = 0.0;
  // halfspace_lift
  std::vector<double> nu;  // layer-1 coordinates
  bool strict = false;
  // cloud
  std::vector<DblElement> points;
  double tolerance = 0.0;
};

ConeSpec cap_cone(DblElement center, double radius);
ConeSpec halfspace_cone(std::vector<double> nu, bool strict);
ConeSpec cloud_cone(std::vector<DblElement> points, double tolerance);
ConeSpec inverted(ConeSpec spec);

/// Membership predicate; the identity point is never contained.
bool cone_contains(const ConeSpec& spec, const DblElement& p);

struct ConePropertyResult {
  bool holds = true;
  std::optional<std::pair<int, int>> witness;  // indices (p, q) in Gamma
};

/// Outer cone property of a finite set: no p^{-1} q may land in the cone.
/// Witness is the lexicographically first violating pair.
ConePropertyResult cone_property_check(const AlgebraPtr& alg,
                                       const std::vector<DblElement>& gamma,
                                       const ConeSpec& spec);
ConePropertyResult cone_property_check_serial(const AlgebraPtr& alg,
                                              const std::vector<DblElement>& gamma,
                                              const ConeSpec& spec);

struct LipschitzResult {
  bool holds = true;
  struct Violation {
    int p = 0, q = 0;
    double t = 0.0;
    double distance = 0.0;  // quasi-norm distance to exp(tX)
    double bound = 0.0;     // beta * |t| * ||X||
  };
  std::optional<Violation> witness;
};

/// Graph-cone check around the line L = exp(tX): every difference
/// p^{-1} q must stay quasi-norm distance >= beta * d(0, exp(tX)) away
/// from every nonzero point of L. t is searched over a two-sided log
/// grid scaled by the difference's quasi-norm, then refined by
/// golden-section.
LipschitzResult lipschitz_cone_check(const AlgebraPtr& alg, const std::vector<DblElement>& sigma,
                                     const DblElement& x, double beta);

}  // namespace carnotkit

#endif
