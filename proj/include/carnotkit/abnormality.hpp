#ifndef CARNOTKIT_ABNORMALITY_HPP
#define CARNOTKIT_ABNORMALITY_HPP

#include <vector>

#include "carnotkit/algebra.hpp"
#include "carnotkit/linalg.hpp"

namespace carnotkit {

/// span{ad_X^k(g_1) : k = 0..s-1} for a horizontal X; the direction is
/// non-abnormal exactly when this is the whole algebra.
struct AdChainSpan {
  int dimension = 0;
  RatMat basis;  // echelon basis rows (rational route only)
};

AdChainSpan ad_chain_span(const RatElement& x);
/// Double route: dimension via SVD with threshold rel_tol * sigma_max.
int ad_chain_span_dim(const DblElement& x, double rel_tol = 1e-8);

struct AbnormalityVerdict {
  DblElement direction;  // normalized to unit quasi-norm
  int span_dim = 0;
  int full_dim = 0;
  bool non_abnormal = false;
  /// smallest retained singular value in double mode; the exact span
  /// dimension in rational mode.
  double rank_margin = 0.0;
};

AbnormalityVerdict is_non_abnormal(const RatElement& x);
AbnormalityVerdict is_non_abnormal(const DblElement& x, double rel_tol = 1e-8);

/// Exact enumeration of abnormal horizontal lines of a filiform algebra
/// through the kernels of X -> [X, X_i], i = 2..s-1. Each line appears
/// once, with the representative scaled so its first nonzero layer-1
/// coefficient is positive and the largest magnitude is 1.
std::vector<RatElement> abnormal_directions_filiform(const AlgebraPtr& a);

/// Deterministic unit-sphere sample of g_1: the uniform circle for
/// rank 2, +/-1 for rank 1, seeded Gaussian directions otherwise.
std::vector<DblElement> sphere_directions(const AlgebraPtr& a, int count);

struct ScanSample {
  DblElement direction;
  bool abnormal = false;
  int span_dim = 0;
  double rank_margin = 0.0;
};

struct ScanReport {
  AlgebraPtr algebra;
  int resolution = 0;
  std::vector<ScanSample> samples;
  int abnormal_count = 0;
};

/// Samples the g_1 unit sphere and classifies every direction. The
/// parallel kernel and the serial reference produce identical reports.
ScanReport scan_abnormal_directions(const AlgebraPtr& a, int resolution, double rel_tol = 1e-8);
ScanReport scan_abnormal_directions_serial(const AlgebraPtr& a, int resolution,
                                           double rel_tol = 1e-8);

}  // namespace carnotkit

#endif
