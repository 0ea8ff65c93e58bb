#include "carnotkit/abnormality.hpp"

#include <cmath>
#include <random>

#include "carnotkit/parallel.hpp"

namespace carnotkit {

namespace {

void require_horizontal_nonzero(bool horizontal, bool zero) {
  if (!horizontal) throw CarnotError("direction must be horizontal (layer-1 coefficients only)");
  if (zero) throw CarnotError("direction must be nonzero");
}

template <class T, class Push>
void for_each_chain_vector(const Element<T>& x, Push&& push) {
  const AlgebraPtr& alg = x.algebra;
  for (int e : alg->layer_indices(1)) {
    Element<T> v = basis_element<T>(alg, e);
    push(v);  // k = 0
    for (int k = 1; k < alg->step(); ++k) {
      v = bracket(x, v);
      push(v);
    }
  }
}

}  // namespace

AdChainSpan ad_chain_span(const RatElement& x) {
  require_horizontal_nonzero(is_horizontal(x), is_zero(x));
  RowSpace space(x.algebra->dim());
  for_each_chain_vector(x, [&](const RatElement& v) { space.insert(v.coeffs); });
  AdChainSpan out;
  out.dimension = space.rank();
  out.basis = space.rows();
  return out;
}

int ad_chain_span_dim(const DblElement& x, double rel_tol) {
  require_horizontal_nonzero(is_horizontal(x), is_zero(x));
  const int n = x.algebra->dim();
  std::vector<DblElement> rows;
  for_each_chain_vector(x, [&](const DblElement& v) { rows.push_back(v); });
  Eigen::MatrixXd m(rows.size(), n);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (int c = 0; c < n; ++c) m(static_cast<int>(r), c) = rows[r].coeffs[c];
  return svd_rank(m, rel_tol);
}

namespace {

DblElement normalize_direction(DblElement x) {
  const double norm = quasi_norm(x);
  if (norm > 0) {
    for (auto& c : x.coeffs) c /= norm;
  }
  return x;
}

AbnormalityVerdict verdict_double(const DblElement& x, double rel_tol) {
  require_horizontal_nonzero(is_horizontal(x), is_zero(x));
  const int n = x.algebra->dim();
  std::vector<DblElement> rows;
  for_each_chain_vector(x, [&](const DblElement& v) { rows.push_back(v); });
  Eigen::MatrixXd m(rows.size(), n);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (int c = 0; c < n; ++c) m(static_cast<int>(r), c) = rows[r].coeffs[c];
  AbnormalityVerdict out;
  out.direction = normalize_direction(x);
  out.full_dim = n;
  out.span_dim = svd_rank(m, rel_tol);
  out.non_abnormal = out.span_dim == n;
  out.rank_margin = svd_rank_margin(m, out.span_dim);
  return out;
}

}  // namespace

AbnormalityVerdict is_non_abnormal(const RatElement& x) {
  AdChainSpan span = ad_chain_span(x);
  AbnormalityVerdict out;
  out.direction = normalize_direction(to_double(x));
  out.full_dim = x.algebra->dim();
  out.span_dim = span.dimension;
  out.non_abnormal = span.dimension == out.full_dim;
  out.rank_margin = static_cast<double>(span.dimension);
  return out;
}

AbnormalityVerdict is_non_abnormal(const DblElement& x, double rel_tol) {
  return verdict_double(x, rel_tol);
}

std::vector<RatElement> abnormal_directions_filiform(const AlgebraPtr& a) {
  const auto& dims = a->layer_dims();
  bool filiform = a->step() >= 3 && dims[0] == 2;
  for (std::size_t k = 1; filiform && k < dims.size(); ++k)
    if (dims[k] != 1) filiform = false;
  if (!filiform)
    throw CarnotError(
        "abnormal_directions_filiform needs a filiform algebra of step >= 3 "
        "(layer dims 2,1,...,1); use scan_abnormal_directions instead");

  const auto& g1 = a->layer_indices(1);
  const int n = a->dim();
  std::vector<RatElement> lines;
  RowSpace seen(n);  // projective dedup: each kernel line is 1-dim here
  for (int i = 2; i < a->step(); ++i) {
    const int xi = a->layer_indices(i)[0];
    // kernel of X -> [X, X_i] on g_1
    RatMat rows;
    for (int e : g1) {
      RatElement br = bracket(basis_element<Rat>(a, e), basis_element<Rat>(a, xi));
      rows.push_back(br.coeffs);
    }
    // rows: 2 x n, want kernel combinations of the two g_1 generators
    RatMat system(n, RatVec(2, Rat(0)));
    for (int c = 0; c < 2; ++c)
      for (int r = 0; r < n; ++r) system[r][c] = rows[c][r];
    RatMat kernel = kernel_basis(system, 2);
    if (kernel.size() != 1)
      throw CarnotError("stratified filiform algebra must have 1-dim kernels of ad(.)X_i");
    RatVec full(n, Rat(0));
    for (int c = 0; c < 2; ++c) full[g1[c]] = kernel[0][c];
    if (!seen.insert(full)) continue;  // same line seen from another i
    // canonical representative: first nonzero coefficient positive,
    // largest magnitude 1 (unit box quasi-norm on the first layer)
    Rat biggest(0);
    Rat first(0);
    for (int c : g1) {
      if (full[c] != 0 && first == 0) first = full[c];
      Rat mag = full[c] < 0 ? Rat(-full[c]) : full[c];
      if (mag > biggest) biggest = mag;
    }
    Rat scale = first < 0 ? Rat(-biggest) : biggest;
    for (int c : g1) full[c] /= scale;
    lines.push_back(make_element(a, std::move(full)));
  }
  return lines;
}

std::vector<DblElement> sphere_directions(const AlgebraPtr& a, int count) {
  const auto& g1 = a->layer_indices(1);
  const int m = static_cast<int>(g1.size());
  std::vector<DblElement> dirs;
  dirs.reserve(count);
  if (m == 1) {
    for (int i = 0; i < count; ++i) {
      DblElement d = zero<double>(a);
      d.coeffs[g1[0]] = i % 2 == 0 ? 1.0 : -1.0;
      dirs.push_back(std::move(d));
    }
    return dirs;
  }
  if (m == 2) {
    for (int i = 0; i < count; ++i) {
      const double angle = 2.0 * M_PI * i / count;
      DblElement d = zero<double>(a);
      d.coeffs[g1[0]] = std::cos(angle);
      d.coeffs[g1[1]] = std::sin(angle);
      dirs.push_back(std::move(d));
    }
    return dirs;
  }
  std::mt19937_64 rng(0x5eedULL * 1315423911ULL + static_cast<std::uint64_t>(count));
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < count; ++i) {
    DblElement d = zero<double>(a);
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (int c : g1) {
        d.coeffs[c] = gauss(rng);
        norm2 += d.coeffs[c] * d.coeffs[c];
      }
    } while (norm2 < 1e-12);
    const double inv = 1.0 / std::sqrt(norm2);
    for (int c : g1) d.coeffs[c] *= inv;
    dirs.push_back(std::move(d));
  }
  return dirs;
}

namespace {

ScanReport scan_impl(const AlgebraPtr& a, int resolution, double rel_tol, bool parallel) {
  if (resolution < 8) throw CarnotError("scan resolution must be >= 8");
  ScanReport report;
  report.algebra = a;
  report.resolution = resolution;
  std::vector<DblElement> dirs = sphere_directions(a, resolution);
  report.samples.resize(dirs.size());

  const int count = static_cast<int>(dirs.size());
  if (parallel) {
#pragma omp parallel for schedule(static) num_threads(worker_threads())
    for (int i = 0; i < count; ++i) {
      AbnormalityVerdict v = is_non_abnormal(dirs[i], rel_tol);
      report.samples[i] = {v.direction, !v.non_abnormal, v.span_dim, v.rank_margin};
    }
  } else {
    for (int i = 0; i < count; ++i) {
      AbnormalityVerdict v = is_non_abnormal(dirs[i], rel_tol);
      report.samples[i] = {v.direction, !v.non_abnormal, v.span_dim, v.rank_margin};
    }
  }
  for (const auto& s : report.samples)
    if (s.abnormal) ++report.abnormal_count;
  return report;
}

}  // namespace

ScanReport scan_abnormal_directions(const AlgebraPtr& a, int resolution, double rel_tol) {
  return scan_impl(a, resolution, rel_tol, true);
}

ScanReport scan_abnormal_directions_serial(const AlgebraPtr& a, int resolution, double rel_tol) {
  return scan_impl(a, resolution, rel_tol, false);
}

}  // namespace carnotkit
