#include "carnotkit/semigroup.hpp"

#include <cmath>
#include <random>

#include "carnotkit/parallel.hpp"

namespace carnotkit {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<double> normalize_nu(const AlgebraPtr& alg, std::vector<double> nu) {
  if (nu.size() != static_cast<std::size_t>(alg->rank()))
    throw CarnotError("nu length must equal the horizontal rank");
  double norm2 = 0.0;
  for (double c : nu) norm2 += c * c;
  if (!(norm2 > 0)) throw CarnotError("nu must be nonzero");
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& c : nu) c *= inv;
  return nu;
}

/// Control word for one cloud point: piece count uniform in
/// [1, max_pieces], durations exponential with mean 1/max_pieces,
/// direction = mu nu + w with mu half-normal and w uniform in the
/// nu^perp unit ball. Directions carry a factor magnitude_cap *
/// max_pieces, so one piece's displacement has scale magnitude_cap and
/// the cloud reliably fills regions of that quasi-norm size.
HorizontalControl<double> draw_control(const AlgebraPtr& alg, const std::vector<double>& nu,
                                       const SemigroupParams& params, std::uint64_t index) {
  std::mt19937_64 rng(splitmix64(params.seed ^ splitmix64(index)));
  std::uniform_int_distribution<int> piece_count(1, params.max_pieces);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::exponential_distribution<double> expo(static_cast<double>(params.max_pieces));
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const auto& g1 = alg->layer_indices(1);
  const int m = static_cast<int>(g1.size());
  const double scale = params.magnitude_cap * params.max_pieces;
  HorizontalControl<double> control;
  const int pieces = piece_count(rng);
  for (int k = 0; k < pieces; ++k) {
    const double mu = std::abs(gauss(rng));
    // uniform direction in the nu^perp unit ball
    std::vector<double> w(m, 0.0);
    if (m > 1) {
      double dot = 0.0, norm2 = 0.0;
      for (int j = 0; j < m; ++j) {
        w[j] = gauss(rng);
        dot += w[j] * nu[j];
      }
      for (int j = 0; j < m; ++j) {
        w[j] -= dot * nu[j];
        norm2 += w[j] * w[j];
      }
      if (norm2 > 1e-24) {
        const double radius = std::pow(unit(rng), 1.0 / std::max(1, m - 1));
        const double rescale = radius / std::sqrt(norm2);
        for (int j = 0; j < m; ++j) w[j] *= rescale;
      }
    }
    DblElement dir = zero<double>(alg);
    for (int j = 0; j < m; ++j) dir.coeffs[g1[j]] = scale * (mu * nu[j] + w[j]);
    double duration = 0.0;
    while (!(duration > 0.0)) duration = expo(rng);
    control.pieces.push_back({duration, std::move(dir)});
  }
  return control;
}

SemigroupCloud sample_impl(const AlgebraPtr& alg, const std::vector<double>& nu_in,
                           const SemigroupParams& params, bool parallel) {
  if (params.count < 0) throw CarnotError("sample count must be nonnegative");
  if (params.max_pieces < 1) throw CarnotError("max_pieces must be >= 1");
  if (!(params.magnitude_cap > 0)) throw CarnotError("magnitude_cap must be positive");

  SemigroupCloud cloud;
  cloud.algebra = alg;
  cloud.nu = normalize_nu(alg, nu_in);
  cloud.params = params;
  cloud.points.resize(params.count, zero<double>(alg));
  cloud.generators.resize(params.count);

  const int count = params.count;
  if (parallel) {
#pragma omp parallel for schedule(static) num_threads(worker_threads())
    for (int i = 0; i < count; ++i) {
      cloud.generators[i] = draw_control(alg, cloud.nu, params, static_cast<std::uint64_t>(i));
      cloud.points[i] = endpoint(alg, cloud.generators[i]);
    }
  } else {
    for (int i = 0; i < count; ++i) {
      cloud.generators[i] = draw_control(alg, cloud.nu, params, static_cast<std::uint64_t>(i));
      cloud.points[i] = endpoint(alg, cloud.generators[i]);
    }
  }
  return cloud;
}

}  // namespace

SemigroupCloud sample_semigroup(const AlgebraPtr& alg, const std::vector<double>& nu,
                                const SemigroupParams& params) {
  return sample_impl(alg, nu, params, true);
}

SemigroupCloud sample_semigroup_serial(const AlgebraPtr& alg, const std::vector<double>& nu,
                                       const SemigroupParams& params) {
  return sample_impl(alg, nu, params, false);
}

Membership interior_membership_heuristic(const DblElement& target, const SemigroupCloud& cloud,
                                         double radius) {
  if (cloud.points.empty()) throw CarnotError("interior heuristic needs a nonempty cloud");
  detail::require_same(target.algebra, cloud.algebra);
  if (!(radius > 0)) throw CarnotError("radius must be positive");
  const int n = target.algebra->dim();
  // witnessed[2i] = some point within radius on the positive side of
  // coordinate i, witnessed[2i+1] = negative side
  std::vector<bool> witnessed(2 * n, false);
  int missing = 2 * n;
  const double r2 = radius * radius;
  for (const auto& p : cloud.points) {
    double dist2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = p.coeffs[i] - target.coeffs[i];
      dist2 += d * d;
    }
    if (dist2 > r2) continue;
    for (int i = 0; i < n; ++i) {
      const double d = p.coeffs[i] - target.coeffs[i];
      if (d > 0 && !witnessed[2 * i]) {
        witnessed[2 * i] = true;
        --missing;
      } else if (d < 0 && !witnessed[2 * i + 1]) {
        witnessed[2 * i + 1] = true;
        --missing;
      }
    }
    if (missing == 0) return Membership::inside;
  }
  return Membership::inconclusive;
}

}  // namespace carnotkit
