// Compares the OpenMP kernels against their serial reference
// implementations on representative workloads and reports speedups.

#include <chrono>
#include <cstdio>
#include <functional>

#include "carnotkit/abnormality.hpp"
#include "carnotkit/catalog.hpp"
#include "carnotkit/control.hpp"
#include "carnotkit/parallel.hpp"
#include "carnotkit/semigroup.hpp"

using namespace carnotkit;

namespace {

double time_ms(const std::function<void()>& fn) {
  auto start = std::chrono::steady_clock::now();
  fn();
  auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count();
}

void row(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-28s %10.1f ms %10.1f ms %7.2fx\n", name, serial_ms, parallel_ms,
              parallel_ms > 0 ? serial_ms / parallel_ms : 0.0);
}

}  // namespace

int main() {
  std::printf("workers: %d\n", worker_threads());
  std::printf("%-28s %13s %13s %8s\n", "kernel", "serial", "openmp", "speedup");

  {
    AlgebraPtr engel = builtin_algebra("engel");
    ScanReport serial_report, parallel_report;
    double s = time_ms([&] { serial_report = scan_abnormal_directions_serial(engel, 4096); });
    double p = time_ms([&] { parallel_report = scan_abnormal_directions(engel, 4096); });
    if (serial_report.abnormal_count != parallel_report.abnormal_count)
      std::printf("WARNING: scan results differ\n");
    row("abnormal scan engel/4096", s, p);
  }

  {
    AlgebraPtr heis = builtin_algebra("heis");
    SemigroupParams params;
    params.count = 200000;
    params.max_pieces = 8;
    params.seed = 7;
    SemigroupCloud a, b;
    double s = time_ms([&] { a = sample_semigroup_serial(heis, {1.0, 0.0}, params); });
    double p = time_ms([&] { b = sample_semigroup(heis, {1.0, 0.0}, params); });
    if (a.points.size() != b.points.size() || a.points[17].coeffs != b.points[17].coeffs)
      std::printf("WARNING: clouds differ\n");
    row("semigroup sample heis/2e5", s, p);
  }

  {
    AlgebraPtr f15 = builtin_algebra("filiform1:5");
    std::vector<DblElement> dirs = sphere_directions(f15, 288);
    std::vector<int> a, b;
    double s = time_ms([&] { a = jacobian_rank_scan_serial(f15, dirs, 8, 1e-5); });
    double p = time_ms([&] { b = jacobian_rank_scan(f15, dirs, 8, 1e-5); });
    if (a != b) std::printf("WARNING: rank scans differ\n");
    row("jacobian scan filiform1:5", s, p);
  }

  {
    // a set that satisfies the property, so both paths do the full
    // O(n^2) pair scan
    AlgebraPtr heis = builtin_algebra("heis");
    std::vector<DblElement> gamma;
    for (int k = 0; k < 1200; ++k) {
      DblElement p = zero<double>(heis);
      p.coeffs[1] = 0.01 * k;
      p.coeffs[2] = 0.003 * k * ((k % 2) ? 1 : -1);
      gamma.push_back(std::move(p));
    }
    ConeSpec cone = halfspace_cone({1.0, 0.0}, true);
    ConePropertyResult a, b;
    double s = time_ms([&] { a = cone_property_check_serial(heis, gamma, cone); });
    double p = time_ms([&] { b = cone_property_check(heis, gamma, cone); });
    if (a.holds != b.holds || !a.holds) std::printf("WARNING: unexpected cone result\n");
    row("cone pair check heis/1200", s, p);
  }

  return 0;
}
