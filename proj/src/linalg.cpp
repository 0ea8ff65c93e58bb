#include "carnotkit/linalg.hpp"

#include <algorithm>
#include <cassert>

namespace carnotkit {

RatVec RowSpace::reduce(RatVec v) const {
  assert(static_cast<int>(v.size()) == cols_);
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const Rat& c = v[pivots_[r]];
    if (c != 0) {
      Rat factor = c;  // pivot entries are 1
      for (int j = pivots_[r]; j < cols_; ++j) {
        if (rows_[r][j] != 0) v[j] -= factor * rows_[r][j];
      }
    }
  }
  return v;
}

bool RowSpace::contains(RatVec v) const {
  v = reduce(std::move(v));
  return std::all_of(v.begin(), v.end(), [](const Rat& x) { return x == 0; });
}

bool RowSpace::insert(RatVec v) {
  v = reduce(std::move(v));
  int pivot = -1;
  for (int j = 0; j < cols_; ++j) {
    if (v[j] != 0) {
      pivot = j;
      break;
    }
  }
  if (pivot < 0) return false;
  Rat inv = v[pivot];
  for (int j = pivot; j < cols_; ++j) {
    if (v[j] != 0) v[j] /= inv;
  }
  // back-substitute into existing rows to keep reduced form
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const Rat& c = rows_[r][pivot];
    if (c != 0) {
      Rat factor = c;
      for (int j = pivot; j < cols_; ++j) {
        if (v[j] != 0) rows_[r][j] -= factor * v[j];
      }
    }
  }
  // keep rows ordered by pivot column
  std::size_t at = 0;
  while (at < rows_.size() && pivots_[at] < pivot) ++at;
  rows_.insert(rows_.begin() + at, std::move(v));
  pivots_.insert(pivots_.begin() + at, pivot);
  return true;
}

int rat_rank(const RatMat& rows, int cols) {
  RowSpace space(cols);
  for (const auto& r : rows) space.insert(r);
  return space.rank();
}

RatMat kernel_basis(const RatMat& a, int cols) {
  RowSpace space(cols);
  for (const auto& r : a) space.insert(r);
  const RatMat& rref = space.rows();
  const std::vector<int>& pivots = space.pivots();
  std::vector<bool> is_pivot(cols, false);
  for (int p : pivots) is_pivot[p] = true;

  RatMat kernel;
  for (int free_col = 0; free_col < cols; ++free_col) {
    if (is_pivot[free_col]) continue;
    RatVec x(cols, Rat(0));
    x[free_col] = 1;
    for (std::size_t r = 0; r < rref.size(); ++r) {
      x[pivots[r]] = -rref[r][free_col];
    }
    kernel.push_back(std::move(x));
  }
  return kernel;
}

std::optional<RatVec> solve_linear(const RatMat& a, const RatVec& b) {
  const int rows = static_cast<int>(a.size());
  const int cols = rows == 0 ? 0 : static_cast<int>(a[0].size());
  assert(static_cast<int>(b.size()) == rows);
  // reduce the augmented system [A | b]
  RowSpace space(cols + 1);
  for (int i = 0; i < rows; ++i) {
    RatVec row(a[i]);
    row.push_back(b[i]);
    space.insert(std::move(row));
  }
  RatVec x(cols, Rat(0));
  for (int r = 0; r < space.rank(); ++r) {
    int p = space.pivots()[r];
    if (p == cols) return std::nullopt;  // 0 = 1 row: inconsistent
    x[p] = space.rows()[r][cols];
  }
  return x;
}

bool is_invertible(const RatMat& a) {
  if (a.empty()) return true;
  const int n = static_cast<int>(a.size());
  if (static_cast<int>(a[0].size()) != n) return false;
  return rat_rank(a, n) == n;
}

int svd_rank(const Eigen::MatrixXd& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sigma = svd.singularValues();
  if (sigma.size() == 0 || sigma(0) <= 0.0) return 0;
  const double cut = rel_tol * sigma(0);
  int rank = 0;
  for (int i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cut) ++rank;
  }
  return rank;
}

double svd_rank_margin(const Eigen::MatrixXd& m, int rank) {
  if (rank <= 0 || m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sigma = svd.singularValues();
  if (rank > sigma.size()) rank = static_cast<int>(sigma.size());
  return sigma(rank - 1);
}

}  // namespace carnotkit
