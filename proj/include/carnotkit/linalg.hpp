#ifndef CARNOTKIT_LINALG_HPP
#define CARNOTKIT_LINALG_HPP

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "carnotkit/rational.hpp"

namespace carnotkit {

using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;  // row major

/// Incremental exact row space: rows are kept in reduced echelon form,
/// so rank, membership, and coordinates stay exact for rational input.
class RowSpace {
 public:
  explicit RowSpace(int cols) : cols_(cols) {}

  /// Reduces v against the current rows; if a nonzero remainder is left,
  /// inserts it (rank grows) and returns true.
  bool insert(RatVec v);

  bool contains(RatVec v) const;

  /// Remainder of v after reduction (zero vector iff contained).
  RatVec reduce(RatVec v) const;

  int rank() const { return static_cast<int>(rows_.size()); }
  int cols() const { return cols_; }
  const RatMat& rows() const { return rows_; }
  const std::vector<int>& pivots() const { return pivots_; }

 private:
  int cols_;
  RatMat rows_;               // echelon rows, pivot coefficient 1
  std::vector<int> pivots_;   // pivot column per row
};

/// Rank of an arbitrary rational matrix (rows need not be reduced).
int rat_rank(const RatMat& rows, int cols);

/// Basis of the null space of A (a: rows x cols). Each returned vector x
/// satisfies A x = 0.
RatMat kernel_basis(const RatMat& a, int cols);

/// Any solution of A x = b, or nullopt when inconsistent.
std::optional<RatVec> solve_linear(const RatMat& a, const RatVec& b);

/// Determinant-free invertibility test for a square rational matrix.
bool is_invertible(const RatMat& a);

/// Numerical rank: number of singular values above rel_tol * sigma_max.
int svd_rank(const Eigen::MatrixXd& m, double rel_tol = 1e-8);

/// Smallest singular value among the first `rank` ones (0 if rank == 0).
double svd_rank_margin(const Eigen::MatrixXd& m, int rank);

}  // namespace carnotkit

#endif
