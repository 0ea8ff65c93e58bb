#ifndef CARNOTKIT_AUTOMORPHY_HPP
#define CARNOTKIT_AUTOMORPHY_HPP

#include <optional>
#include <string>
#include <utility>

#include "carnotkit/algebra.hpp"
#include "carnotkit/linalg.hpp"

namespace carnotkit {

/// A linear map on g_1, candidate for extension to a graded automorphism.
/// Column j of first_layer is the image of the j-th layer-1 basis vector.
struct GradedMapCandidate {
  AlgebraPtr algebra;
  RatMat first_layer;  // m x m
};

struct ExtensionResult {
  enum class Status { automorphism, obstructed };
  Status status = Status::obstructed;
  /// Block-graded n x n matrix (column i = image of e_i) when extended.
  RatMat full_map;
  std::string obstruction;
  /// Basis pair (i, j) with psi[e_i, e_j] != [psi e_i, psi e_j].
  std::optional<std::pair<int, int>> witness_pair;
};

/// Extends the candidate layer by layer through psi[x, y] := [psi x, psi y]
/// on spanning brackets, then verifies every bracket relation. Exact
/// arithmetic throughout; a failed relation is returned as a witness.
ExtensionResult extend_graded_map(const GradedMapCandidate& candidate);

/// Dimension of the space of layer-preserving derivations
/// (D[x,y] = [Dx,y] + [x,Dy]); the unknowns reduce to the m^2 entries of
/// the g_1 block since the algebra is generated by its first layer.
int graded_derivation_dimension(const AlgebraPtr& a);

/// True iff the matrix is invertible, layer-preserving, and
/// bracket-preserving on all basis pairs.
bool is_graded_automorphism(const RatMat& full_map, const AlgebraPtr& a);

}  // namespace carnotkit

#endif
