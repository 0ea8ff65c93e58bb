#ifndef CARNOTKIT_DSL_HPP
#define CARNOTKIT_DSL_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "carnotkit/algebra.hpp"

namespace carnotkit {

struct Diagnostic {
  enum class Phase { parse, validation };
  int line = 0;    // 1-based; 0 when no source position applies
  int column = 0;  // 1-based
  std::string message;
  Phase phase = Phase::parse;
};

/// Parsed algebra-definition file. `algebra` is set only when the text
/// parsed cleanly and validated; all problems, lexical through identity
/// violations, land in `diagnostics` with positions where available.
struct AlgebraDocument {
  std::string source;
  std::optional<AlgebraDef> def;  // present when structurally parseable
  AlgebraPtr algebra;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return algebra != nullptr; }
};

/// Line-oriented grammar:
///   algebra <name>
///   step <s>
///   layer <i>: <label> [<label> ...]
///   bracket [<a>,<b>] = <coeff>*<label> [+|- <coeff>*<label> ...]
/// with rational coefficients p/q and '#' comments. Unspecified brackets
/// are zero. Duplicate labels, duplicate bracket pairs (either order),
/// and wrong-layer targets are rejected with line/column positions.
AlgebraDocument parse_algebra_file(std::string_view text);

/// Canonical text form; reparsing yields an identical structure tensor.
std::string serialize_algebra(const GradedAlgebra& alg);

}  // namespace carnotkit

#endif
