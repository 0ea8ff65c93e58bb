#ifndef CARNOTKIT_ALGEBRA_HPP
#define CARNOTKIT_ALGEBRA_HPP

#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "carnotkit/rational.hpp"

namespace carnotkit {

/// Raw, possibly inconsistent definition of a graded Lie algebra, as it
/// comes out of the parser or a test fixture. `brackets` may contain a
/// pair in either or both orders; validate_algebra reconciles them.
struct AlgebraDef {
  std::string name;
  int step = 0;
  std::vector<std::string> labels;
  std::vector<int> weights;  // weights[i] in 1..step
  std::map<std::pair<int, int>, std::vector<std::pair<int, Rat>>> brackets;
};

enum class FindingKind { structural, antisymmetry, jacobi, grading, stratification };

const char* finding_kind_name(FindingKind kind);

struct Finding {
  FindingKind kind;
  std::vector<int> indices;  // offending pair or triple (basis indices); may be empty
  std::string detail;
};

struct ValidationReport {
  std::vector<Finding> structural;  // malformed tensor: out-of-range indices etc.
  std::vector<Finding> violations;  // antisymmetry / Jacobi / grading / stratification
  bool ok() const { return structural.empty() && violations.empty(); }
  std::string summary() const;
};

/// Checks the four defining identities (antisymmetry, Jacobi, grading,
/// stratification) plus tensor well-formedness. Structural errors and
/// identity violations are reported separately.
ValidationReport validate_algebra(const AlgebraDef& def);

struct BracketTerm {
  int target;
  Rat coeff;
  double coeff_d;
};
using TermList = std::vector<BracketTerm>;

class GradedAlgebra;
using AlgebraPtr = std::shared_ptr<const GradedAlgebra>;

/// Immutable stratified Lie algebra over an ordered basis. Instances are
/// created through `create`, which validates the definition first, so an
/// existing GradedAlgebra always satisfies the four identities exactly.
/// Safe to share across threads.
class GradedAlgebra {
 public:
  /// Validates `def` and freezes it; throws CarnotError when the report
  /// is not clean.
  static AlgebraPtr create(AlgebraDef def);

  const std::string& name() const { return def_.name; }
  int dim() const { return static_cast<int>(def_.labels.size()); }
  int step() const { return def_.step; }
  /// dim of the first (horizontal) layer.
  int rank() const { return layer_dims_[0]; }
  int weight(int i) const { return def_.weights[i]; }
  const std::vector<int>& layer_dims() const { return layer_dims_; }
  /// Basis indices of layer k (1-based layer).
  const std::vector<int>& layer_indices(int k) const { return layers_[k - 1]; }
  const std::vector<std::string>& labels() const { return def_.labels; }
  const std::string& label(int i) const { return def_.labels[i]; }
  std::optional<int> index_of(const std::string& label) const;
  /// Homogeneous dimension Q = sum_i i * dim g_i.
  int homogeneous_dim() const { return homogeneous_dim_; }

  /// Structure terms of [e_i, e_j] for any i, j (antisymmetry applied).
  /// Returned spans alias internal storage; empty list means zero.
  const TermList& terms(int i, int j) const;

  /// Canonical normalized definition (brackets stored with i < j only);
  /// serialization round-trips through this.
  const AlgebraDef& def() const { return def_; }

 private:
  GradedAlgebra() = default;

  AlgebraDef def_;                       // normalized: keys (i, j) with i < j
  std::vector<std::vector<TermList>> upper_;  // upper_[i][j - i - 1] for i < j
  std::vector<std::vector<TermList>> lower_;  // negated mirror for i > j
  std::vector<std::vector<int>> layers_;
  std::vector<int> layer_dims_;
  int homogeneous_dim_ = 0;
  TermList empty_;
};

/// Coefficient vector over the ordered basis of a GradedAlgebra. In
/// exponential coordinates of the first kind the same object doubles as
/// a group point, with bch_product as group law.
template <class T>
struct Element {
  AlgebraPtr algebra;
  std::vector<T> coeffs;
};

using RatElement = Element<Rat>;
using DblElement = Element<double>;

namespace detail {
inline const Rat& pick_scalar(const Rat& r, double, const Rat*) { return r; }
inline double pick_scalar(const Rat&, double d, const double*) { return d; }
inline const Rat& term_coeff(const BracketTerm& t, const Rat*) { return t.coeff; }
inline double term_coeff(const BracketTerm& t, const double*) { return t.coeff_d; }

inline void require_same(const AlgebraPtr& a, const AlgebraPtr& b) {
  if (a.get() != b.get())
    throw CarnotError("elements belong to different algebras");
}
}  // namespace detail

template <class T>
Element<T> make_element(AlgebraPtr alg, std::vector<T> coeffs) {
  if (static_cast<int>(coeffs.size()) != alg->dim())
    throw CarnotError("coefficient vector length does not match algebra dimension");
  return Element<T>{std::move(alg), std::move(coeffs)};
}

template <class T>
Element<T> zero(AlgebraPtr alg) {
  std::vector<T> c(alg->dim(), T(0));
  return Element<T>{std::move(alg), std::move(c)};
}

template <class T>
Element<T> basis_element(AlgebraPtr alg, int i) {
  Element<T> e = zero<T>(std::move(alg));
  e.coeffs[i] = T(1);
  return e;
}

template <class T>
Element<T> add(const Element<T>& a, const Element<T>& b) {
  detail::require_same(a.algebra, b.algebra);
  Element<T> r = a;
  for (std::size_t i = 0; i < r.coeffs.size(); ++i) r.coeffs[i] += b.coeffs[i];
  return r;
}

template <class T>
Element<T> scale(const T& s, const Element<T>& a) {
  Element<T> r = a;
  for (auto& c : r.coeffs) c *= s;
  return r;
}

template <class T>
bool is_zero(const Element<T>& a) {
  for (const auto& c : a.coeffs)
    if (!(c == T(0))) return false;
  return true;
}

/// Bilinear extension of the structure tensor.
template <class T>
Element<T> bracket(const Element<T>& a, const Element<T>& b) {
  detail::require_same(a.algebra, b.algebra);
  const GradedAlgebra& alg = *a.algebra;
  Element<T> r = zero<T>(a.algebra);
  const int n = alg.dim();
  for (int i = 0; i < n; ++i) {
    if (a.coeffs[i] == T(0)) continue;
    for (int j = 0; j < n; ++j) {
      if (i == j || b.coeffs[j] == T(0)) continue;
      const TermList& terms = alg.terms(i, j);
      if (terms.empty()) continue;
      T prod = a.coeffs[i] * b.coeffs[j];
      for (const BracketTerm& t : terms)
        r.coeffs[t.target] += prod * detail::term_coeff(t, static_cast<const T*>(nullptr));
    }
  }
  return r;
}

/// ad_X^0(Y) = Y, ad_X^k(Y) = ad_X^{k-1}([X, Y]).
template <class T>
Element<T> ad_power(const Element<T>& x, const Element<T>& y, int k) {
  if (k < 0) throw CarnotError("ad_power: negative exponent");
  Element<T> r = y;
  for (int i = 0; i < k; ++i) r = bracket(x, r);
  return r;
}

/// Zeroes every coefficient outside layer k.
template <class T>
Element<T> layer_project(const Element<T>& p, int k) {
  Element<T> r = zero<T>(p.algebra);
  for (int i : p.algebra->layer_indices(k)) r.coeffs[i] = p.coeffs[i];
  return r;
}

template <class T>
bool is_horizontal(const Element<T>& p) {
  for (int i = 0; i < p.algebra->dim(); ++i)
    if (p.algebra->weight(i) != 1 && !(p.coeffs[i] == T(0))) return false;
  return true;
}

/// Coefficients of the layer-1 part, in layer-1 basis order.
template <class T>
std::vector<T> horizontal_coeffs(const Element<T>& p) {
  std::vector<T> out;
  for (int i : p.algebra->layer_indices(1)) out.push_back(p.coeffs[i]);
  return out;
}

/// Anisotropic dilation: the weight-w coefficient scales by r^w.
/// r = 0 is accepted and collapses everything to the identity point.
template <class T>
Element<T> dilate(const T& r, const Element<T>& p) {
  if (r < T(0)) throw CarnotError("dilate: negative ratio");
  Element<T> out = p;
  for (int i = 0; i < p.algebra->dim(); ++i) {
    T f(1);
    for (int w = 0; w < p.algebra->weight(i); ++w) f *= r;
    out.coeffs[i] *= f;
  }
  return out;
}

inline DblElement to_double(const RatElement& p) {
  std::vector<double> c(p.coeffs.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = to_double(p.coeffs[i]);
  return DblElement{p.algebra, std::move(c)};
}

/// Box quasi-norm max_i |c_i|^{1/w_i}; exactly homogeneous under dilations.
double quasi_norm(const DblElement& p);
double quasi_norm(const RatElement& p);

std::string to_string(const RatElement& p);
std::string to_string(const DblElement& p);

}  // namespace carnotkit

#endif
