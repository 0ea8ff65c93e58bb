#include "carnotkit/automorphy.hpp"

namespace carnotkit {

namespace {

RatVec apply_matrix(const RatMat& m, const RatVec& v) {
  const int rows = static_cast<int>(m.size());
  RatVec out(rows, Rat(0));
  for (int r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < v.size(); ++c)
      if (m[r][c] != 0 && v[c] != 0) out[r] += m[r][c] * v[c];
  return out;
}

/// Presentations of the layer-k basis vectors as combinations of
/// brackets [e_a, e_b], a in g_1, b in layer k-1. Guaranteed solvable by
/// stratification.
struct LayerPresentation {
  std::vector<std::pair<int, int>> pairs;  // (a, b) basis indices
  RatMat coefficients;                     // per layer-k basis vector: weights over pairs
};

LayerPresentation layer_presentation(const AlgebraPtr& a, int layer) {
  LayerPresentation pres;
  const auto& g1 = a->layer_indices(1);
  const auto& below = a->layer_indices(layer - 1);
  const auto& target = a->layer_indices(layer);
  RatMat columns;  // per pair: layer-k coordinates of the bracket
  for (int x : g1) {
    for (int y : below) {
      RatElement br = bracket(basis_element<Rat>(a, x), basis_element<Rat>(a, y));
      RatVec col;
      col.reserve(target.size());
      for (int t : target) col.push_back(br.coeffs[t]);
      pres.pairs.emplace_back(x, y);
      columns.push_back(std::move(col));
    }
  }
  // solve (columns^T) lambda = e_t for each basis vector of the layer
  RatMat system(target.size(), RatVec(pres.pairs.size(), Rat(0)));
  for (std::size_t p = 0; p < pres.pairs.size(); ++p)
    for (std::size_t r = 0; r < target.size(); ++r) system[r][p] = columns[p][r];
  for (std::size_t t = 0; t < target.size(); ++t) {
    RatVec rhs(target.size(), Rat(0));
    rhs[t] = 1;
    auto solution = solve_linear(system, rhs);
    if (!solution)
      throw CarnotError("internal: stratification presentation failed at layer " +
                        std::to_string(layer));
    pres.coefficients.push_back(std::move(*solution));
  }
  return pres;
}

}  // namespace

ExtensionResult extend_graded_map(const GradedMapCandidate& candidate) {
  const AlgebraPtr& a = candidate.algebra;
  const int n = a->dim();
  const int m = a->rank();
  if (static_cast<int>(candidate.first_layer.size()) != m)
    throw CarnotError("first-layer matrix must be " + std::to_string(m) + "x" + std::to_string(m));
  for (const auto& row : candidate.first_layer)
    if (static_cast<int>(row.size()) != m)
      throw CarnotError("first-layer matrix must be square");

  ExtensionResult result;
  if (!is_invertible(candidate.first_layer)) {
    result.status = ExtensionResult::Status::obstructed;
    result.obstruction = "not bijective on g_1";
    return result;
  }

  const auto& g1 = a->layer_indices(1);
  std::vector<RatElement> image(n, zero<Rat>(a));
  for (int c = 0; c < m; ++c) {
    RatElement img = zero<Rat>(a);
    for (int r = 0; r < m; ++r) img.coeffs[g1[r]] = candidate.first_layer[r][c];
    image[g1[c]] = std::move(img);
  }
  for (int layer = 2; layer <= a->step(); ++layer) {
    LayerPresentation pres = layer_presentation(a, layer);
    const auto& target = a->layer_indices(layer);
    for (std::size_t t = 0; t < target.size(); ++t) {
      RatElement img = zero<Rat>(a);
      for (std::size_t p = 0; p < pres.pairs.size(); ++p) {
        const Rat& lambda = pres.coefficients[t][p];
        if (lambda == 0) continue;
        RatElement br = bracket(image[pres.pairs[p].first], image[pres.pairs[p].second]);
        for (int i = 0; i < n; ++i) img.coeffs[i] += lambda * br.coeffs[i];
      }
      image[target[t]] = std::move(img);
    }
  }

  // well-definedness and homomorphy: every bracket relation must map
  // consistently, including the non-horizontal ones
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      RatElement lhs = zero<Rat>(a);
      for (const BracketTerm& term : a->terms(i, j))
        for (int q = 0; q < n; ++q) lhs.coeffs[q] += term.coeff * image[term.target].coeffs[q];
      RatElement rhs = bracket(image[i], image[j]);
      if (lhs.coeffs != rhs.coeffs) {
        result.status = ExtensionResult::Status::obstructed;
        result.witness_pair = {i, j};
        result.obstruction = "psi[" + a->label(i) + "," + a->label(j) + "] = " + to_string(lhs) +
                             " but [psi " + a->label(i) + ", psi " + a->label(j) + "] = " +
                             to_string(rhs);
        return result;
      }
    }
  }

  result.status = ExtensionResult::Status::automorphism;
  result.full_map.assign(n, RatVec(n, Rat(0)));
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) result.full_map[r][c] = image[c].coeffs[r];
  return result;
}

int graded_derivation_dimension(const AlgebraPtr& a) {
  const int n = a->dim();
  const int m = a->rank();
  const int unknowns = m * m;  // entries of the g_1 block, column-major
  const auto& g1 = a->layer_indices(1);

  // expr[t]: n x unknowns matrix of linear forms giving D(e_t)
  std::vector<RatMat> expr(n, RatMat(n, RatVec(unknowns, Rat(0))));
  for (int c = 0; c < m; ++c)
    for (int r = 0; r < m; ++r) expr[g1[c]][g1[r]][c * m + r] = 1;

  for (int layer = 2; layer <= a->step(); ++layer) {
    LayerPresentation pres = layer_presentation(a, layer);
    const auto& target = a->layer_indices(layer);
    for (std::size_t t = 0; t < target.size(); ++t) {
      RatMat acc(n, RatVec(unknowns, Rat(0)));
      for (std::size_t p = 0; p < pres.pairs.size(); ++p) {
        const Rat& lambda = pres.coefficients[t][p];
        if (lambda == 0) continue;
        const auto [xa, xb] = pres.pairs[p];
        // D[e_a, e_b] = [D e_a, e_b] + [e_a, D e_b], applied per unknown
        for (int u = 0; u < unknowns; ++u) {
          RatElement da = zero<Rat>(a), db = zero<Rat>(a);
          bool nza = false, nzb = false;
          for (int i = 0; i < n; ++i) {
            da.coeffs[i] = expr[xa][i][u];
            db.coeffs[i] = expr[xb][i][u];
            nza = nza || da.coeffs[i] != 0;
            nzb = nzb || db.coeffs[i] != 0;
          }
          if (nza) {
            RatElement term = bracket(da, basis_element<Rat>(a, xb));
            for (int i = 0; i < n; ++i) acc[i][u] += lambda * term.coeffs[i];
          }
          if (nzb) {
            RatElement term = bracket(basis_element<Rat>(a, xa), db);
            for (int i = 0; i < n; ++i) acc[i][u] += lambda * term.coeffs[i];
          }
        }
      }
      expr[target[t]] = std::move(acc);
    }
  }

  // Leibniz constraints over all basis pairs
  RowSpace constraints(unknowns);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      // rows of D([e_i, e_j]) - [D e_i, e_j] - [e_i, D e_j] = 0
      RatMat lhs(n, RatVec(unknowns, Rat(0)));
      for (const BracketTerm& term : a->terms(i, j))
        for (int q = 0; q < n; ++q)
          for (int u = 0; u < unknowns; ++u)
            if (expr[term.target][q][u] != 0) lhs[q][u] += term.coeff * expr[term.target][q][u];
      for (int u = 0; u < unknowns; ++u) {
        RatElement di = zero<Rat>(a), dj = zero<Rat>(a);
        for (int q = 0; q < n; ++q) {
          di.coeffs[q] = expr[i][q][u];
          dj.coeffs[q] = expr[j][q][u];
        }
        RatElement t1 = bracket(di, basis_element<Rat>(a, j));
        RatElement t2 = bracket(basis_element<Rat>(a, i), dj);
        for (int q = 0; q < n; ++q) lhs[q][u] -= t1.coeffs[q] + t2.coeffs[q];
      }
      for (int q = 0; q < n; ++q) constraints.insert(lhs[q]);
    }
  }
  return unknowns - constraints.rank();
}

bool is_graded_automorphism(const RatMat& full_map, const AlgebraPtr& a) {
  const int n = a->dim();
  if (static_cast<int>(full_map.size()) != n) return false;
  for (const auto& row : full_map)
    if (static_cast<int>(row.size()) != n) return false;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (full_map[r][c] != 0 && a->weight(r) != a->weight(c)) return false;
  if (!is_invertible(full_map)) return false;
  for (int i = 0; i < n; ++i) {
    RatElement img_i = make_element(a, apply_matrix(full_map, basis_element<Rat>(a, i).coeffs));
    for (int j = i + 1; j < n; ++j) {
      RatElement img_j = make_element(a, apply_matrix(full_map, basis_element<Rat>(a, j).coeffs));
      RatElement lhs =
          make_element(a, apply_matrix(full_map, bracket(basis_element<Rat>(a, i),
                                                         basis_element<Rat>(a, j))
                                                     .coeffs));
      if (lhs.coeffs != bracket(img_i, img_j).coeffs) return false;
    }
  }
  return true;
}

}  // namespace carnotkit
