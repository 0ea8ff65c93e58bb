#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "carnotkit/catalog.hpp"
#include "carnotkit/linalg.hpp"

namespace carnotkit {

namespace {

// Hall elements are realized inside the truncated free associative
// algebra (bracket = ab - ba), where independence and all identities are
// automatic; structure constants then come from exact per-degree solves.
// Words are strings over letters 0..m-1.
using Word = std::string;
using Poly = std::map<Word, long long>;

Poly poly_bracket(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [wa, ca] : a) {
    for (const auto& [wb, cb] : b) {
      out[wa + wb] += ca * cb;
      out[wb + wa] -= ca * cb;
    }
  }
  for (auto it = out.begin(); it != out.end();) {
    if (it->second == 0)
      it = out.erase(it);
    else
      ++it;
  }
  return out;
}

struct HallElement {
  int left = -1;   // children for composite elements
  int right = -1;
  int degree = 1;
  Word foliage;    // leaf letters; distinct per element, used for labels
  Poly expansion;
};

/// Classical Hall family: generators first; [u, v] is basic iff u > v in
/// creation order and, when u = [u1, u2], u2 <= v. Throws once the
/// element count passes dim_cap.
std::vector<HallElement> build_hall_elements(int m, int s, int dim_cap) {
  std::vector<HallElement> elems;
  for (int i = 0; i < m; ++i) {
    HallElement g;
    g.degree = 1;
    g.foliage = Word(1, static_cast<char>(i));
    g.expansion[g.foliage] = 1;
    elems.push_back(std::move(g));
  }
  if (static_cast<int>(elems.size()) > dim_cap)
    throw CarnotError("free nilpotent rank alone exceeds the dimension cap of " +
                      std::to_string(dim_cap));
  for (int d = 2; d <= s; ++d) {
    const int count = static_cast<int>(elems.size());
    for (int u = 0; u < count; ++u) {
      for (int v = 0; v < u; ++v) {
        if (elems[u].degree + elems[v].degree != d) continue;
        if (elems[u].right >= 0 && elems[u].right > v) continue;
        HallElement h;
        h.left = u;
        h.right = v;
        h.degree = d;
        h.foliage = elems[u].foliage + elems[v].foliage;
        h.expansion = poly_bracket(elems[u].expansion, elems[v].expansion);
        elems.push_back(std::move(h));
        if (static_cast<int>(elems.size()) > dim_cap)
          throw CarnotError("free:" + std::to_string(m) + "," + std::to_string(s) +
                            " exceeds the dimension cap of " + std::to_string(dim_cap));
      }
    }
  }
  return elems;
}

std::string hall_label(const Word& foliage, int m) {
  std::string label = "X";
  for (std::size_t i = 0; i < foliage.size(); ++i) {
    if (m > 9 && i > 0) label += '_';
    label += std::to_string(static_cast<int>(foliage[i]) + 1);
  }
  return label;
}

/// Exact coordinates of a degree-d Lie polynomial in the Hall elements of
/// that degree, via the word-coefficient matrix.
class DegreeSolver {
 public:
  DegreeSolver(const std::vector<HallElement>& elems, const std::vector<int>& members) {
    for (int e : members) {
      for (const auto& [w, c] : elems[e].expansion) {
        (void)c;
        if (!word_index_.count(w)) word_index_.emplace(w, static_cast<int>(word_index_.size()));
      }
    }
    matrix_.assign(word_index_.size(), RatVec(members.size(), Rat(0)));
    for (std::size_t j = 0; j < members.size(); ++j) {
      for (const auto& [w, c] : elems[members[j]].expansion)
        matrix_[word_index_.at(w)][j] = Rat(c);
    }
  }

  std::optional<RatVec> coordinates(const Poly& target) const {
    RatVec rhs(matrix_.size(), Rat(0));
    for (const auto& [w, c] : target) {
      auto it = word_index_.find(w);
      if (it == word_index_.end()) return std::nullopt;  // outside the Lie span
      rhs[it->second] = Rat(c);
    }
    auto x = solve_linear(matrix_, rhs);
    if (!x) return std::nullopt;
    // solve_linear ignores redundant rows; confirm the full system
    for (std::size_t r = 0; r < matrix_.size(); ++r) {
      Rat acc(0);
      for (std::size_t j = 0; j < x->size(); ++j)
        if (matrix_[r][j] != 0 && (*x)[j] != 0) acc += matrix_[r][j] * (*x)[j];
      if (acc != rhs[r]) return std::nullopt;
    }
    return x;
  }

 private:
  std::map<Word, int> word_index_;
  RatMat matrix_;
};

}  // namespace

AlgebraPtr make_free_nilpotent(int m, int s, int dim_cap) {
  if (m < 2 || s < 1) throw CarnotError("free nilpotent algebra needs rank >= 2 and step >= 1");

  std::vector<HallElement> elems = build_hall_elements(m, s, dim_cap);
  const int n = static_cast<int>(elems.size());

  AlgebraDef def;
  def.name = "free:" + std::to_string(m) + "," + std::to_string(s);
  def.step = s;
  for (const auto& e : elems) {
    def.labels.push_back(hall_label(e.foliage, m));
    def.weights.push_back(e.degree);
  }

  std::vector<std::vector<int>> by_degree(s + 1);
  for (int i = 0; i < n; ++i) by_degree[elems[i].degree].push_back(i);
  std::vector<std::optional<DegreeSolver>> solvers(s + 1);
  for (int d = 1; d <= s; ++d)
    if (!by_degree[d].empty()) solvers[d].emplace(elems, by_degree[d]);

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const int d = elems[i].degree + elems[j].degree;
      if (d > s) continue;
      Poly br = poly_bracket(elems[i].expansion, elems[j].expansion);
      if (br.empty()) continue;
      auto coords = solvers[d]->coordinates(br);
      if (!coords)
        throw CarnotError("internal: Hall decomposition failed at degree " + std::to_string(d));
      std::vector<std::pair<int, Rat>> terms;
      for (std::size_t k = 0; k < coords->size(); ++k)
        if ((*coords)[k] != 0) terms.emplace_back(by_degree[d][k], (*coords)[k]);
      if (!terms.empty()) def.brackets[{i, j}] = std::move(terms);
    }
  }

  return GradedAlgebra::create(std::move(def));
}

}  // namespace carnotkit
