#include "carnotkit/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "carnotkit/linalg.hpp"

namespace carnotkit {

namespace {

std::string pair_str(const AlgebraDef& def, int i, int j) {
  return "[" + def.labels[i] + "," + def.labels[j] + "]";
}

/// Term list of [e_i, e_j] resolved from a raw definition: prefers the
/// stored (i, j) entry, falls back to the negated (j, i) one.
std::vector<std::pair<int, Rat>> raw_terms(const AlgebraDef& def, int i, int j) {
  if (i == j) return {};
  auto it = def.brackets.find({i, j});
  if (it != def.brackets.end()) return it->second;
  it = def.brackets.find({j, i});
  if (it == def.brackets.end()) return {};
  std::vector<std::pair<int, Rat>> neg = it->second;
  for (auto& t : neg) t.second = -t.second;
  return neg;
}

RatVec raw_bracket(const AlgebraDef& def, const RatVec& a, const RatVec& b) {
  const int n = static_cast<int>(def.labels.size());
  RatVec r(n, Rat(0));
  for (int i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < n; ++j) {
      if (b[j] == 0 || i == j) continue;
      for (const auto& [k, c] : raw_terms(def, i, j)) r[k] += a[i] * b[j] * c;
    }
  }
  return r;
}

}  // namespace

const char* finding_kind_name(FindingKind kind) {
  switch (kind) {
    case FindingKind::structural: return "structural";
    case FindingKind::antisymmetry: return "antisymmetry";
    case FindingKind::jacobi: return "jacobi";
    case FindingKind::grading: return "grading";
    case FindingKind::stratification: return "stratification";
  }
  return "unknown";
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  if (ok()) {
    os << "valid";
    return os.str();
  }
  for (const auto& f : structural) os << "structural: " << f.detail << "\n";
  for (const auto& f : violations) os << finding_kind_name(f.kind) << ": " << f.detail << "\n";
  return os.str();
}

ValidationReport validate_algebra(const AlgebraDef& def) {
  ValidationReport report;
  const int n = static_cast<int>(def.labels.size());

  auto structural = [&](std::string detail, std::vector<int> idx = {}) {
    report.structural.push_back({FindingKind::structural, std::move(idx), std::move(detail)});
  };

  if (n == 0) structural("empty basis");
  if (def.step < 1) structural("step must be >= 1");
  if (static_cast<int>(def.weights.size()) != n)
    structural("weight list length does not match basis size");

  std::set<std::string> seen;
  for (int i = 0; i < n; ++i) {
    if (!seen.insert(def.labels[i]).second)
      structural("duplicate basis label '" + def.labels[i] + "'", {i});
  }
  if (static_cast<int>(def.weights.size()) == n && def.step >= 1) {
    for (int i = 0; i < n; ++i) {
      if (def.weights[i] < 1 || def.weights[i] > def.step)
        structural("weight of '" + def.labels[i] + "' outside 1.." + std::to_string(def.step), {i});
    }
  }
  for (const auto& [key, terms] : def.brackets) {
    auto [i, j] = key;
    if (i < 0 || i >= n || j < 0 || j >= n) {
      structural("bracket pair index out of range (" + std::to_string(i) + "," +
                 std::to_string(j) + ")");
      continue;
    }
    for (const auto& [k, c] : terms) {
      (void)c;
      if (k < 0 || k >= n)
        structural("bracket " + pair_str(def, i, j) + " targets index out of range " +
                       std::to_string(k),
                   {i, j});
    }
  }
  if (!report.structural.empty()) return report;

  auto violation = [&](FindingKind kind, std::vector<int> idx, std::string detail) {
    report.violations.push_back({kind, std::move(idx), std::move(detail)});
  };

  // antisymmetry: diagonal entries and doubly-specified pairs
  for (const auto& [key, terms] : def.brackets) {
    auto [i, j] = key;
    if (i == j) {
      for (const auto& [k, c] : terms) {
        (void)k;
        if (c != 0) {
          violation(FindingKind::antisymmetry, {i, i},
                    pair_str(def, i, i) + " must vanish");
          break;
        }
      }
    }
  }
  for (const auto& [key, terms] : def.brackets) {
    auto [i, j] = key;
    if (i >= j) continue;
    auto mirror = def.brackets.find({j, i});
    if (mirror == def.brackets.end()) continue;
    RatVec sum(n, Rat(0));
    for (const auto& [k, c] : terms) sum[k] += c;
    for (const auto& [k, c] : mirror->second) sum[k] += c;
    if (std::any_of(sum.begin(), sum.end(), [](const Rat& x) { return x != 0; }))
      violation(FindingKind::antisymmetry, {i, j},
                pair_str(def, i, j) + " != -" + pair_str(def, j, i));
  }

  // grading: every target must live in the layer of the combined weight
  for (const auto& [key, terms] : def.brackets) {
    auto [i, j] = key;
    if (i == j) continue;
    const int w = def.weights[i] + def.weights[j];
    for (const auto& [k, c] : terms) {
      if (c == 0) continue;
      if (def.weights[k] != w) {
        violation(FindingKind::grading, {i, j},
                  pair_str(def, i, j) + " hits '" + def.labels[k] + "' of weight " +
                      std::to_string(def.weights[k]) + ", expected " + std::to_string(w));
        break;
      }
    }
  }

  // Jacobi over basis triples
  for (int i = 0; i < n; ++i) {
    RatVec ei(n, Rat(0));
    ei[i] = 1;
    for (int j = i + 1; j < n; ++j) {
      RatVec ej(n, Rat(0));
      ej[j] = 1;
      for (int k = j + 1; k < n; ++k) {
        RatVec ek(n, Rat(0));
        ek[k] = 1;
        RatVec sum = raw_bracket(def, ei, raw_bracket(def, ej, ek));
        RatVec t2 = raw_bracket(def, ej, raw_bracket(def, ek, ei));
        RatVec t3 = raw_bracket(def, ek, raw_bracket(def, ei, ej));
        bool bad = false;
        for (int q = 0; q < n; ++q) {
          sum[q] += t2[q] + t3[q];
          if (sum[q] != 0) bad = true;
        }
        if (bad)
          violation(FindingKind::jacobi, {i, j, k},
                    "jacobi identity fails on (" + def.labels[i] + "," + def.labels[j] + "," +
                        def.labels[k] + ")");
      }
    }
  }

  // stratification: [g_1, g_i] = g_{i+1} for i = 1..s-1, and g_s != 0
  std::vector<std::vector<int>> layers(def.step);
  for (int i = 0; i < n; ++i) layers[def.weights[i] - 1].push_back(i);
  if (layers[def.step - 1].empty())
    violation(FindingKind::stratification, {}, "top layer " + std::to_string(def.step) + " is empty");
  for (int layer = 1; layer < def.step; ++layer) {
    RowSpace span(n);
    for (int a : layers[0]) {
      RatVec ea(n, Rat(0));
      ea[a] = 1;
      for (int b : layers[layer - 1]) {
        RatVec eb(n, Rat(0));
        eb[b] = 1;
        span.insert(raw_bracket(def, ea, eb));
      }
    }
    if (span.rank() != static_cast<int>(layers[layer].size()))
      violation(FindingKind::stratification, {},
                "[g_1, g_" + std::to_string(layer) + "] spans " + std::to_string(span.rank()) +
                    " of " + std::to_string(layers[layer].size()) + " dims of layer " +
                    std::to_string(layer + 1));
  }

  return report;
}

AlgebraPtr GradedAlgebra::create(AlgebraDef def) {
  ValidationReport report = validate_algebra(def);
  if (!report.ok())
    throw CarnotError("invalid algebra '" + def.name + "':\n" + report.summary());

  auto alg = std::shared_ptr<GradedAlgebra>(new GradedAlgebra());
  const int n = static_cast<int>(def.labels.size());

  // normalize bracket storage to keys (i, j) with i < j
  std::map<std::pair<int, int>, std::vector<std::pair<int, Rat>>> norm;
  for (const auto& [key, terms] : def.brackets) {
    auto [i, j] = key;
    if (i == j) continue;
    const bool flip = i > j;
    auto canon = flip ? std::make_pair(j, i) : key;
    auto& dst = norm[canon];
    if (!dst.empty()) continue;  // mirror already resolved (validated consistent)
    for (const auto& [k, c] : terms) {
      if (c == 0) continue;
      dst.emplace_back(k, flip ? Rat(-c) : c);
    }
  }
  for (auto it = norm.begin(); it != norm.end();) {
    if (it->second.empty())
      it = norm.erase(it);
    else
      ++it;
  }
  def.brackets = std::move(norm);

  alg->def_ = std::move(def);
  alg->layers_.assign(alg->def_.step, {});
  for (int i = 0; i < n; ++i) alg->layers_[alg->def_.weights[i] - 1].push_back(i);
  alg->layer_dims_.resize(alg->def_.step);
  alg->homogeneous_dim_ = 0;
  for (int k = 0; k < alg->def_.step; ++k) {
    alg->layer_dims_[k] = static_cast<int>(alg->layers_[k].size());
    alg->homogeneous_dim_ += (k + 1) * alg->layer_dims_[k];
  }

  alg->upper_.assign(n, {});
  alg->lower_.assign(n, {});
  for (int i = 0; i < n; ++i) {
    alg->upper_[i].resize(n > i + 1 ? n - i - 1 : 0);
    alg->lower_[i].resize(i);
  }
  for (const auto& [key, terms] : alg->def_.brackets) {
    auto [i, j] = key;
    TermList list, mirror;
    for (const auto& [k, c] : terms) {
      list.push_back({k, c, to_double(c)});
      mirror.push_back({k, -c, to_double(Rat(-c))});
    }
    alg->upper_[i][j - i - 1] = std::move(list);
    alg->lower_[j][i] = std::move(mirror);
  }
  return alg;
}

const TermList& GradedAlgebra::terms(int i, int j) const {
  if (i == j) return empty_;
  if (i < j) return upper_[i][j - i - 1];
  return lower_[i][j];
}

std::optional<int> GradedAlgebra::index_of(const std::string& label) const {
  for (int i = 0; i < dim(); ++i)
    if (def_.labels[i] == label) return i;
  return std::nullopt;
}

double quasi_norm(const DblElement& p) {
  double best = 0.0;
  for (int i = 0; i < p.algebra->dim(); ++i) {
    const double c = std::abs(p.coeffs[i]);
    if (c == 0.0) continue;
    best = std::max(best, std::pow(c, 1.0 / p.algebra->weight(i)));
  }
  return best;
}

double quasi_norm(const RatElement& p) { return quasi_norm(to_double(p)); }

namespace {
template <class T>
std::string element_str(const Element<T>& p) {
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i < p.algebra->dim(); ++i) {
    if (p.coeffs[i] == T(0)) continue;
    if (!first) os << " + ";
    first = false;
    os << p.coeffs[i] << "*" << p.algebra->label(i);
  }
  if (first) os << "0";
  return os.str();
}
}  // namespace

std::string to_string(const RatElement& p) { return element_str(p); }
std::string to_string(const DblElement& p) { return element_str(p); }

}  // namespace carnotkit
