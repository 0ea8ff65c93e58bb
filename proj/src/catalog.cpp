#include "carnotkit/catalog.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace carnotkit {

AlgebraPtr make_filiform(FiliformKind kind, int s) {
  if (kind == FiliformKind::first) {
    if (s < 2) throw CarnotError("filiform of the first kind needs step >= 2");
  } else {
    // only odd steps 2n+1 with n >= 2 admit the second kind
    if (s < 5 || s % 2 == 0)
      throw CarnotError("filiform of the second kind needs step s = 2n+1 with n >= 2");
  }
  AlgebraDef def;
  def.name = (kind == FiliformKind::first ? "filiform1:" : "filiform2:") + std::to_string(s);
  def.step = s;
  for (int i = 0; i <= s; ++i) {
    def.labels.push_back("X" + std::to_string(i));
    def.weights.push_back(i <= 1 ? 1 : i);
  }
  const int chain_end = kind == FiliformKind::first ? s - 1 : s - 2;
  for (int i = 1; i <= chain_end; ++i) def.brackets[{0, i}] = {{i + 1, Rat(1)}};
  if (kind == FiliformKind::second) {
    for (int i = 1; i < s - i; ++i) {
      Rat sign = (i % 2 == 0) ? Rat(1) : Rat(-1);
      def.brackets[{i, s - i}] = {{s, sign}};
    }
  }
  return GradedAlgebra::create(std::move(def));
}

AlgebraPtr make_abelian(int m) {
  if (m < 1) throw CarnotError("abelian rank must be >= 1");
  AlgebraDef def;
  def.name = "abelian:" + std::to_string(m);
  def.step = 1;
  for (int i = 1; i <= m; ++i) {
    def.labels.push_back("e" + std::to_string(i));
    def.weights.push_back(1);
  }
  return GradedAlgebra::create(std::move(def));
}

AlgebraPtr make_heisenberg() {
  AlgebraDef def;
  def.name = "heis";
  def.step = 2;
  def.labels = {"X1", "X2", "Z"};
  def.weights = {1, 1, 2};
  def.brackets[{0, 1}] = {{2, Rat(1)}};
  return GradedAlgebra::create(std::move(def));
}

AlgebraPtr direct_product(const AlgebraPtr& a, const AlgebraPtr& b) {
  AlgebraDef def;
  def.name = a->name() + "x" + b->name();
  def.step = std::max(a->step(), b->step());
  // basis ordered by layer (A's layer-k block, then B's), so layer k of
  // the product reads as g_k(A) + g_k(B) and serialization round-trips
  std::vector<int> map_a(a->dim()), map_b(b->dim());
  for (int k = 1; k <= def.step; ++k) {
    if (k <= a->step()) {
      for (int i : a->layer_indices(k)) {
        map_a[i] = static_cast<int>(def.labels.size());
        def.labels.push_back(a->label(i) + "_1");
        def.weights.push_back(k);
      }
    }
    if (k <= b->step()) {
      for (int i : b->layer_indices(k)) {
        map_b[i] = static_cast<int>(def.labels.size());
        def.labels.push_back(b->label(i) + "_2");
        def.weights.push_back(k);
      }
    }
  }
  auto copy_brackets = [&def](const GradedAlgebra& src, const std::vector<int>& map) {
    for (const auto& [key, terms] : src.def().brackets) {
      int mi = map[key.first], mj = map[key.second];
      const bool flip = mi > mj;
      if (flip) std::swap(mi, mj);
      std::vector<std::pair<int, Rat>> shifted;
      for (const auto& [k, c] : terms) shifted.emplace_back(map[k], flip ? Rat(-c) : c);
      def.brackets[{mi, mj}] = std::move(shifted);
    }
  };
  copy_brackets(*a, map_a);
  copy_brackets(*b, map_b);
  return GradedAlgebra::create(std::move(def));
}

QuotientOutcome quotient(const AlgebraPtr& a, const std::vector<RatElement>& ideal_span) {
  QuotientOutcome out;
  const int n = a->dim();
  const int s = a->step();

  RowSpace span(n);
  for (const auto& v : ideal_span) {
    detail::require_same(v.algebra, a);
    span.insert(v.coeffs);
  }

  // gradedness: the span must be closed under layer projection
  for (const auto& v : ideal_span) {
    for (int k = 1; k <= s; ++k) {
      RatVec proj(n, Rat(0));
      for (int i : a->layer_indices(k)) proj[i] = v.coeffs[i];
      if (!span.contains(proj)) {
        out.reject_reason = "span is not graded: the layer-" + std::to_string(k) +
                            " projection of " + to_string(v) + " escapes the span";
        out.witness = make_element(a, std::move(proj));
        return out;
      }
    }
  }

  // ideal: [e_i, v] must stay inside for every basis vector and spanning v
  for (int i = 0; i < n; ++i) {
    RatElement ei = basis_element<Rat>(a, i);
    for (const auto& v : ideal_span) {
      RatElement br = bracket(ei, v);
      if (!span.contains(br.coeffs)) {
        out.reject_reason =
            "span is not an ideal: [" + a->label(i) + ", " + to_string(v) + "] escapes it";
        out.witness = br;
        return out;
      }
    }
  }

  if (span.rank() == n) {
    out.reject_reason = "ideal is the whole algebra; quotient would be trivial";
    return out;
  }

  // per-layer reduction (the span is graded, so it splits across layers);
  // pivot coordinates are killed, the rest survive with their labels
  std::vector<bool> killed(n, false);
  std::vector<int> survivors;
  RatMat ideal_rref;  // per-layer reduced rows, in global coordinates
  for (int k = 1; k <= s; ++k) {
    const auto& idx = a->layer_indices(k);
    RowSpace layer_space(static_cast<int>(idx.size()));
    for (const auto& v : ideal_span) {
      RatVec restricted;
      restricted.reserve(idx.size());
      for (int i : idx) restricted.push_back(v.coeffs[i]);
      layer_space.insert(std::move(restricted));
    }
    for (int r = 0; r < layer_space.rank(); ++r) {
      RatVec global(n, Rat(0));
      for (std::size_t c = 0; c < idx.size(); ++c) global[idx[c]] = layer_space.rows()[r][c];
      ideal_rref.push_back(std::move(global));
      killed[idx[layer_space.pivots()[r]]] = true;
    }
  }
  for (int i = 0; i < n; ++i)
    if (!killed[i]) survivors.push_back(i);

  // projection: reduce e_i modulo the per-layer rref rows, then read off
  // the surviving coordinates
  const int nq = static_cast<int>(survivors.size());
  RowSpace reducer(n);
  for (const auto& row : ideal_rref) reducer.insert(row);
  RatMat projection(nq, RatVec(n, Rat(0)));
  for (int i = 0; i < n; ++i) {
    RatVec ei(n, Rat(0));
    ei[i] = 1;
    RatVec residue = reducer.reduce(std::move(ei));
    for (int r = 0; r < nq; ++r) projection[r][i] = residue[survivors[r]];
  }

  // quotient step: drop trailing layers that were killed entirely
  int new_step = 0;
  for (int i : survivors) new_step = std::max(new_step, a->weight(i));

  AlgebraDef def;
  def.name = a->name() + "_mod";
  def.step = new_step;
  for (int i : survivors) {
    def.labels.push_back(a->label(i));
    def.weights.push_back(a->weight(i));
  }
  auto project_vec = [&](const RatVec& full) {
    RatVec v(nq, Rat(0));
    for (int r = 0; r < nq; ++r) {
      for (int i = 0; i < n; ++i)
        if (projection[r][i] != 0 && full[i] != 0) v[r] += projection[r][i] * full[i];
    }
    return v;
  };
  for (int r = 0; r < nq; ++r) {
    for (int c = r + 1; c < nq; ++c) {
      RatElement br = bracket(basis_element<Rat>(a, survivors[r]),
                              basis_element<Rat>(a, survivors[c]));
      RatVec img = project_vec(br.coeffs);
      std::vector<std::pair<int, Rat>> terms;
      for (int k = 0; k < nq; ++k)
        if (img[k] != 0) terms.emplace_back(k, img[k]);
      if (!terms.empty()) def.brackets[{r, c}] = std::move(terms);
    }
  }

  out.accepted = true;
  out.algebra = GradedAlgebra::create(std::move(def));
  out.projection = std::move(projection);
  return out;
}

RatElement push_forward(const QuotientOutcome& q, const RatElement& p) {
  if (!q.accepted) throw CarnotError("push_forward on a rejected quotient");
  const int nq = q.algebra->dim();
  RatVec v(nq, Rat(0));
  for (int r = 0; r < nq; ++r)
    for (std::size_t i = 0; i < p.coeffs.size(); ++i)
      if (q.projection[r][i] != 0 && p.coeffs[i] != 0) v[r] += q.projection[r][i] * p.coeffs[i];
  return make_element(q.algebra, std::move(v));
}

AlgebraPtr make_algebra(const AlgebraSpecTag& tag) {
  using Family = AlgebraSpecTag::Family;
  switch (tag.family) {
    case Family::abelian:
      return make_abelian(tag.m);
    case Family::heisenberg:
      return make_heisenberg();
    case Family::filiform_first:
      return make_filiform(FiliformKind::first, tag.s);
    case Family::filiform_second:
      return make_filiform(FiliformKind::second, tag.s);
    case Family::free_nilpotent:
      return make_free_nilpotent(tag.m, tag.s);
    case Family::product: {
      if (tag.factors.size() != 2) throw CarnotError("product tag needs two factors");
      return direct_product(make_algebra(tag.factors[0]), make_algebra(tag.factors[1]));
    }
    case Family::quotient: {
      if (tag.factors.size() != 1) throw CarnotError("quotient tag needs one base algebra");
      AlgebraPtr base = make_algebra(tag.factors[0]);
      std::vector<RatElement> span;
      for (const auto& v : tag.ideal) span.push_back(make_element(base, v));
      QuotientOutcome q = quotient(base, span);
      if (!q.accepted) throw CarnotError("quotient tag rejected: " + q.reject_reason);
      return q.algebra;
    }
  }
  throw CarnotError("unknown algebra tag");
}

namespace {

std::optional<int> parse_int(std::string_view text) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

}  // namespace

std::optional<AlgebraSpecTag> parse_spec_tag(std::string_view text) {
  using Family = AlgebraSpecTag::Family;
  AlgebraSpecTag tag;
  if (text == "heis") {
    tag.family = Family::heisenberg;
    return tag;
  }
  if (text == "engel") {
    tag.family = Family::filiform_first;
    tag.s = 3;
    return tag;
  }
  if (text == "cartan") {
    tag.family = Family::free_nilpotent;
    tag.m = 2;
    tag.s = 3;
    return tag;
  }
  auto colon = text.find(':');
  if (colon == std::string_view::npos) return std::nullopt;
  std::string_view head = text.substr(0, colon);
  std::string_view args = text.substr(colon + 1);
  if (head == "abelian") {
    auto m = parse_int(args);
    if (!m) return std::nullopt;
    tag.family = Family::abelian;
    tag.m = *m;
    return tag;
  }
  if (head == "filiform1" || head == "filiform2") {
    auto s = parse_int(args);
    if (!s) return std::nullopt;
    tag.family = head == "filiform1" ? Family::filiform_first : Family::filiform_second;
    tag.s = *s;
    return tag;
  }
  if (head == "free") {
    auto comma = args.find(',');
    if (comma == std::string_view::npos) return std::nullopt;
    auto m = parse_int(args.substr(0, comma));
    auto s = parse_int(args.substr(comma + 1));
    if (!m || !s) return std::nullopt;
    tag.family = Family::free_nilpotent;
    tag.m = *m;
    tag.s = *s;
    return tag;
  }
  return std::nullopt;
}

AlgebraPtr builtin_algebra(std::string_view name) {
  auto tag = parse_spec_tag(name);
  if (!tag) {
    std::ostringstream os;
    os << "unknown builtin '" << name << "'; known: ";
    bool first = true;
    for (const auto& b : builtin_names()) {
      if (!first) os << ", ";
      os << b;
      first = false;
    }
    throw CarnotError(os.str());
  }
  return make_algebra(*tag);
}

std::vector<std::string> builtin_names() {
  return {"abelian:m", "heis", "engel", "filiform1:s", "filiform2:s", "free:m,s", "cartan"};
}

}  // namespace carnotkit
