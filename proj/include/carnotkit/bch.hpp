#ifndef CARNOTKIT_BCH_HPP
#define CARNOTKIT_BCH_HPP

#include <cstdint>
#include <vector>

#include "carnotkit/algebra.hpp"

namespace carnotkit {

/// One commutator word of the truncated BCH series: `letters` over
/// {0 = first argument, 1 = second}, evaluated as the right-nested
/// bracket [w_0, [w_1, [... w_{L-1}]]].
struct BchWord {
  std::vector<std::uint8_t> letters;
  Rat coeff;
  double coeff_d;
};

/// Dynkin expansion of log(exp(x) exp(y)) with all words of weight
/// > step dropped; exact on any nilpotent algebra of that step.
/// Words are ordered so consecutive entries share long suffixes.
struct BchTable {
  int step = 0;
  std::vector<BchWord> words;
};

/// Cached per step; thread-safe.
const BchTable& bch_table(int step);

/// Group law in exponential coordinates of the first kind. Exact for
/// rational coefficients; associative, with 0 as identity.
template <class T>
Element<T> bch_product(const Element<T>& p, const Element<T>& q) {
  detail::require_same(p.algebra, q.algebra);
  const BchTable& table = bch_table(p.algebra->step());
  Element<T> result = zero<T>(p.algebra);
  // stack[k] = right-nested bracket of the last (k+1) letters of the
  // current word; shared suffixes between consecutive words are reused.
  std::vector<Element<T>> stack;
  std::vector<std::uint8_t> prev;
  for (const BchWord& w : table.words) {
    const std::size_t len = w.letters.size();
    std::size_t shared = 0;
    while (shared < len && shared < prev.size() &&
           w.letters[len - 1 - shared] == prev[prev.size() - 1 - shared])
      ++shared;
    stack.resize(shared);
    while (stack.size() < len) {
      const std::uint8_t letter = w.letters[len - 1 - stack.size()];
      const Element<T>& arg = letter == 0 ? p : q;
      if (stack.empty())
        stack.push_back(arg);
      else
        stack.push_back(bracket(arg, stack.back()));
    }
    const T c(detail::pick_scalar(w.coeff, w.coeff_d, static_cast<const T*>(nullptr)));
    for (std::size_t i = 0; i < result.coeffs.size(); ++i)
      result.coeffs[i] += c * stack.back().coeffs[i];
    prev = w.letters;
  }
  return result;
}

/// In exponential coordinates the group inverse is plain negation.
template <class T>
Element<T> group_inverse(const Element<T>& p) {
  return scale(T(-1), p);
}

}  // namespace carnotkit

#endif
