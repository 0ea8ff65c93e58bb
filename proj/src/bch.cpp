#include "carnotkit/bch.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace carnotkit {

namespace {

/// Enumerates the Dynkin commutator series
///   log(e^x e^y) = sum_{n>=1} (-1)^{n-1}/n sum_{(p_i,q_i)}
///       [x^{p_1} y^{q_1} ... x^{p_n} y^{q_n}] / (W prod p_i! q_i!)
/// with W the total letter count, keeping words of weight <= step.
/// Right-nested evaluation kills any word ending in a doubled letter,
/// so those are dropped here together with zero accumulated coefficients.
BchTable build_table(int step) {
  std::vector<Rat> factorial(step + 1, Rat(1));
  for (int i = 1; i <= step; ++i) factorial[i] = factorial[i - 1] * i;

  std::map<std::vector<std::uint8_t>, Rat> acc;
  std::vector<std::uint8_t> word;

  // depth-first over block sequences ((p_1,q_1),...,(p_n,q_n))
  auto recurse = [&](auto&& self, int blocks, const Rat& block_factor) -> void {
    if (!word.empty()) {
      Rat sign = (blocks % 2 == 1) ? Rat(1) : Rat(-1);
      acc[word] += sign / (Rat(blocks) * Rat(static_cast<int>(word.size())) * block_factor);
    }
    const int remaining = step - static_cast<int>(word.size());
    for (int p = 0; p <= remaining; ++p) {
      for (int q = p == 0 ? 1 : 0; p + q <= remaining; ++q) {
        for (int i = 0; i < p; ++i) word.push_back(0);
        for (int i = 0; i < q; ++i) word.push_back(1);
        self(self, blocks + 1, block_factor * factorial[p] * factorial[q]);
        word.resize(word.size() - p - q);
      }
    }
  };
  recurse(recurse, 0, Rat(1));

  BchTable table;
  table.step = step;
  for (auto& [letters, coeff] : acc) {
    if (coeff == 0) continue;
    const std::size_t len = letters.size();
    if (len >= 2 && letters[len - 1] == letters[len - 2]) continue;
    table.words.push_back({letters, coeff, to_double(coeff)});
  }
  // order by reversed word so the evaluation stack can reuse suffixes
  std::sort(table.words.begin(), table.words.end(), [](const BchWord& a, const BchWord& b) {
    auto ra = a.letters.rbegin();
    auto rb = b.letters.rbegin();
    while (ra != a.letters.rend() && rb != b.letters.rend()) {
      if (*ra != *rb) return *ra < *rb;
      ++ra;
      ++rb;
    }
    return a.letters.size() < b.letters.size();
  });
  return table;
}

}  // namespace

const BchTable& bch_table(int step) {
  if (step < 1) throw CarnotError("bch_table: step must be >= 1");
  static std::mutex mutex;
  static std::map<int, BchTable> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(step);
  if (it == cache.end()) it = cache.emplace(step, build_table(step)).first;
  return it->second;
}

}  // namespace carnotkit
