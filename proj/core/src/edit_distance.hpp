#pragma once

// Generic unit-cost edit distance with two rolling rows sized by the
// shorter sequence. Shared by unit-level (UER) and character-level (CER)
// scoring. Internal to core.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

namespace psl::detail {

template <typename Seq>
std::size_t edit_distance(const Seq& a, const Seq& b) {
  const Seq& cols = (a.size() <= b.size()) ? a : b;
  const Seq& rows = (a.size() <= b.size()) ? b : a;
  const std::size_t n = cols.size();

  std::vector<std::size_t> prev(n + 1), cur(n + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= rows.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= n; ++j) {
      std::size_t sub = prev[j - 1] + (rows[i - 1] != cols[j - 1] ? 1 : 0);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

}  // namespace psl::detail
