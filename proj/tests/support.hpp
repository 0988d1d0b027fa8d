#pragma once

// Test-only helpers: brute-force oracles kept independent of the library
// code paths they check, plus instance generators.

#include <algorithm>
#include <complex>
#include <cstdint>
#include <vector>

namespace testsupport {

// Visits every K-combination of {0, ..., N-1} in lexicographic order.
template <typename Fn>
void for_each_combination(int N, int K, Fn&& fn) {
  std::vector<int> c(K);
  for (int i = 0; i < K; ++i) c[i] = i;
  if (K == 0) {
    fn(c);
    return;
  }
  for (;;) {
    fn(c);
    int i = K - 1;
    while (i >= 0 && c[i] == N - K + i) --i;
    if (i < 0) break;
    ++c[i];
    for (int j = i + 1; j < K; ++j) c[j] = c[j - 1] + 1;
  }
}

// Max gap of a sorted support, with end sentinels -1 and N. Written from the
// definition, independent of the gaps module.
inline int brute_max_gap(const std::vector<int>& sorted, int N) {
  int prev = -1;
  int best = 0;
  for (int v : sorted) {
    best = std::max(best, v - prev - 1);
    prev = v;
  }
  return std::max(best, N - prev - 1);
}

// Circular max gap: boundary gaps merge across the wrap point.
inline int brute_circular_max_gap(const std::vector<int>& sorted, int N) {
  const int k = static_cast<int>(sorted.size());
  int best = sorted.front() + (N - 1 - sorted.back());
  for (int i = 1; i < k; ++i) best = std::max(best, sorted[i] - sorted[i - 1] - 1);
  return best;
}

// Histogram of the (possibly circular) max gap over all C(N,K) supports.
inline std::vector<std::uint64_t> gap_histogram(int N, int K, bool circular) {
  std::vector<std::uint64_t> hist(N + 2, 0);
  for_each_combination(N, K, [&](const std::vector<int>& c) {
    const int g = circular ? brute_circular_max_gap(c, N) : brute_max_gap(c, N);
    ++hist[static_cast<std::size_t>(g)];
  });
  return hist;
}

}  // namespace testsupport
