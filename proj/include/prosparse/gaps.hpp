#pragma once

#include <span>
#include <vector>

namespace prosparse {

// Gap statistics of a K-subset of {0, ..., N-1}. With sentinels n_[0] = -1
// and n_[K+1] = N there are K+1 gaps d_k = n_[k+1] - n_[k] - 1, and the gaps
// always sum to N - K.
struct GapProfile {
  int N = 0;
  int K = 0;
  std::vector<int> sorted_support;
  std::vector<int> gaps;  // K+1 entries
  int max_gap = 0;        // largest gap on the line

  // Largest gap when position N-1 wraps to position 0: the two boundary gaps
  // merge into d_0 + d_K. Undefined for an empty support.
  int circular_max_gap() const;
};

// Computes the profile for an (unsorted, duplicate-free) support.
GapProfile gap_profile(std::span<const int> support, int N);

}  // namespace prosparse
