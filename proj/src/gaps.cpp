#include "prosparse/gaps.hpp"

#include <algorithm>

#include "prosparse/errors.hpp"

namespace prosparse {

int GapProfile::circular_max_gap() const {
  if (K == 0)
    throw UndefinedCircularError("circular max gap undefined for empty support");
  int m = gaps.front() + gaps.back();
  for (int k = 1; k + 1 < static_cast<int>(gaps.size()); ++k)
    m = std::max(m, gaps[k]);
  return m;
}

GapProfile gap_profile(std::span<const int> support, int N) {
  if (N < 1) throw InvalidInputError("gap_profile: N must be positive");
  GapProfile p;
  p.N = N;
  p.K = static_cast<int>(support.size());
  p.sorted_support.assign(support.begin(), support.end());
  std::sort(p.sorted_support.begin(), p.sorted_support.end());
  for (int i = 0; i < p.K; ++i) {
    const int n = p.sorted_support[i];
    if (n < 0 || n >= N)
      throw InvalidSupportError("gap_profile: support index out of [0, N)");
    if (i > 0 && n == p.sorted_support[i - 1])
      throw InvalidSupportError("gap_profile: duplicate support index");
  }

  p.gaps.resize(p.K + 1);
  int prev = -1;
  for (int k = 0; k < p.K; ++k) {
    p.gaps[k] = p.sorted_support[k] - prev - 1;
    prev = p.sorted_support[k];
  }
  p.gaps[p.K] = N - prev - 1;
  p.max_gap = *std::max_element(p.gaps.begin(), p.gaps.end());
  return p;
}

}  // namespace prosparse
