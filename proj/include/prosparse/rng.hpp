#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace prosparse {

using Rng = std::mt19937_64;

// splitmix64 step; used to derive independent per-worker streams from a
// master seed so results do not depend on scheduling.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  return splitmix64(splitmix64(seed ^ (a * 0x9e3779b97f4a7c15ULL)) + b);
}

// Unbiased integer in [0, n) by rejection. std::uniform_int_distribution is
// implementation-defined, which would make fixtures non-portable.
inline std::uint64_t bounded(Rng& rng, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % n;
  }
}

inline double uniform01(Rng& rng) {
  // 53 random bits -> [0, 1)
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Box-Muller. Keeps amplitude draws identical across standard libraries.
inline double standard_normal(Rng& rng) {
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

inline std::complex<double> complex_normal(Rng& rng) {
  const double re = standard_normal(rng);
  const double im = standard_normal(rng);
  return {re, im};
}

// Uniform K-subset of [0, n) by partial Fisher-Yates. The permutation buffer
// persists across calls and swaps are undone afterwards, so repeated sampling
// at large n costs O(k) per draw after the one-time O(n) setup.
class SubsetSampler {
public:
  explicit SubsetSampler(std::uint32_t n) : perm_(n) {
    for (std::uint32_t i = 0; i < n; ++i) perm_[i] = i;
  }

  std::vector<std::uint32_t> operator()(std::uint32_t k, Rng& rng) {
    const std::uint32_t n = static_cast<std::uint32_t>(perm_.size());
    std::vector<std::uint32_t> picked(k);
    std::vector<std::uint32_t> swapped(k);
    for (std::uint32_t i = 0; i < k; ++i) {
      const std::uint32_t j =
          i + static_cast<std::uint32_t>(bounded(rng, n - i));
      std::swap(perm_[i], perm_[j]);
      swapped[i] = j;
      picked[i] = perm_[i];
    }
    for (std::uint32_t i = k; i-- > 0;) std::swap(perm_[i], perm_[swapped[i]]);
    return picked;
  }

private:
  std::vector<std::uint32_t> perm_;
};

inline std::vector<int> sample_without_replacement(int n, int k, Rng& rng) {
  SubsetSampler sampler(static_cast<std::uint32_t>(n));
  const auto picked = sampler(static_cast<std::uint32_t>(k), rng);
  return {picked.begin(), picked.end()};
}

}  // namespace prosparse
