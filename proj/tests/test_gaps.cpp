#include <doctest.h>

#include <numeric>

#include "prosparse/errors.hpp"
#include "prosparse/gaps.hpp"
#include "prosparse/rng.hpp"
#include "support.hpp"

using namespace prosparse;

TEST_CASE("endpoints support") {
  const std::vector<int> support{0, 9};
  const GapProfile p = gap_profile(support, 10);
  CHECK(p.gaps == std::vector<int>{0, 8, 0});
  CHECK(p.max_gap == 8);
  CHECK(p.circular_max_gap() == 8);
}

TEST_CASE("single point wraps around") {
  const std::vector<int> support{4};
  const GapProfile p = gap_profile(support, 10);
  CHECK(p.gaps == std::vector<int>{4, 5});
  CHECK(p.max_gap == 5);
  CHECK(p.circular_max_gap() == 9);
}

TEST_CASE("picket fence") {
  const std::vector<int> support{0, 2, 4};
  const GapProfile p = gap_profile(support, 6);
  CHECK(p.gaps == std::vector<int>{0, 1, 1, 1});
  CHECK(p.max_gap == 1);
  CHECK(p.circular_max_gap() == 1);
}

TEST_CASE("unsorted input is sorted internally") {
  const std::vector<int> support{9, 0};
  const GapProfile p = gap_profile(support, 10);
  CHECK(p.sorted_support == std::vector<int>{0, 9});
  CHECK(p.max_gap == 8);
}

TEST_CASE("empty support conventions") {
  const GapProfile p = gap_profile(std::vector<int>{}, 7);
  CHECK(p.K == 0);
  CHECK(p.gaps == std::vector<int>{7});
  CHECK(p.max_gap == 7);
  CHECK_THROWS_AS(p.circular_max_gap(), UndefinedCircularError);
}

TEST_CASE("invalid supports") {
  CHECK_THROWS_AS(gap_profile(std::vector<int>{10}, 10), InvalidSupportError);
  CHECK_THROWS_AS(gap_profile(std::vector<int>{-1}, 10), InvalidSupportError);
  CHECK_THROWS_AS(gap_profile(std::vector<int>{3, 3}, 10), InvalidSupportError);
}

TEST_CASE("gap laws on random supports") {
  Rng rng(42);
  for (int trial = 0; trial < 500; ++trial) {
    const int N = 2 + static_cast<int>(bounded(rng, 60));
    const int K = 1 + static_cast<int>(bounded(rng, static_cast<std::uint64_t>(N)));
    const auto support = sample_without_replacement(N, K, rng);
    const GapProfile p = gap_profile(support, N);

    CHECK(std::accumulate(p.gaps.begin(), p.gaps.end(), 0) == N - K);
    const int gamma = p.circular_max_gap();
    CHECK(gamma <= N - K);
    CHECK(p.max_gap <= std::max({gamma, p.gaps.front(), p.gaps.back()}));
    CHECK(p.max_gap == testsupport::brute_max_gap(p.sorted_support, N));
    CHECK(gamma == testsupport::brute_circular_max_gap(p.sorted_support, N));

    // rotating the support leaves the circular max gap unchanged
    const int shift = static_cast<int>(bounded(rng, static_cast<std::uint64_t>(N)));
    std::vector<int> rotated(support.size());
    for (std::size_t i = 0; i < support.size(); ++i)
      rotated[i] = (support[i] + shift) % N;
    CHECK(gap_profile(rotated, N).circular_max_gap() == gamma);
  }
}
