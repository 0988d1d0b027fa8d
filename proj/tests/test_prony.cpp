#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "prosparse/errors.hpp"
#include "prosparse/prony.hpp"
#include "prosparse/rng.hpp"

using namespace prosparse;

namespace {

// Random distinct unit-circle nodes with a minimum angular separation, so
// "distinct" survives floating point.
std::vector<cdouble> random_unit_nodes(int P, Rng& rng, double min_sep = 0.05) {
  std::vector<double> angles(P);
  for (;;) {
    for (double& a : angles) a = 2.0 * std::numbers::pi * uniform01(rng);
    std::vector<double> s = angles;
    std::sort(s.begin(), s.end());
    double sep = 2.0 * std::numbers::pi - (s.back() - s.front());
    for (int i = 1; i < P; ++i) sep = std::min(sep, s[i] - s[i - 1]);
    if (P == 1 || sep >= min_sep) break;
  }
  std::vector<cdouble> nodes(P);
  for (int i = 0; i < P; ++i) nodes[i] = std::polar(1.0, angles[i]);
  return nodes;
}

std::vector<cdouble> window_from(const std::vector<cdouble>& nodes,
                                 const std::vector<cdouble>& amps, long start,
                                 int len) {
  std::vector<cdouble> w(len, cdouble(0, 0));
  for (std::size_t p = 0; p < nodes.size(); ++p) {
    cdouble pw = std::pow(nodes[p], static_cast<double>(start));
    for (int i = 0; i < len; ++i) {
      w[i] += amps[p] * pw;
      pw *= nodes[p];
    }
  }
  return w;
}

// Pair each true node with the nearest recovered one and return the largest
// parameter error.
double roundtrip_error(const PronyEstimate& est, const std::vector<cdouble>& nodes,
                       const std::vector<cdouble>& amps) {
  if (est.order != static_cast<int>(nodes.size())) return 1.0;
  double worst = 0.0;
  for (std::size_t p = 0; p < nodes.size(); ++p) {
    int best = 0;
    double bd = 1e300;
    for (int q = 0; q < est.order; ++q) {
      const double d = std::abs(est.nodes[q] - nodes[p]);
      if (d < bd) {
        bd = d;
        best = q;
      }
    }
    worst = std::max(worst, bd);
    worst = std::max(worst, std::abs(est.amplitudes[best] - amps[p]) / std::abs(amps[p]));
  }
  return worst;
}

}  // namespace

TEST_CASE("single exponential from two samples") {
  const std::vector<cdouble> w{{3, 0}, {6, 0}};
  const PronyEstimate est = prony_solve(w, 1);
  REQUIRE(est.order == 1);
  CHECK(std::abs(est.nodes[0] - cdouble(2, 0)) < 1e-12);
  CHECK(std::abs(est.amplitudes[0] - cdouble(3, 0)) < 1e-12);
  CHECK_FALSE(est.condition_flag);
}

TEST_CASE("two exponentials at plus and minus one") {
  const std::vector<cdouble> w{{2, 0}, {0, 0}, {2, 0}, {0, 0}};
  const PronyEstimate est = prony_solve(w, 2);
  REQUIRE(est.order == 2);
  std::vector<double> re{est.nodes[0].real(), est.nodes[1].real()};
  std::sort(re.begin(), re.end());
  CHECK(re[0] == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(re[1] == doctest::Approx(1.0).epsilon(1e-10));
  for (const cdouble& a : est.amplitudes)
    CHECK(std::abs(a - cdouble(1, 0)) < 1e-10);

  // re-synthesis reproduces the window
  const auto model = evaluate_model(est, 0, 4);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(model[i] - w[i]) < 1e-10);
}

TEST_CASE("zero window is degenerate") {
  const std::vector<cdouble> w{{0, 0}, {0, 0}};
  const PronyEstimate est = prony_solve(w, 1);
  CHECK(est.order == 0);
  CHECK(est.condition_flag);
}

TEST_CASE("window length is checked") {
  const std::vector<cdouble> w{{1, 0}, {2, 0}, {4, 0}};
  CHECK_THROWS_AS(prony_solve(w, 2), InvalidWindowError);
  CHECK_THROWS_AS(prony_solve(w, 0), InvalidWindowError);
}

TEST_CASE("rank collapse reports reduced order") {
  // one exponential, solved as if there were two
  const std::vector<cdouble> w{{1, 0}, {2, 0}, {4, 0}, {8, 0}};
  const PronyEstimate est = prony_solve(w, 2);
  CHECK(est.condition_flag);
  REQUIRE(est.order == 1);
  CHECK(std::abs(est.nodes[0] - cdouble(2, 0)) < 1e-8);
  CHECK(std::abs(est.amplitudes[0] - cdouble(1, 0)) < 1e-8);
}

TEST_CASE("evaluate_model basics") {
  PronyEstimate est;
  est.order = 1;
  est.nodes = {cdouble(2, 0)};
  est.amplitudes = {cdouble(3, 0)};
  const auto v = evaluate_model(est, 0, 3);
  CHECK(v[0] == cdouble(3, 0));
  CHECK(std::abs(v[1] - cdouble(6, 0)) < 1e-12);
  CHECK(std::abs(v[2] - cdouble(12, 0)) < 1e-12);

  const PronyEstimate empty;
  for (const cdouble& z : evaluate_model(empty, 0, 5)) CHECK(z == cdouble(0, 0));
}

TEST_CASE("roundtrip on random unit-circle instances") {
  Rng rng(404);
  for (int trial = 0; trial < 200; ++trial) {
    const int P = 1 + static_cast<int>(bounded(rng, 8));
    const auto nodes = random_unit_nodes(P, rng);
    std::vector<cdouble> amps(P);
    for (auto& a : amps) {
      a = complex_normal(rng);
      while (std::abs(a) < 0.2) a = complex_normal(rng);
    }
    const auto w = window_from(nodes, amps, 0, 2 * P);
    const PronyEstimate est = prony_solve(w, P);
    CHECK(roundtrip_error(est, nodes, amps) < 1e-8);
  }
}

TEST_CASE("shift covariance") {
  Rng rng(505);
  for (int trial = 0; trial < 50; ++trial) {
    const int P = 1 + static_cast<int>(bounded(rng, 4));
    const long shift = 1 + static_cast<long>(bounded(rng, 40));
    const auto nodes = random_unit_nodes(P, rng);
    std::vector<cdouble> amps(P);
    for (auto& a : amps) {
      a = complex_normal(rng);
      while (std::abs(a) < 0.2) a = complex_normal(rng);
    }
    const auto w = window_from(nodes, amps, shift, 2 * P);
    const PronyEstimate abs_est = prony_solve(w, P, shift);
    const PronyEstimate rel_est = prony_solve(w, P, 0);
    REQUIRE(abs_est.order == P);
    REQUIRE(rel_est.order == P);
    // same nodes; relative amplitudes differ by xi^shift
    for (int p = 0; p < P; ++p) {
      int q = 0;
      double bd = 1e300;
      for (int j = 0; j < P; ++j) {
        const double d = std::abs(rel_est.nodes[j] - abs_est.nodes[p]);
        if (d < bd) {
          bd = d;
          q = j;
        }
      }
      CHECK(bd < 1e-8);
      const cdouble expect =
          abs_est.amplitudes[p] * std::pow(abs_est.nodes[p], static_cast<double>(shift));
      CHECK(std::abs(rel_est.amplitudes[q] - expect) <
            1e-7 * std::abs(expect));
    }
  }
}

TEST_CASE("recovered filter annihilates the window") {
  Rng rng(606);
  for (int trial = 0; trial < 100; ++trial) {
    const int P = 1 + static_cast<int>(bounded(rng, 6));
    const auto nodes = random_unit_nodes(P, rng);
    std::vector<cdouble> amps(P);
    for (auto& a : amps) {
      a = complex_normal(rng);
      while (std::abs(a) < 0.2) a = complex_normal(rng);
    }
    const auto w = window_from(nodes, amps, 0, 2 * P);
    const PronyEstimate est = prony_solve(w, P);
    double wnorm = 0.0;
    for (const cdouble& v : w) wnorm += std::norm(v);
    wnorm = std::sqrt(wnorm);
    for (int k = P; k < 2 * P; ++k) {
      cdouble conv(0, 0);
      for (int i = 0; i <= P; ++i) conv += est.filter[i] * w[k - i];
      CHECK(std::abs(conv) <= 1e-8 * wnorm);
    }
  }
}
