#include <doctest.h>

#include <cmath>

#include "prosparse/errors.hpp"
#include "prosparse/gaps.hpp"
#include "prosparse/probability.hpp"
#include "prosparse/recover.hpp"
#include "prosparse/rng.hpp"

using namespace prosparse;

namespace {

double fit_against(const std::vector<cdouble>& y, const DictionaryConfig& config,
                   const SparseSignal& sig) {
  const auto synth = synthesize(config, sig);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    num += std::norm(synth[i] - y[i]);
    den += std::norm(y[i]);
  }
  return den > 0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace

TEST_CASE("pure spike train is found at order zero") {
  const DictionaryConfig c = build_fourier_frame(4, 4);
  const std::vector<cdouble> y{{0, 0}, {0, 0}, {5, 0}, {0, 0}};
  const RecoveryResult r = recover(y, c);
  REQUIRE(r.status == RecoveryStatus::recovered);
  const Solution& s = r.solutions.front();
  CHECK(s.signal.P() == 0);
  CHECK(s.signal.K() == 1);
  CHECK(s.signal.support2 == std::vector<int>{2});
  CHECK(std::abs(s.signal.coeffs2[0] - cdouble(5, 0)) < 1e-12);
}

TEST_CASE("dc atom plus spike on the length-8 basis") {
  const DictionaryConfig c = build_fourier_frame(8, 8);
  SparseSignal planted;
  planted.support1 = {0};
  planted.coeffs1 = {cdouble(std::sqrt(8.0), 0)};
  planted.support2 = {0};
  planted.coeffs2 = {cdouble(1, 0)};
  const auto y = synthesize(c, planted);

  const RecoveryResult r = recover(y, c);
  REQUIRE(r.status == RecoveryStatus::recovered);
  const Solution* hit = r.find(planted);
  REQUIRE(hit != nullptr);
  CHECK(hit->signal.P() == 1);
  CHECK(hit->signal.K() == 1);
  // ranked first: total sparsity 2 beats everything else found
  CHECK(&r.solutions.front() == hit);
}

TEST_CASE("residual sparsify") {
  SUBCASE("identity thresholding") {
    const DictionaryConfig c = build_fourier_frame(3, 3);
    const std::vector<cdouble> r{{0, 0}, {5, 0}, {0, 0}};
    const auto s = residual_sparsify(r, c, 1e-8);
    REQUIRE(s.has_value());
    CHECK(s->support2 == std::vector<int>{1});
    CHECK(s->coeffs2[0] == cdouble(5, 0));
  }
  SUBCASE("banded forward synthesis inverts") {
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
      DictionaryConfig c = build_fourier_frame(24, 24);
      c.phi = BandedMatrix::random(24, 1 + static_cast<int>(bounded(rng, 2)), rng);
      c.validate();
      SparseSignal x;
      x.support2 = sample_without_replacement(24, 2, rng);
      x.coeffs2 = {complex_normal(rng), complex_normal(rng)};
      x.canonicalize();
      std::vector<cdouble> r(24, cdouble(0, 0));
      for (int k = 0; k < 2; ++k) c.phi.add_column(x.support2[k], x.coeffs2[k], r);

      const auto s = residual_sparsify(r, c, 1e-10);
      REQUIRE(s.has_value());
      CHECK(s->support2 == x.support2);
      for (int k = 0; k < 2; ++k)
        CHECK(std::abs(s->coeffs2[k] - x.coeffs2[k]) < 1e-8);
    }
  }
  SUBCASE("dense residual rejected by the sparsity cap") {
    Rng rng(18);
    const DictionaryConfig c = build_fourier_frame(16, 16);
    std::vector<cdouble> r(16);
    for (auto& v : r) v = complex_normal(rng);
    CHECK_FALSE(residual_sparsify(r, c, 1e-8, 1).has_value());
  }
}

TEST_CASE("acceptance rule") {
  const DictionaryConfig circulant = build_fourier_frame(25, 25);
  CHECK(acceptance_rule(3, 4, circulant, true));        // 24 < 25
  CHECK_FALSE(acceptance_rule(3, 5, circulant, true));  // 30 >= 25
  // the dense order-zero representation never passes strict mode
  CHECK_FALSE(acceptance_rule(0, 25, circulant, true));
  CHECK(acceptance_rule(3, 5, circulant, false));
}

TEST_CASE("worst-case guarantee on random instances") {
  Rng rng(2024);
  int checked = 0;
  for (int trial = 0; checked < 40; ++trial) {
    REQUIRE(trial < 4000);
    const int tau = static_cast<int>(bounded(rng, 2));
    const int b = static_cast<int>(bounded(rng, 3));
    const int N = 32 + static_cast<int>(bounded(rng, 64));
    const int P = static_cast<int>(bounded(rng, 7));
    DictionaryConfig c = (tau == 0) ? build_fourier_frame(N, N)
                                    : build_fourier_frame(N, 2 * N);
    if (b > 0) {
      c.phi = BandedMatrix::random(N, b, rng);
      c.validate();
    }
    // draw K inside the guarantee region (the bound is monotone in K)
    long k_hi = -1;
    for (long K = N; K >= 0; --K)
      if (deterministic_bound(P, K, N, b, tau)) {
        k_hi = K;
        break;
      }
    if (k_hi < 0 || (P == 0 && k_hi == 0)) continue;
    const long K = bounded(rng, static_cast<std::uint64_t>(k_hi) + 1);
    if (P + K == 0) continue;
    if (tau == 0 && b == 0 && K == 0 && 2 * P + 2 * b > N) continue;

    const SparseSignal planted =
        sample_signal(c, P, static_cast<int>(K), derive_seed(9000, trial));
    const auto y = synthesize(c, planted);
    RecoverOptions opts;
    opts.max_order = P;
    const RecoveryResult r = recover(y, c, opts);
    const Solution* hit = r.find(planted);
    REQUIRE_MESSAGE(hit != nullptr, "tau=", tau, " b=", b, " N=", N, " P=", P,
                    " K=", K);
    ++checked;
  }
}

TEST_CASE("gap criterion decides success for the circulant identity case") {
  Rng rng(31337);
  const int N = 64;
  const DictionaryConfig c = build_fourier_frame(N, N);
  int mismatches = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const int P = 1 + static_cast<int>(bounded(rng, 8));
    const int K = 1 + static_cast<int>(bounded(rng, 48));
    const SparseSignal planted = sample_signal(c, P, K, derive_seed(7100, trial));
    const auto y = synthesize(c, planted);
    const int gamma = gap_profile(planted.support2, N).circular_max_gap();

    RecoverOptions opts;
    opts.max_order = P;
    const RecoveryResult r = recover(y, c, opts);
    const bool recovered = r.find(planted) != nullptr;
    if (recovered != (gamma >= 2 * P)) ++mismatches;
  }
  CHECK(mismatches == 0);
}

TEST_CASE("sufficient gap guarantees banded recovery") {
  Rng rng(555);
  for (int trial = 0; trial < 60; ++trial) {
    const int N = 48;
    const int b = 1 + static_cast<int>(bounded(rng, 2));
    const int P = 1 + static_cast<int>(bounded(rng, 3));
    const int K = 1 + static_cast<int>(bounded(rng, 6));
    DictionaryConfig c = build_fourier_frame(N, 2 * N);
    c.phi = BandedMatrix::random(N, b, rng);
    c.validate();
    const SparseSignal planted = sample_signal(c, P, K, derive_seed(8200, trial));
    const auto y = synthesize(c, planted);
    if (gap_profile(planted.support2, N).max_gap < 2 * P + 2 * b) continue;

    RecoverOptions opts;
    opts.max_order = P;
    const RecoveryResult r = recover(y, c, opts);
    CHECK(r.find(planted) != nullptr);
  }
}

TEST_CASE("every returned solution re-synthesizes the measurement") {
  Rng rng(77);
  for (int trial = 0; trial < 15; ++trial) {
    const DictionaryConfig c = build_fourier_frame(32, 32);
    const SparseSignal planted = sample_signal(c, 2, 5, derive_seed(4400, trial));
    const auto y = synthesize(c, planted);
    RecoverOptions opts;
    opts.max_order = 4;
    opts.early_exit = false;
    const RecoveryResult r = recover(y, c, opts);
    for (const Solution& s : r.solutions) {
      CHECK(fit_against(y, c, s.signal) <= opts.tol.fit);
      CHECK(s.fit_residual <= opts.tol.fit);
    }
  }
}

TEST_CASE("picket fence defeats the sweep") {
  const int N = 16;
  const DictionaryConfig c = build_fourier_frame(N, N);
  SparseSignal planted;
  planted.support2 = {0, 4, 8, 12};
  planted.coeffs2 = {cdouble(1, 0), cdouble(1, 0), cdouble(1, 0), cdouble(1, 0)};
  Rng rng(3);
  planted.support1 = {3, 9};
  planted.coeffs1 = {complex_normal(rng), complex_normal(rng)};
  planted.canonicalize();
  const int P = planted.P();
  // K spikes every 4 slots leave no clean window of length 2P = 4
  CHECK(gap_profile(planted.support2, N).circular_max_gap() < 2 * P);
  CHECK(static_cast<long>(planted.K()) * 2 * P > N - planted.K());

  const auto y = synthesize(c, planted);
  RecoverOptions opts;
  opts.max_order = P;
  const RecoveryResult r = recover(y, c, opts);
  CHECK(r.find(planted) == nullptr);
}

TEST_CASE("dual pass rescues atom-heavy signals") {
  const int N = 16;
  const DictionaryConfig c = build_fourier_frame(N, N);
  Rng rng(12);
  SparseSignal planted;
  planted.support1 = {0, 1, 2, 3, 4, 5, 6};
  for (int i = 0; i < 7; ++i) planted.coeffs1.push_back(complex_normal(rng));
  planted.support2 = {0, 8};
  planted.coeffs2 = {complex_normal(rng), complex_normal(rng)};
  planted.canonicalize();
  const auto y = synthesize(c, planted);

  // primal gap too small: circular max gap 7 < 2P = 14
  CHECK(gap_profile(planted.support2, N).circular_max_gap() < 2 * planted.P());

  RecoverOptions opts;
  opts.max_order = planted.P();
  CHECK(recover(y, c, opts).find(planted) == nullptr);

  opts.dual_pass = true;
  const RecoveryResult r = recover(y, c, opts);
  const Solution* hit = r.find(planted);
  REQUIRE(hit != nullptr);
  CHECK(hit->via_dual);
}

TEST_CASE("window budget flags partial results") {
  const DictionaryConfig c = build_fourier_frame(32, 32);
  const SparseSignal planted = sample_signal(c, 2, 2, 42);
  const auto y = synthesize(c, planted);
  RecoverOptions opts;
  opts.window_budget = 1;  // only the order-0 pass fits
  const RecoveryResult r = recover(y, c, opts);
  CHECK(r.budget_exhausted);
  CHECK(r.windows_tested <= 1);
  CHECK(r.find(planted) == nullptr);
}

TEST_CASE("results do not depend on the worker count") {
  const DictionaryConfig c = build_fourier_frame(48, 48);
  const SparseSignal planted = sample_signal(c, 3, 6, 4242);
  const auto y = synthesize(c, planted);
  RecoverOptions a;
  a.max_order = 4;
  a.early_exit = false;
  RecoverOptions b = a;
  b.jobs = 4;
  const RecoveryResult ra = recover(y, c, a);
  const RecoveryResult rb = recover(y, c, b);
  CHECK(ra.windows_tested == rb.windows_tested);
  REQUIRE(ra.solutions.size() == rb.solutions.size());
  for (std::size_t i = 0; i < ra.solutions.size(); ++i) {
    CHECK(ra.solutions[i].signal.support1 == rb.solutions[i].signal.support1);
    CHECK(ra.solutions[i].signal.support2 == rb.solutions[i].signal.support2);
    CHECK(ra.solutions[i].window_start == rb.solutions[i].window_start);
  }
}

TEST_CASE("strict mode filters non-guaranteed pairs") {
  const DictionaryConfig c = build_fourier_frame(16, 16);
  const SparseSignal planted = sample_signal(c, 4, 8, 3);
  const auto y = synthesize(c, planted);
  RecoverOptions opts;
  opts.strict = true;
  opts.max_order = 5;
  const RecoveryResult r = recover(y, c, opts);
  for (const Solution& s : r.solutions)
    CHECK(deterministic_bound(std::max(s.signal.P(), 1), s.signal.K(), 16, 0, 0));
  CHECK(r.find(planted) == nullptr);  // 2 * 4 * 8 = 64 >= 16
}

TEST_CASE("dimension mismatch rejected") {
  const DictionaryConfig c = build_fourier_frame(8, 8);
  CHECK_THROWS_AS(recover(std::vector<cdouble>(7), c), InvalidInputError);
}
