#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>

namespace prosparse {

// Distribution function of the maximum gap: h(N, K, s) = P(max gap < s) when
// a K-subset of {0, ..., N-1} is drawn uniformly at random. Three evaluation
// routes are provided; the two exact ones agree as rationals and the float
// route agrees to high relative accuracy.
enum class ProbabilityMethod { bigint_genfunc, dft_genfunc, altsum };

std::string to_string(ProbabilityMethod m);

struct ExactProbability {
  // Present for the exact methods, absent for the float-only DFT route.
  std::optional<mpz_class> numerator;
  std::optional<mpz_class> denominator;  // C(N, K) when present
  double float_value = 0.0;
  ProbabilityMethod method = ProbabilityMethod::bigint_genfunc;
  // Heuristic relative rounding-error bound (DFT route only).
  double error_estimate = 0.0;
};

// Exact binomial coefficient, 0 when k < 0 or k > n or n < 0.
mpz_class binomial(long n, long k);
// log C(n, k) via lgamma; requires 0 <= k <= n.
double log_binomial(long n, long k);

// Exact route: numerator = coefficient of x^(N-K) in (1 + x + ... +
// x^(s-1))^(K+1), obtained by big-integer polynomial powering (repeated
// squaring, every product truncated at degree N-K); denominator = C(N, K).
// s = 0 is accepted and yields probability 0.
ExactProbability h_exact(long N, long K, long s);

// Independent exact route: the inclusion-exclusion form
//   numerator = sum_l (-1)^l C(K+1, l) C(N - l*s, K).
ExactProbability h_altsum(long N, long K, long s);

// Float route: the same coefficient extracted as an inverse DFT of the
// generating function evaluated on a circle. The circle is scaled to the
// saddle-point radius so the summation stays well conditioned at any N;
// the transform length still exceeds the polynomial degree, so there is no
// aliasing. Intended for N beyond big-integer reach.
//
// max_terms caps the number of summation points actually evaluated (the
// decay bound usually cuts the sum far earlier); exceeding it raises
// ResourceError.
ExactProbability h_dft(long N, long K, long s,
                       std::uint64_t max_terms = (1ull << 28));

// P(circular max gap < s) = h(N-1, K-1, s); requires K >= 1.
ExactProbability h_circular(long N, long K, long s,
                            ProbabilityMethod method = ProbabilityMethod::bigint_genfunc);

// Exact for N <= exact_limit, DFT above.
ExactProbability h_auto(long N, long K, long s, long exact_limit = 4096);

// Recovery-success probability for the three analyzed dictionary scenarios.
enum class Scenario { vandermonde_identity, vandermonde_banded, fourier_identity };

Scenario parse_scenario(const std::string& name);

// lo == hi except for the banded scenario, where only a sandwich is known.
struct SuccessProbability {
  Scenario scenario = Scenario::vandermonde_identity;
  double lo = 0.0;
  double hi = 0.0;
  std::optional<mpq_class> lo_exact;
  std::optional<mpq_class> hi_exact;
  bool point() const { return lo_exact && hi_exact ? *lo_exact == *hi_exact : lo == hi; }
};

SuccessProbability success_prob(Scenario scenario, long N, long M, long P, long K,
                                long bandwidth);

// Worst-case guarantee test: 2 (P + b) (K + tau) < N + tau (2 b + 1),
// with tau = 0 for the circulant (Fourier) case and 1 otherwise.
bool deterministic_bound(long P, long K, long N, long bandwidth, int tau);

}  // namespace prosparse
