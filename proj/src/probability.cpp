#include "prosparse/probability.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include "prosparse/errors.hpp"

namespace prosparse {

namespace {

using cdouble = std::complex<double>;
constexpr double kPi = std::numbers::pi;

void validate_nks(long N, long K, long s) {
  if (N < 1) throw InvalidInputError("h: N must be >= 1");
  if (K < 0 || K > N) throw InvalidInputError("h: K must be in [0, N]");
  if (s < 0) throw InvalidInputError("h: s must be >= 0");
}

// ---------------------------------------------------------------------------
// Exact route: truncated big-integer polynomial powering.
// ---------------------------------------------------------------------------

using Poly = std::vector<mpz_class>;  // coefficient i belongs to x^i

Poly mul_trunc(const Poly& a, const Poly& b, long max_degree) {
  const long out =
      std::min<long>(static_cast<long>(a.size() + b.size()) - 1, max_degree + 1);
  Poly c(out);
  for (long i = 0; i < static_cast<long>(a.size()) && i < out; ++i) {
    if (a[i] == 0) continue;
    const long jmax = std::min<long>(static_cast<long>(b.size()) - 1, out - 1 - i);
    for (long j = 0; j <= jmax; ++j) {
      if (b[j] == 0) continue;
      mpz_addmul(c[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
    }
  }
  return c;
}

Poly pow_trunc(Poly base, unsigned long e, long max_degree) {
  if (static_cast<long>(base.size()) > max_degree + 1) base.resize(max_degree + 1);
  Poly result{mpz_class(1)};
  while (e != 0) {
    if (e & 1ul) result = mul_trunc(result, base, max_degree);
    e >>= 1;
    if (e != 0) base = mul_trunc(base, base, max_degree);
  }
  return result;
}

// degree of f_s^(K+1) without overflow
__int128 power_degree(long s, long K) {
  return static_cast<__int128>(s - 1) * (static_cast<__int128>(K) + 1);
}

ExactProbability make_exact(mpz_class num, mpz_class den, ProbabilityMethod method) {
  assert(num >= 0 && num <= den);
  ExactProbability p;
  mpq_class q(num, den);
  q.canonicalize();
  p.float_value = q.get_d();
  p.numerator = std::move(num);
  p.denominator = std::move(den);
  p.method = method;
  return p;
}

// ---------------------------------------------------------------------------
// Float route helpers: generating function on a tilted circle.
// ---------------------------------------------------------------------------

// exp(w) - 1 without cancellation for small w.
cdouble expm1c(cdouble w) {
  const double a = w.real();
  const double b = w.imag();
  if (std::abs(a) + std::abs(b) > 0.5) return std::exp(w) - 1.0;
  const double em = std::expm1(a);
  const double sb = std::sin(b);
  const double shb = std::sin(0.5 * b);
  return {em * std::cos(b) - 2.0 * shb * shb, (em + 1.0) * sb};
}

// log of f_s(z) = 1 + z + ... + z^(s-1) at z = rho * e^(i theta), computed as
// log(1 - z^s) - log(1 - z). Any branch works because the log is only ever
// multiplied by an integer before exponentiation. Returns -inf real part at
// zeros of f_s.
cdouble log_fs(double rho, double theta, long s, double log_rho) {
  if (rho > 1.0) {
    // palindrome: f_s(z) = z^(s-1) f_s(1/z)
    const cdouble inner = log_fs(1.0 / rho, -theta, s, -log_rho);
    return cdouble(static_cast<double>(s - 1) * log_rho,
                   static_cast<double>(s - 1) * theta) +
           inner;
  }
  const cdouble w1(log_rho, theta);
  if (std::abs(log_rho) + std::abs(theta) < 1e-300)
    return {std::log(static_cast<double>(s)), 0.0};
  const double sim = std::remainder(static_cast<double>(s) * theta, 2.0 * kPi);
  const cdouble num = -expm1c(cdouble(static_cast<double>(s) * log_rho, sim));
  const cdouble den = -expm1c(w1);
  if (num == cdouble(0.0, 0.0))
    return {-std::numeric_limits<double>::infinity(), 0.0};
  return std::log(num) - std::log(den);
}

double log_fs_real(double rho, long s) { return log_fs(rho, 0.0, s, std::log(rho)).real(); }

// Mean of the distribution with weights rho^i on {0, ..., s-1}. Strictly
// increasing in rho, from 0 to s-1.
double tilted_mean(double rho, long s) {
  if (rho > 1.0) return static_cast<double>(s - 1) - tilted_mean(1.0 / rho, s);
  const double t = std::log(rho);
  if (std::abs(t) < 1e-9) {
    // expansion around rho = 1: mean + t * variance
    const double sd = static_cast<double>(s);
    return 0.5 * (sd - 1.0) + t * (sd * sd - 1.0) / 12.0;
  }
  const double st = static_cast<double>(s) * t;
  // rho/(1-rho) - s rho^s/(1-rho^s), written via expm1 of -log(rho)
  const double first = 1.0 / std::expm1(-t);
  const double second =
      (st > -700.0) ? static_cast<double>(s) / std::expm1(-st) : 0.0;
  return first - second;
}

// Radius where the tilted mean matches target; bisection on log(rho).
double saddle_radius(long s, double target) {
  double lo = -1.0, hi = 1.0;
  while (tilted_mean(std::exp(lo), s) > target && lo > -740.0) lo *= 2.0;
  while (tilted_mean(std::exp(hi), s) < target && hi < 740.0) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (tilted_mean(std::exp(mid), s) < target)
      lo = mid;
    else
      hi = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

struct KahanSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

std::string to_string(ProbabilityMethod m) {
  switch (m) {
    case ProbabilityMethod::bigint_genfunc: return "bigint-genfunc";
    case ProbabilityMethod::dft_genfunc: return "dft-genfunc";
    case ProbabilityMethod::altsum: return "altsum";
  }
  return "unknown";
}

mpz_class binomial(long n, long k) {
  if (n < 0 || k < 0 || k > n) return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return r;
}

double log_binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n)
    throw InvalidInputError("log_binomial: need 0 <= k <= n");
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

ExactProbability h_exact(long N, long K, long s) {
  validate_nks(N, K, s);
  const long D = N - K;
  mpz_class den = binomial(N, K);

  mpz_class num;
  if (s <= 0) {
    num = 0;
  } else if (s > D) {
    num = den;  // the maximum gap never exceeds N - K
  } else if (power_degree(s, K) < D) {
    num = 0;  // requested coefficient lies beyond the polynomial degree
  } else {
    Poly base(static_cast<std::size_t>(std::min(s - 1, D)) + 1, mpz_class(1));
    Poly p = pow_trunc(std::move(base), static_cast<unsigned long>(K) + 1, D);
    num = (static_cast<long>(p.size()) > D) ? p[D] : mpz_class(0);
  }
  return make_exact(std::move(num), std::move(den), ProbabilityMethod::bigint_genfunc);
}

ExactProbability h_altsum(long N, long K, long s) {
  validate_nks(N, K, s);
  mpz_class den = binomial(N, K);
  mpz_class num = 0;
  if (s > 0) {
    for (long l = 0; l <= K + 1; ++l) {
      const long n_l = N - l * s;
      if (n_l < K) break;  // all remaining terms vanish
      mpz_class term = binomial(K + 1, l) * binomial(n_l, K);
      if (l % 2 == 0)
        num += term;
      else
        num -= term;
    }
  }
  return make_exact(std::move(num), std::move(den), ProbabilityMethod::altsum);
}

ExactProbability h_dft(long N, long K, long s, std::uint64_t max_terms) {
  validate_nks(N, K, s);
  ExactProbability p;
  p.method = ProbabilityMethod::dft_genfunc;

  const long D = N - K;
  const double logC = log_binomial(N, K);
  const double eps = std::numeric_limits<double>::epsilon();

  if (s <= 0) return p;  // float 0
  if (D == 0 || s > D) {
    p.float_value = 1.0;
    return p;
  }
  const __int128 deg = power_degree(s, K);
  if (deg < D) return p;
  if (deg == D) {
    // top coefficient of the power is 1
    p.float_value = std::exp(-logC);
    p.error_estimate = eps * 4.0 * static_cast<double>(K + 1);
    return p;
  }
  if (deg > (static_cast<__int128>(1) << 62))
    throw ResourceError("h_dft: transform length exceeds supported range");

  const std::uint64_t L = static_cast<std::uint64_t>(deg) + 1;
  const double kp1 = static_cast<double>(K) + 1.0;
  const double mean_target = static_cast<double>(D) / kp1;
  const double rho = saddle_radius(s, mean_target);
  const double log_rho = std::log(rho);
  const double lnf0 = log_fs_real(rho, s);

  // |f_s(rho e^(i theta))| <= (1 + rho^s) / |1 - rho e^(i theta)|, and the
  // denominator grows monotonically with theta on (0, pi]. Once (K+1) times
  // the log of this bound drops far enough below (K+1) lnf0, every remaining
  // term is negligible, which truncates the sum to the main lobe.
  const double s_log_rho = static_cast<double>(s) * log_rho;
  const double log_num_bound =
      (s_log_rho < 0) ? std::log1p(std::exp(s_log_rho)) : s_log_rho + std::log1p(std::exp(-s_log_rho));
  const double one_minus_rho_sq = (1.0 - rho) * (1.0 - rho);
  const double cutoff = -760.0 - std::log(static_cast<double>(L));

  KahanSum acc_re;   // doubled interior terms
  KahanSum acc_abs;  // magnitudes, for the error estimate
  double middle = 0.0;
  const std::uint64_t half = L / 2;
  std::uint64_t evaluated = 0;

  for (std::uint64_t j = 1; j <= half; ++j) {
    if (++evaluated > max_terms)
      throw ResourceError("h_dft: summation budget exceeded; raise max_terms");
    const double theta = 2.0 * kPi * (static_cast<double>(j) / static_cast<double>(L));
    const double sh = std::sin(0.5 * theta);
    const double log_bound =
        log_num_bound - 0.5 * std::log(one_minus_rho_sq + 4.0 * rho * sh * sh);
    if (kp1 * (log_bound - lnf0) < cutoff) break;

    const cdouble lf = log_fs(rho, theta, s, log_rho);
    const double re = kp1 * (lf.real() - lnf0);
    if (re < -745.0) continue;
    const double phase_f = std::remainder(kp1 * lf.imag(), 2.0 * kPi);
    // twiddle exponent -2*pi*j*D/L with the integer product reduced mod L
    const std::uint64_t jd = static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(j) * static_cast<unsigned __int128>(D)) %
        static_cast<unsigned __int128>(L));
    const double phase_w =
        -2.0 * kPi * (static_cast<double>(jd) / static_cast<double>(L));
    const double mag = std::exp(re);
    const double term_re = mag * std::cos(phase_f + phase_w);
    if (2 * j == L) {
      middle = term_re;  // self-conjugate point, counted once
      acc_abs.add(mag);
    } else {
      acc_re.add(2.0 * term_re);
      acc_abs.add(2.0 * mag);
    }
  }

  const double total = 1.0 + acc_re.sum + middle;  // j = 0 term is exactly 1
  const double sum_abs = 1.0 + acc_abs.sum;
  if (!(total > 0.0)) {
    // cancellation swamped the coefficient; report 0 with a useless-error flag
    p.float_value = 0.0;
    p.error_estimate = 1.0;
    return p;
  }
  // coef = exp((K+1) lnf0) * rho^(-D) * total / L
  const double log_coef = kp1 * lnf0 - static_cast<double>(D) * log_rho +
                          std::log(total) - std::log(static_cast<double>(L));
  p.float_value = std::exp(std::min(log_coef - logC, 0.0));
  p.error_estimate = eps * (sum_abs / total + 4.0 * kp1);
  return p;
}

ExactProbability h_circular(long N, long K, long s, ProbabilityMethod method) {
  if (K < 1)
    throw UndefinedCircularError("h_circular: requires at least one support point");
  validate_nks(N, K, s);
  switch (method) {
    case ProbabilityMethod::bigint_genfunc: return h_exact(N - 1, K - 1, s);
    case ProbabilityMethod::altsum: return h_altsum(N - 1, K - 1, s);
    case ProbabilityMethod::dft_genfunc: return h_dft(N - 1, K - 1, s);
  }
  throw InvalidParameterError("h_circular: unknown method");
}

ExactProbability h_auto(long N, long K, long s, long exact_limit) {
  return (N <= exact_limit) ? h_exact(N, K, s) : h_dft(N, K, s);
}

Scenario parse_scenario(const std::string& name) {
  if (name == "vandermonde-identity") return Scenario::vandermonde_identity;
  if (name == "vandermonde-banded") return Scenario::vandermonde_banded;
  if (name == "fourier-identity") return Scenario::fourier_identity;
  throw InvalidInputError("unknown scenario: " + name);
}

namespace {

struct HValue {
  double f = 0.0;
  std::optional<mpq_class> exact;
};

HValue h_value(long N, long K, long s, bool want_exact) {
  HValue v;
  if (want_exact) {
    ExactProbability p = h_exact(N, K, s);
    v.f = p.float_value;
    v.exact = mpq_class(*p.numerator, *p.denominator);
    v.exact->canonicalize();
  } else {
    v.f = h_dft(N, K, s).float_value;
  }
  return v;
}

HValue indicator(bool b) {
  HValue v;
  v.f = b ? 1.0 : 0.0;
  v.exact = mpq_class(b ? 1 : 0);
  return v;
}

HValue complement_product(const HValue& a, const HValue& b) {
  HValue v;
  v.f = 1.0 - a.f * b.f;
  if (a.exact && b.exact) v.exact = 1 - (*a.exact) * (*b.exact);
  return v;
}

}  // namespace

SuccessProbability success_prob(Scenario scenario, long N, long M, long P, long K,
                                long bandwidth) {
  if (N < 1 || M < N) throw InvalidInputError("success_prob: need M >= N >= 1");
  if (P < 0 || P > M || K < 0 || K > N)
    throw InvalidInputError("success_prob: sparsities out of range");
  if (bandwidth < 0) throw InvalidInputError("success_prob: negative bandwidth");
  if (scenario != Scenario::vandermonde_banded && bandwidth != 0)
    throw InvalidInputError("success_prob: nonzero bandwidth needs the banded scenario");
  if (scenario == Scenario::fourier_identity && M != N)
    throw InvalidInputError("success_prob: fourier-identity is square (M == N)");

  const bool exact = N <= 4096;
  SuccessProbability out;
  out.scenario = scenario;

  auto fill = [&out](const HValue& lo, const HValue& hi) {
    out.lo = lo.f;
    out.hi = hi.f;
    out.lo_exact = lo.exact;
    out.hi_exact = hi.exact;
  };

  switch (scenario) {
    case Scenario::vandermonde_identity: {
      HValue h = h_value(N, K, 2 * P, exact);
      HValue one = indicator(true);
      HValue val = complement_product(h, one);
      fill(val, val);
      break;
    }
    case Scenario::vandermonde_banded: {
      HValue h_lo = h_value(N, K, 2 * P + 2 * bandwidth, exact);
      HValue h_hi = h_value(N, K, 2 * P, exact);
      HValue one = indicator(true);
      fill(complement_product(h_lo, one), complement_product(h_hi, one));
      break;
    }
    case Scenario::fourier_identity: {
      // primal gap factor and its dual (spikes and Fourier atoms swap roles)
      HValue f1 = (K >= 1) ? h_value(N - 1, K - 1, 2 * P, exact) : indicator(2 * P > N);
      HValue f2 = (P >= 1) ? h_value(N - 1, P - 1, 2 * K, exact) : indicator(2 * K > N);
      HValue val = complement_product(f1, f2);
      fill(val, val);
      break;
    }
  }
  return out;
}

bool deterministic_bound(long P, long K, long N, long bandwidth, int tau) {
  if (tau != 0 && tau != 1)
    throw InvalidParameterError("deterministic_bound: tau must be 0 or 1");
  const __int128 lhs = static_cast<__int128>(2) * (P + bandwidth) * (K + tau);
  const __int128 rhs =
      static_cast<__int128>(N) + static_cast<__int128>(tau) * (2 * bandwidth + 1);
  return lhs < rhs;
}

}  // namespace prosparse
