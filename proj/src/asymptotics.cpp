#include "prosparse/asymptotics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "prosparse/errors.hpp"
#include "prosparse/rng.hpp"

namespace prosparse {

namespace {
constexpr double kPi = std::numbers::pi;
}

double beta_critical(double alpha, double delta) {
  if (!(delta > 0.0) || delta > 1.0)
    throw InvalidParameterError("beta_critical: delta must be in (0, 1]");
  if (!(alpha > 0.0))
    throw InvalidParameterError("beta_critical: alpha must be positive");
  if (delta == 1.0) {
    if (alpha >= 1.0)
      throw InvalidParameterError("beta_critical: delta = 1 requires alpha < 1");
    return -1.0 / (2.0 * std::log(1.0 - alpha));
  }
  return delta / (2.0 * alpha);
}

namespace {

// Circular max gap of a sorted support inside [0, N): boundary gaps merge.
long circular_max_gap_sorted(const std::vector<std::uint32_t>& sorted, long N) {
  const std::size_t k = sorted.size();
  long best = static_cast<long>(sorted.front()) +
              (N - 1 - static_cast<long>(sorted.back()));
  for (std::size_t i = 1; i < k; ++i)
    best = std::max(best,
                    static_cast<long>(sorted[i]) - static_cast<long>(sorted[i - 1]) - 1);
  return best;
}

void run_point(PhasePoint& pt, std::uint64_t seed, std::size_t ia, std::size_t ib) {
  Rng rng(derive_seed(seed, ia, ib));
  if (pt.K == 0) {
    pt.degenerate = true;
    pt.successes = (2 * pt.P <= pt.N) ? pt.trials : 0;
    return;
  }
  if (pt.P == 0) {
    pt.degenerate = true;
    pt.successes = pt.trials;
    return;
  }
  SubsetSampler sampler(static_cast<std::uint32_t>(pt.N));
  long successes = 0;
  for (long t = 0; t < pt.trials; ++t) {
    auto support = sampler(static_cast<std::uint32_t>(pt.K), rng);
    std::sort(support.begin(), support.end());
    if (circular_max_gap_sorted(support, pt.N) >= 2 * pt.P) ++successes;
  }
  pt.successes = successes;
}

}  // namespace

std::vector<PhasePoint> phase_grid(double delta, const std::vector<double>& alphas,
                                   const std::vector<double>& betas, long N,
                                   long trials, std::uint64_t seed, int jobs) {
  if (N < 1) throw InvalidParameterError("phase_grid: N must be positive");
  if (trials < 0) throw InvalidParameterError("phase_grid: negative trial count");
  if (!(delta > 0.0) || delta > 1.0)
    throw InvalidParameterError("phase_grid: delta must be in (0, 1]");

  const double logN = std::log(static_cast<double>(N));
  std::vector<PhasePoint> grid;
  grid.reserve(alphas.size() * betas.size());
  for (std::size_t ia = 0; ia < alphas.size(); ++ia)
    for (std::size_t ib = 0; ib < betas.size(); ++ib) {
      PhasePoint pt;
      pt.alpha = alphas[ia];
      pt.beta = betas[ib];
      pt.delta = delta;
      pt.N = N;
      pt.trials = trials;
      pt.K = static_cast<long>(
          std::floor(pt.alpha * std::pow(static_cast<double>(N), delta)));
      pt.P = static_cast<long>(
          std::floor(pt.beta * std::pow(static_cast<double>(N), 1.0 - delta) * logN));
      if (pt.K > N)
        throw InvalidParameterError("phase_grid: alpha N^delta exceeds N");
      pt.beta_c = (delta == 1.0 && pt.alpha >= 1.0)
                      ? std::numeric_limits<double>::quiet_NaN()
                      : beta_critical(pt.alpha, delta);
      pt.degenerate = (pt.K == 0 || pt.P == 0);
      grid.push_back(pt);
    }

  const std::size_t nb = betas.size();
  const std::size_t total = grid.size();
  jobs = std::max(1, jobs);
  if (jobs == 1 || total < 2) {
    for (std::size_t i = 0; i < total; ++i)
      run_point(grid[i], seed, i / nb, i % nb);
    return grid;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= total) break;
        run_point(grid[i], seed, i / nb, i % nb);
      }
    });
  for (auto& th : pool) th.join();
  return grid;
}

namespace {

void check_columns(const Eigen::MatrixXcd& m, const char* what) {
  if (m.cols() < 1) throw InvalidInputError(std::string(what) + ": no columns");
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    if (m.col(c).norm() == 0.0)
      throw InvalidInputError(std::string(what) + ": zero column");
}

}  // namespace

double mutual_coherence(const Eigen::MatrixXcd& columns) {
  if (columns.cols() < 2)
    throw InvalidInputError("mutual_coherence: need at least two columns");
  check_columns(columns, "mutual_coherence");
  Eigen::VectorXd norms(columns.cols());
  for (Eigen::Index c = 0; c < columns.cols(); ++c) norms(c) = columns.col(c).norm();
  double best = 0.0;
  for (Eigen::Index c = 0; c < columns.cols(); ++c) {
    const Eigen::VectorXcd g = columns.adjoint() * columns.col(c);
    for (Eigen::Index r = 0; r < c; ++r)
      best = std::max(best, std::abs(g(r)) / (norms(r) * norms(c)));
  }
  return best;
}

double mutual_coherence_cross(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  if (a.rows() != b.rows())
    throw InvalidInputError("mutual_coherence_cross: row mismatch");
  check_columns(a, "mutual_coherence_cross");
  check_columns(b, "mutual_coherence_cross");
  double best = 0.0;
  for (Eigen::Index c = 0; c < b.cols(); ++c) {
    const Eigen::VectorXcd g = a.adjoint() * b.col(c);
    const double nb = b.col(c).norm();
    for (Eigen::Index r = 0; r < a.cols(); ++r)
      best = std::max(best, std::abs(g(r)) / (a.col(r).norm() * nb));
  }
  return best;
}

double fourier_frame_coherence_bound(int N, int M) {
  if (M < 2 || N < 1 || M < N)
    throw InvalidInputError("fourier_frame_coherence_bound: need M >= max(N, 2)");
  const cdouble num = 1.0 - std::polar(1.0, 2.0 * kPi * N / M);
  const cdouble den = 1.0 - std::polar(1.0, 2.0 * kPi / M);
  return std::abs(num) / (static_cast<double>(N) * std::abs(den));
}

double fourier_frame_coherence_limit(double redundancy) {
  if (!(redundancy > 1.0))
    throw InvalidInputError("fourier_frame_coherence_limit: redundancy must exceed 1");
  return redundancy * std::sqrt(1.0 - std::cos(2.0 * kPi / redundancy)) /
         (std::sqrt(2.0) * kPi);
}

}  // namespace prosparse
