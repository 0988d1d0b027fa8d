#include "prosparse/recover.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <thread>

#include "prosparse/errors.hpp"
#include "prosparse/probability.hpp"

namespace prosparse {

namespace {

double l2_norm(const std::vector<cdouble>& v) {
  double s = 0.0;
  for (const cdouble& x : v) s += std::norm(x);
  return std::sqrt(s);
}

double linf_norm(const std::vector<cdouble>& v) {
  double s = 0.0;
  for (const cdouble& x : v) s = std::max(s, std::abs(x));
  return s;
}

bool signals_match(const SparseSignal& a, const SparseSignal& b, double rel_tol) {
  if (a.support1 != b.support1 || a.support2 != b.support2) return false;
  double scale = 0.0;
  for (const cdouble& c : a.coeffs1) scale = std::max(scale, std::abs(c));
  for (const cdouble& c : a.coeffs2) scale = std::max(scale, std::abs(c));
  scale = std::max(scale, 1e-300);
  for (std::size_t i = 0; i < a.coeffs1.size(); ++i)
    if (std::abs(a.coeffs1[i] - b.coeffs1[i]) > rel_tol * scale) return false;
  for (std::size_t i = 0; i < a.coeffs2.size(); ++i)
    if (std::abs(a.coeffs2[i] - b.coeffs2[i]) > rel_tol * scale) return false;
  return true;
}

struct Candidate {
  SparseSignal signal;
  double fit = 0.0;
  int window_start = 0;
};

// Model coefficients live in the "combined" domain c_p = psi_scale * a_p so
// the window fit and the full-signal refit share one convention.
struct SweepContext {
  const std::vector<cdouble>& y;
  const DictionaryConfig& config;
  const RecoverOptions& options;
  double y_l2;
  double y_inf;
  double tol_abs;  // residual spike threshold
  long k_max;
};

// Joint least squares of all coefficients on the full signal given the two
// supports; drops atoms that carry no energy. Returns the relative fit.
std::optional<Candidate> polish(const SweepContext& ctx, std::vector<int> support1,
                                std::vector<int> support2, int window_start) {
  const auto& config = ctx.config;
  const int N = config.N;
  for (int pass = 0; pass < 4; ++pass) {
    const int q = static_cast<int>(support1.size());
    const int k = static_cast<int>(support2.size());
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(N, q + k);
    for (int j = 0; j < q; ++j) {
      const cdouble xi = config.nodes[support1[j]];
      cdouble pw(1, 0);
      for (int n = 0; n < N; ++n) {
        A(n, j) = config.psi_scale * pw;
        pw *= xi;
      }
    }
    for (int j = 0; j < k; ++j)
      for (int row = std::max(0, support2[j] - config.bandwidth());
           row <= std::min(N - 1, support2[j] + config.bandwidth()); ++row)
        A(row, q + j) = config.phi.at(row, support2[j]);

    Eigen::VectorXcd rhs(N);
    for (int n = 0; n < N; ++n) rhs(n) = ctx.y[n];
    Eigen::VectorXcd coef;
    if (q + k > 0)
      coef = A.colPivHouseholderQr().solve(rhs);
    else
      coef = Eigen::VectorXcd::Zero(0);

    const double drop = ctx.options.tol.zero_threshold * std::max(1.0, ctx.y_inf);
    std::vector<int> s1, s2;
    std::vector<cdouble> c1, c2;
    for (int j = 0; j < q; ++j)
      if (std::abs(coef(j)) > drop) {
        s1.push_back(support1[j]);
        c1.push_back(coef(j));
      }
    for (int j = 0; j < k; ++j)
      if (std::abs(coef(q + j)) > drop) {
        s2.push_back(support2[j]);
        c2.push_back(coef(q + j));
      }
    if (s1.size() == support1.size() && s2.size() == support2.size()) {
      const double resid = (q + k > 0) ? (A * coef - rhs).norm() : rhs.norm();
      const double rel = (ctx.y_l2 > 0.0) ? resid / ctx.y_l2 : resid;
      if (rel > ctx.options.tol.fit) return std::nullopt;
      Candidate cand;
      cand.signal.support1 = std::move(s1);
      cand.signal.coeffs1 = std::move(c1);
      cand.signal.support2 = std::move(s2);
      cand.signal.coeffs2 = std::move(c2);
      cand.signal.canonicalize();
      cand.fit = rel;
      cand.window_start = window_start;
      return cand;
    }
    // some coefficients vanished; refit on the reduced supports
    support1 = std::move(s1);
    support2 = std::move(s2);
  }
  return std::nullopt;
}

std::optional<Candidate> evaluate_window(const SweepContext& ctx, int P, int start) {
  const auto& config = ctx.config;
  const int N = config.N;
  const int b = config.bandwidth();
  const long s0 = start + b;  // first sample clear of the band

  std::optional<Candidate> none;
  if (P == 0) {
    auto spikes = residual_sparsify(ctx.y, config, ctx.tol_abs, ctx.k_max);
    if (!spikes) return none;
    if (!acceptance_rule(0, spikes->K(), config, ctx.options.strict)) return none;
    return polish(ctx, {}, spikes->support2, start);
  }

  std::vector<cdouble> window(2 * P);
  for (int i = 0; i < 2 * P; ++i) {
    const long idx = s0 + i;
    window[i] = ctx.y[config.circulant ? idx % N : idx];
  }
  PronyEstimate est = prony_solve(window, P, s0, ctx.options.tol);
  if (est.order == 0) return none;  // nothing to snap; order 0 is the P = 0 case

  // Map recovered nodes onto dictionary atoms.
  std::vector<int> support1;
  for (const cdouble& xi : est.nodes) {
    const auto [m, dist] = nearest_node(config, xi);
    if (dist > ctx.options.tol.node_snap) return none;
    support1.push_back(m);
  }
  std::sort(support1.begin(), support1.end());
  support1.erase(std::unique(support1.begin(), support1.end()), support1.end());
  const int q = static_cast<int>(support1.size());

  // Re-fit combined amplitudes on the window against the exact snapped nodes.
  Eigen::MatrixXcd V(2 * P, q);
  for (int j = 0; j < q; ++j) {
    const cdouble xi = config.nodes[support1[j]];
    cdouble pw = (s0 == 0) ? cdouble(1, 0)
                           : std::exp(static_cast<double>(s0) * std::log(xi));
    for (int i = 0; i < 2 * P; ++i) {
      V(i, j) = pw;
      pw *= xi;
    }
  }
  Eigen::VectorXcd w(2 * P);
  for (int i = 0; i < 2 * P; ++i) w(i) = window[i];
  const Eigen::VectorXcd c = V.colPivHouseholderQr().solve(w);
  const double wnorm = w.norm();
  if ((V * c - w).norm() > std::max(10.0 * ctx.options.tol.fit * wnorm,
                                    ctx.options.tol.zero_threshold))
    return none;

  // Full-length residual against the snapped model.
  std::vector<cdouble> r = ctx.y;
  for (int j = 0; j < q; ++j) {
    const cdouble xi = config.nodes[support1[j]];
    const cdouble amp = c(j);
    cdouble pw(1, 0);
    for (int n = 0; n < N; ++n) {
      r[n] -= amp * pw;
      pw *= xi;
    }
  }
  auto spikes = residual_sparsify(r, config, ctx.tol_abs, ctx.k_max);
  if (!spikes) return none;
  if (!acceptance_rule(q, spikes->K(), config, ctx.options.strict)) return none;
  return polish(ctx, std::move(support1), spikes->support2, start);
}

void run_level_parallel(const SweepContext& ctx, int P, int n_windows,
                        std::vector<std::optional<Candidate>>& results) {
  results.assign(n_windows, std::nullopt);
  const int jobs = std::max(1, ctx.options.jobs);
  if (jobs == 1 || n_windows < 2) {
    for (int l = 0; l < n_windows; ++l) results[l] = evaluate_window(ctx, P, l);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  for (int t = 0; t < jobs; ++t)
    pool.emplace_back([&] {
      for (;;) {
        const int l = next.fetch_add(1);
        if (l >= n_windows) break;
        results[l] = evaluate_window(ctx, P, l);
      }
    });
  for (auto& th : pool) th.join();
}

}  // namespace

const Solution* RecoveryResult::find(const SparseSignal& planted, double rel_tol) const {
  SparseSignal want = planted;
  want.canonicalize();
  for (const Solution& s : solutions)
    if (signals_match(s.signal, want, rel_tol)) return &s;
  return nullptr;
}

bool acceptance_rule(int P, long K, const DictionaryConfig& config, bool strict) {
  if (!strict) return true;
  const int tau = config.circulant ? 0 : 1;
  return deterministic_bound(std::max(P, 1), K, config.N, config.bandwidth(), tau);
}

std::optional<SparseSignal> residual_sparsify(const std::vector<cdouble>& r,
                                              const DictionaryConfig& config,
                                              double tol_abs, long k_max) {
  if (static_cast<int>(r.size()) != config.N)
    throw InvalidInputError("residual_sparsify: residual length mismatch");
  if (k_max < 0) k_max = config.N;

  std::vector<double> mag;
  std::vector<cdouble> x2;
  if (config.phi.is_identity()) {
    x2 = r;
  } else {
    auto solved = config.phi.solve(r);
    if (!solved) return std::nullopt;
    x2 = std::move(*solved);
  }

  SparseSignal out;
  for (int n = 0; n < config.N; ++n)
    if (std::abs(x2[n]) > tol_abs) {
      out.support2.push_back(n);
      out.coeffs2.push_back(x2[n]);
      if (static_cast<long>(out.support2.size()) > k_max) return std::nullopt;
    }

  if (!config.phi.is_identity()) {
    // confirm the thresholded coefficients still explain the residual
    std::vector<cdouble> back(config.N, cdouble(0, 0));
    for (std::size_t i = 0; i < out.support2.size(); ++i)
      config.phi.add_column(out.support2[i], out.coeffs2[i], back);
    for (int n = 0; n < config.N; ++n)
      if (std::abs(back[n] - r[n]) > std::max(tol_abs, 1e-9 * linf_norm(r)))
        return std::nullopt;
  }
  return out;
}

namespace {

RecoveryResult sweep(const std::vector<cdouble>& y, const DictionaryConfig& config,
                     const RecoverOptions& options) {
  const int N = config.N;
  const int b = config.bandwidth();

  SweepContext ctx{y,
                   config,
                   options,
                   l2_norm(y),
                   linf_norm(y),
                   options.tol.residual_sparsity * linf_norm(y),
                   options.k_max >= 0 ? options.k_max : N};

  RecoveryResult result;
  int max_order = (N - 2 * b) / 2;                        // window must fit
  max_order = std::min(max_order, (N + 1) / 2 - 1);       // every P < N/2
  if (options.max_order >= 0) max_order = std::min(max_order, options.max_order);

  const int tau = config.circulant ? 0 : 1;
  bool done = false;
  for (int P = 0; P <= max_order && !done; ++P) {
    const int n_windows =
        (P == 0) ? 1 : (config.circulant ? N : N - 2 * P - 2 * b + 1);
    if (n_windows <= 0) continue;
    if (result.windows_tested + static_cast<std::uint64_t>(n_windows) >
        options.window_budget) {
      result.budget_exhausted = true;
      break;
    }
    result.windows_tested += static_cast<std::uint64_t>(n_windows);

    std::vector<std::optional<Candidate>> level;
    run_level_parallel(ctx, P, n_windows, level);

    for (int l = 0; l < n_windows && !done; ++l) {
      if (!level[l]) continue;
      Candidate& cand = *level[l];
      bool duplicate = false;
      for (const Solution& s : result.solutions)
        if (signals_match(s.signal, cand.signal, options.tol.fit)) {
          duplicate = true;
          break;
        }
      if (duplicate) continue;
      Solution sol;
      sol.signal = std::move(cand.signal);
      sol.fit_residual = cand.fit;
      sol.order = P;
      sol.window_start = cand.window_start;
      result.solutions.push_back(std::move(sol));
      const Solution& added = result.solutions.back();
      if (options.early_exit &&
          deterministic_bound(std::max(added.signal.P(), 1), added.signal.K(), N, b,
                              tau))
        done = true;
    }
  }
  return result;
}

}  // namespace

RecoveryResult recover(const std::vector<cdouble>& y, const DictionaryConfig& config,
                       const RecoverOptions& options) {
  config.validate();
  if (static_cast<int>(y.size()) != config.N)
    throw InvalidInputError("recover: measurement length must equal N");

  RecoveryResult result = sweep(y, config, options);

  if (options.dual_pass) {
    if (!config.circulant || !config.phi.is_identity() ||
        std::abs(config.psi_scale - 1.0 / std::sqrt(static_cast<double>(config.N))) >
            1e-12)
      throw InvalidParameterError(
          "recover: dual pass needs the square unitary Fourier + identity dictionary");
    const int N = config.N;
    // z = F * conj(y): same dictionary, spikes and atoms exchanged
    std::vector<cdouble> z(N, cdouble(0, 0));
    const Eigen::MatrixXcd F = psi_matrix(config);
    for (int n = 0; n < N; ++n) {
      cdouble acc(0, 0);
      for (int m = 0; m < N; ++m) acc += F(n, m) * std::conj(y[m]);
      z[n] = acc;
    }
    RecoverOptions dual_options = options;
    dual_options.dual_pass = false;
    RecoveryResult dual = sweep(z, config, dual_options);
    result.windows_tested += dual.windows_tested;
    result.budget_exhausted = result.budget_exhausted || dual.budget_exhausted;

    for (Solution& ds : dual.solutions) {
      Solution sol;
      sol.signal.support1 = ds.signal.support2;
      sol.signal.support2 = ds.signal.support1;
      sol.signal.coeffs1.reserve(ds.signal.coeffs2.size());
      for (const cdouble& c : ds.signal.coeffs2) sol.signal.coeffs1.push_back(std::conj(c));
      sol.signal.coeffs2.reserve(ds.signal.coeffs1.size());
      for (const cdouble& c : ds.signal.coeffs1) sol.signal.coeffs2.push_back(std::conj(c));
      sol.signal.canonicalize();

      const std::vector<cdouble> synth = synthesize(config, sol.signal);
      double err = 0.0;
      for (int n = 0; n < N; ++n) err += std::norm(synth[n] - y[n]);
      const double y_l2 = l2_norm(y);
      const double rel = (y_l2 > 0) ? std::sqrt(err) / y_l2 : std::sqrt(err);
      if (rel > options.tol.fit) continue;
      sol.fit_residual = rel;
      sol.order = ds.order;
      sol.window_start = ds.window_start;
      sol.via_dual = true;

      bool duplicate = false;
      for (const Solution& s : result.solutions)
        if (signals_match(s.signal, sol.signal, options.tol.fit)) {
          duplicate = true;
          break;
        }
      if (!duplicate) result.solutions.push_back(std::move(sol));
    }
  }

  std::stable_sort(result.solutions.begin(), result.solutions.end(),
                   [](const Solution& a, const Solution& b) {
                     const int ta = a.signal.P() + a.signal.K();
                     const int tb = b.signal.P() + b.signal.K();
                     if (ta != tb) return ta < tb;
                     if (a.signal.P() != b.signal.P()) return a.signal.P() < b.signal.P();
                     if (a.via_dual != b.via_dual) return !a.via_dual;
                     return a.window_start < b.window_start;
                   });
  result.status = result.solutions.empty() ? RecoveryStatus::no_solution
                                           : RecoveryStatus::recovered;
  return result;
}

}  // namespace prosparse
