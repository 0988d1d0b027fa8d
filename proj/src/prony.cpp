#include "prosparse/prony.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "prosparse/errors.hpp"

namespace prosparse {

namespace {

// xi^n for possibly large |n|, via the complex logarithm. xi = 0 yields the
// Kronecker-delta convention 0^0 = 1.
cdouble integer_power(cdouble xi, long n) {
  if (n == 0) return {1, 0};
  if (xi == cdouble(0, 0)) return {0, 0};
  return std::exp(static_cast<double>(n) * std::log(xi));
}

}  // namespace

PronyEstimate prony_solve(std::span<const cdouble> window, int P, long start_index,
                          const ToleranceConfig& tol) {
  if (P < 1) throw InvalidWindowError("prony_solve: P must be >= 1");
  if (static_cast<int>(window.size()) != 2 * P)
    throw InvalidWindowError("prony_solve: window must hold exactly 2P samples");

  PronyEstimate est;
  double winf = 0.0;
  for (const cdouble& v : window) winf = std::max(winf, std::abs(v));
  if (winf == 0.0) {
    // zero window: any filter annihilates it, no unique node
    est.condition_flag = true;
    est.filter.assign(P + 1, cdouble(0, 0));
    return est;
  }

  // Annihilating filter h: sum_i h_i * w[k - i] = 0 for k = P .. 2P-1.
  Eigen::MatrixXcd T(P, P + 1);
  for (int r = 0; r < P; ++r)
    for (int i = 0; i <= P; ++i) T(r, i) = window[P + r - i];
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(T, Eigen::ComputeFullV);
  const Eigen::VectorXcd h = svd.matrixV().col(P);
  est.filter.assign(h.data(), h.data() + P + 1);

  double hmax = 0.0;
  for (int i = 0; i <= P; ++i) hmax = std::max(hmax, std::abs(h(i)));

  // The filter polynomial is h_0 z^P + ... + h_P. Near-zero leading
  // coefficients lower the true degree; near-zero trailing ones are roots at
  // the origin. Both indicate fewer than P exponentials.
  const double coeff_tiny = 1e-12 * hmax;
  int first = 0, last = P;
  while (first < last && std::abs(h(first)) <= coeff_tiny) ++first;
  while (last > first && std::abs(h(last)) <= coeff_tiny) --last;
  const int degree = last - first;
  if (first != 0 || last != P) est.condition_flag = true;

  std::vector<cdouble> roots;
  if (degree >= 1) {
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(degree, degree);
    for (int i = 1; i < degree; ++i) companion(i, i - 1) = cdouble(1, 0);
    for (int i = 0; i < degree; ++i)
      companion(i, degree - 1) = -h(first + degree - i) / h(first);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(companion, false);
    roots.assign(eig.eigenvalues().data(), eig.eigenvalues().data() + degree);
  } else {
    est.condition_flag = true;
  }

  // Merge clustered roots; keep the first representative of each cluster.
  std::vector<cdouble> kept;
  for (const cdouble& r : roots) {
    bool merged = false;
    for (const cdouble& k : kept)
      if (std::abs(r - k) < tol.root_merge) {
        merged = true;
        break;
      }
    if (merged)
      est.condition_flag = true;
    else
      kept.push_back(r);
  }
  // A root at the origin cannot carry an amplitude at start_index > 0.
  if (start_index != 0) {
    const auto it = std::remove_if(kept.begin(), kept.end(), [&](cdouble r) {
      return std::abs(r) <= tol.zero_threshold;
    });
    if (it != kept.end()) {
      kept.erase(it, kept.end());
      est.condition_flag = true;
    }
  }

  Eigen::VectorXcd w(2 * P);
  for (int i = 0; i < 2 * P; ++i) w(i) = window[i];

  auto fit = [&](const std::vector<cdouble>& nodes) -> Eigen::VectorXcd {
    Eigen::MatrixXcd V(2 * P, nodes.size());
    for (std::size_t p = 0; p < nodes.size(); ++p) {
      cdouble pw(1, 0);
      for (int i = 0; i < 2 * P; ++i) {
        V(i, static_cast<int>(p)) = pw;
        pw *= nodes[p];
      }
    }
    return V.colPivHouseholderQr().solve(w);
  };

  std::vector<cdouble> active = kept;
  Eigen::VectorXcd coeffs;
  if (!active.empty()) {
    coeffs = fit(active);
    // drop components that carry no energy, then refit the survivors
    std::vector<cdouble> survivors;
    for (std::size_t p = 0; p < active.size(); ++p)
      if (std::abs(coeffs(static_cast<int>(p))) > tol.zero_threshold * winf)
        survivors.push_back(active[p]);
    if (survivors.size() != active.size()) {
      est.condition_flag = true;
      active = std::move(survivors);
      if (!active.empty()) coeffs = fit(active);
    }
  }

  est.order = static_cast<int>(active.size());
  est.nodes = active;
  est.amplitudes.resize(est.order);
  for (int p = 0; p < est.order; ++p) {
    const cdouble c = coeffs(p);
    est.amplitudes[p] =
        (start_index == 0) ? c : c * integer_power(active[p], -start_index);
    if (!std::isfinite(est.amplitudes[p].real()) ||
        !std::isfinite(est.amplitudes[p].imag()))
      est.condition_flag = true;
  }
  if (est.order < P) est.condition_flag = true;

  if (est.order == 0) {
    est.residual_norm = w.norm();
  } else {
    Eigen::MatrixXcd V(2 * P, est.order);
    for (int p = 0; p < est.order; ++p) {
      cdouble pw(1, 0);
      for (int i = 0; i < 2 * P; ++i) {
        V(i, p) = pw;
        pw *= est.nodes[p];
      }
    }
    est.residual_norm = (V * coeffs - w).norm();
  }
  return est;
}

std::vector<cdouble> evaluate_model(const PronyEstimate& est, long n_begin, long n_end) {
  if (n_end < n_begin)
    throw InvalidInputError("evaluate_model: empty or reversed range");
  const long len = n_end - n_begin;
  std::vector<cdouble> out(static_cast<std::size_t>(len), cdouble(0, 0));
  for (int p = 0; p < est.order; ++p) {
    const cdouble xi = est.nodes[p];
    const cdouble a = est.amplitudes[p];
    const bool on_circle = std::abs(std::abs(xi) - 1.0) <= 1e-12;
    cdouble pw = integer_power(xi, n_begin);
    for (long i = 0; i < len; ++i) {
      out[static_cast<std::size_t>(i)] += a * pw;
      pw *= xi;
      // keep unit-circle powers from drifting off the circle
      if (on_circle && (i & 511) == 511) pw /= std::abs(pw);
    }
  }
  return out;
}

}  // namespace prosparse
