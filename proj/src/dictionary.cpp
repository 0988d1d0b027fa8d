#include "prosparse/dictionary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "prosparse/errors.hpp"

namespace prosparse {

namespace {
constexpr double kPi = std::numbers::pi;
}

// ---------------------------------------------------------------------------
// BandedMatrix
// ---------------------------------------------------------------------------

BandedMatrix::BandedMatrix(int n, int bandwidth) : n_(n), b_(bandwidth) {
  if (n < 0 || bandwidth < 0)
    throw InvalidDimensionError("BandedMatrix: negative dimension or bandwidth");
  data_.assign(static_cast<std::size_t>(n) * (2 * bandwidth + 1), cdouble(0, 0));
}

BandedMatrix BandedMatrix::identity(int n) {
  BandedMatrix m(n, 0);
  for (int i = 0; i < n; ++i) m.data_[i] = cdouble(1, 0);
  return m;
}

BandedMatrix BandedMatrix::random(int n, int bandwidth, Rng& rng,
                                  double off_diag_scale) {
  BandedMatrix m(n, bandwidth);
  for (int row = 0; row < n; ++row) {
    for (int col = std::max(0, row - bandwidth);
         col <= std::min(n - 1, row + bandwidth); ++col) {
      if (col == row) {
        const double mag = 0.5 + uniform01(rng);
        const double phase = 2.0 * kPi * uniform01(rng);
        m.set(row, col, std::polar(mag, phase));
      } else {
        m.set(row, col, off_diag_scale * complex_normal(rng));
      }
    }
  }
  return m;
}

bool BandedMatrix::is_identity() const {
  if (b_ != 0) return false;
  for (int i = 0; i < n_; ++i)
    if (data_[i] != cdouble(1, 0)) return false;
  return true;
}

cdouble BandedMatrix::at(int row, int col) const {
  if (row < 0 || row >= n_ || col < 0 || col >= n_)
    throw InvalidInputError("BandedMatrix::at: index out of range");
  if (std::abs(col - row) > b_) return {0, 0};
  return data_[static_cast<std::size_t>(row) * (2 * b_ + 1) + (col - row + b_)];
}

void BandedMatrix::set(int row, int col, cdouble value) {
  if (row < 0 || row >= n_ || col < 0 || col >= n_ || std::abs(col - row) > b_)
    throw InvalidInputError("BandedMatrix::set: entry outside the band");
  data_[static_cast<std::size_t>(row) * (2 * b_ + 1) + (col - row + b_)] = value;
}

void BandedMatrix::add_column(int col, cdouble coeff, std::vector<cdouble>& y) const {
  for (int row = std::max(0, col - b_); row <= std::min(n_ - 1, col + b_); ++row)
    y[static_cast<std::size_t>(row)] +=
        coeff * data_[static_cast<std::size_t>(row) * (2 * b_ + 1) + (col - row + b_)];
}

std::vector<cdouble> BandedMatrix::multiply(const std::vector<cdouble>& x) const {
  if (static_cast<int>(x.size()) != n_)
    throw InvalidDimensionError("BandedMatrix::multiply: size mismatch");
  std::vector<cdouble> y(n_, cdouble(0, 0));
  for (int col = 0; col < n_; ++col)
    if (x[col] != cdouble(0, 0)) add_column(col, x[col], y);
  return y;
}

std::optional<std::vector<cdouble>> BandedMatrix::solve(
    const std::vector<cdouble>& rhs) const {
  if (static_cast<int>(rhs.size()) != n_)
    throw InvalidDimensionError("BandedMatrix::solve: size mismatch");
  if (n_ == 0) return std::vector<cdouble>{};

  // Working band with room for fill: subdiagonals b_, superdiagonals 2*b_.
  const int lo = b_, hi = 2 * b_;
  const int width = lo + hi + 1;
  std::vector<cdouble> w(static_cast<std::size_t>(n_) * width, cdouble(0, 0));
  auto entry = [&](int row, int col) -> cdouble& {
    return w[static_cast<std::size_t>(row) * width + (col - row + lo)];
  };
  double scale = 0.0;
  for (int row = 0; row < n_; ++row)
    for (int col = std::max(0, row - b_); col <= std::min(n_ - 1, row + b_); ++col) {
      const cdouble v =
          data_[static_cast<std::size_t>(row) * (2 * b_ + 1) + (col - row + b_)];
      entry(row, col) = v;
      scale = std::max(scale, std::abs(v));
    }
  if (scale == 0.0) return std::nullopt;

  std::vector<cdouble> y = rhs;
  const double tiny = 1e-14 * scale;

  for (int col = 0; col < n_; ++col) {
    const int last = std::min(n_ - 1, col + lo);
    int pivot = col;
    double best = std::abs(entry(col, col));
    for (int row = col + 1; row <= last; ++row) {
      const double mag = std::abs(entry(row, col));
      if (mag > best) {
        best = mag;
        pivot = row;
      }
    }
    if (best <= tiny) return std::nullopt;
    const int cend = std::min(n_ - 1, col + hi);
    if (pivot != col) {
      for (int c = col; c <= cend; ++c) std::swap(entry(col, c), entry(pivot, c));
      std::swap(y[col], y[pivot]);
    }
    for (int row = col + 1; row <= last; ++row) {
      const cdouble mult = entry(row, col) / entry(col, col);
      if (mult == cdouble(0, 0)) continue;
      for (int c = col + 1; c <= cend; ++c) entry(row, c) -= mult * entry(col, c);
      y[row] -= mult * y[col];
    }
  }

  for (int row = n_ - 1; row >= 0; --row) {
    cdouble acc = y[row];
    const int cend = std::min(n_ - 1, row + hi);
    for (int c = row + 1; c <= cend; ++c) acc -= entry(row, c) * y[c];
    y[row] = acc / entry(row, row);
  }
  return y;
}

Eigen::MatrixXcd BandedMatrix::dense() const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n_, n_);
  for (int row = 0; row < n_; ++row)
    for (int col = std::max(0, row - b_); col <= std::min(n_ - 1, row + b_); ++col)
      m(row, col) = at(row, col);
  return m;
}

// ---------------------------------------------------------------------------
// DictionaryConfig
// ---------------------------------------------------------------------------

void DictionaryConfig::validate() const {
  if (N < 1) throw InvalidDimensionError("config: N must be positive");
  if (M < N) throw InvalidDimensionError("config: M must be at least N");
  if (static_cast<int>(nodes.size()) != M)
    throw InvalidDimensionError("config: expected M nodes");
  if (phi.size() != N) throw InvalidDimensionError("config: Phi must be N x N");
  if (!(psi_scale > 0.0)) throw InvalidParameterError("config: psi_scale must be > 0");

  std::vector<cdouble> sorted = nodes;
  std::sort(sorted.begin(), sorted.end(), [](cdouble a, cdouble b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  for (int i = 1; i < M; ++i)
    if (sorted[i] == sorted[i - 1])
      throw InvalidParameterError("config: nodes must be pairwise distinct");

  if (circulant) {
    if (M != N)
      throw InvalidParameterError("config: circulant requires M == N");
    for (int m = 0; m < M; ++m) {
      const cdouble expected = std::polar(1.0, -2.0 * kPi * m / N);
      if (std::abs(nodes[m] - expected) > 1e-9)
        throw InvalidParameterError("config: circulant requires Fourier nodes");
    }
  }
  for (int n = 0; n < N; ++n)
    if (std::abs(phi.at(n, n)) == 0.0)
      throw InvalidParameterError("config: Phi diagonal must be nonzero");
}

DictionaryConfig make_vandermonde(int N, std::vector<cdouble> nodes, double psi_scale) {
  DictionaryConfig c;
  c.N = N;
  c.M = static_cast<int>(nodes.size());
  c.nodes = std::move(nodes);
  c.psi_scale = psi_scale;
  c.phi = BandedMatrix::identity(N);
  c.validate();
  return c;
}

DictionaryConfig build_fourier_frame(int N, int M) {
  if (N < 1 || M < N)
    throw InvalidDimensionError("build_fourier_frame: need M >= N >= 1");
  DictionaryConfig c;
  c.N = N;
  c.M = M;
  c.nodes.resize(M);
  for (int m = 0; m < M; ++m) c.nodes[m] = std::polar(1.0, -2.0 * kPi * m / M);
  c.psi_scale = 1.0 / std::sqrt(static_cast<double>(N));
  c.circulant = (M == N);
  c.fourier_nodes = true;
  c.phi = BandedMatrix::identity(N);
  c.validate();
  return c;
}

// ---------------------------------------------------------------------------
// Signals
// ---------------------------------------------------------------------------

namespace {

void sort_aligned(std::vector<int>& support, std::vector<cdouble>& coeffs) {
  const int n = static_cast<int>(support.size());
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return support[a] < support[b]; });
  std::vector<int> s(n);
  std::vector<cdouble> c(n);
  for (int i = 0; i < n; ++i) {
    s[i] = support[order[i]];
    c[i] = coeffs[order[i]];
  }
  support = std::move(s);
  coeffs = std::move(c);
}

void check_part(const std::vector<int>& support, const std::vector<cdouble>& coeffs,
                int bound, double zero_threshold, const char* what) {
  if (support.size() != coeffs.size())
    throw InvalidInputError(std::string("signal: ") + what +
                            " support/coefficient size mismatch");
  std::vector<int> sorted = support;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] < 0 || sorted[i] >= bound)
      throw InvalidSupportError(std::string("signal: ") + what +
                                " index out of range");
    if (i > 0 && sorted[i] == sorted[i - 1])
      throw InvalidSupportError(std::string("signal: duplicate ") + what + " index");
  }
  for (const cdouble& c : coeffs)
    if (std::abs(c) <= zero_threshold)
      throw InvalidInputError(std::string("signal: ") + what +
                              " coefficient below zero threshold");
}

}  // namespace

void SparseSignal::canonicalize() {
  sort_aligned(support1, coeffs1);
  sort_aligned(support2, coeffs2);
}

void validate_signal(const DictionaryConfig& config, const SparseSignal& x,
                     double zero_threshold) {
  check_part(x.support1, x.coeffs1, config.M, zero_threshold, "atom");
  check_part(x.support2, x.coeffs2, config.N, zero_threshold, "spike");
}

std::vector<cdouble> synthesize(const DictionaryConfig& config, const SparseSignal& x) {
  check_part(x.support1, x.coeffs1, config.M, -1.0, "atom");
  check_part(x.support2, x.coeffs2, config.N, -1.0, "spike");

  std::vector<cdouble> y(config.N, cdouble(0, 0));
  for (int p = 0; p < x.P(); ++p) {
    const cdouble xi = config.nodes[x.support1[p]];
    const cdouble amp = x.coeffs1[p] * config.psi_scale;
    cdouble pw(1, 0);
    for (int n = 0; n < config.N; ++n) {
      y[n] += amp * pw;
      pw *= xi;
    }
  }
  for (int k = 0; k < x.K(); ++k)
    config.phi.add_column(x.support2[k], x.coeffs2[k], y);
  return y;
}

SparseSignal sample_signal(const DictionaryConfig& config, int P, int K,
                           std::uint64_t seed, const AmplitudeLaw& law) {
  if (P < 0 || P > config.M)
    throw InvalidSparsityError("sample_signal: P must be in [0, M]");
  if (K < 0 || K > config.N)
    throw InvalidSparsityError("sample_signal: K must be in [0, N]");

  Rng rng(seed);
  SparseSignal x;
  x.support1 = sample_without_replacement(config.M, P, rng);
  x.support2 = sample_without_replacement(config.N, K, rng);
  auto draw = [&] {
    cdouble c = law(rng);
    while (std::abs(c) <= 1e-12) c = law(rng);
    return c;
  };
  x.coeffs1.resize(P);
  for (int p = 0; p < P; ++p) x.coeffs1[p] = draw();
  x.coeffs2.resize(K);
  for (int k = 0; k < K; ++k) x.coeffs2[k] = draw();
  x.canonicalize();
  return x;
}

SparseSignal sample_signal(const DictionaryConfig& config, int P, int K,
                           std::uint64_t seed) {
  return sample_signal(config, P, K, seed,
                       [](Rng& rng) { return complex_normal(rng); });
}

std::pair<int, double> nearest_node(const DictionaryConfig& config, cdouble z) {
  if (config.fourier_nodes) {
    const double frac = -std::arg(z) * config.M / (2.0 * kPi);
    long base = std::lround(frac);
    int best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (long cand = base - 1; cand <= base + 1; ++cand) {
      long m = cand % config.M;
      if (m < 0) m += config.M;
      const double d = std::abs(z - config.nodes[static_cast<int>(m)]);
      if (d < best_dist) {
        best_dist = d;
        best = static_cast<int>(m);
      }
    }
    return {best, best_dist};
  }
  int best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int m = 0; m < config.M; ++m) {
    const double d = std::abs(z - config.nodes[m]);
    if (d < best_dist) {
      best_dist = d;
      best = m;
    }
  }
  return {best, best_dist};
}

Eigen::MatrixXcd psi_matrix(const DictionaryConfig& config) {
  Eigen::MatrixXcd m(config.N, config.M);
  for (int col = 0; col < config.M; ++col) {
    cdouble pw(1, 0);
    for (int row = 0; row < config.N; ++row) {
      m(row, col) = config.psi_scale * pw;
      pw *= config.nodes[col];
    }
  }
  return m;
}

}  // namespace prosparse
