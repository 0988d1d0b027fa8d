#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "prosparse/rng.hpp"

namespace prosparse {

using cdouble = std::complex<double>;

// N x N matrix with A[n][m] = 0 whenever |m - n| > bandwidth, stored as
// 2*bandwidth + 1 diagonals. bandwidth 0 is a diagonal matrix.
class BandedMatrix {
public:
  BandedMatrix() = default;
  BandedMatrix(int n, int bandwidth);

  static BandedMatrix identity(int n);
  // Entries within the band drawn from off_diag_scale * CN(0,1); diagonal
  // entries have magnitude in [0.5, 1.5] and uniform phase so the matrix
  // stays comfortably invertible.
  static BandedMatrix random(int n, int bandwidth, Rng& rng,
                             double off_diag_scale = 0.5);

  int size() const { return n_; }
  int bandwidth() const { return b_; }
  bool is_identity() const;

  cdouble at(int row, int col) const;
  void set(int row, int col, cdouble value);

  // y += coeff * column(col)
  void add_column(int col, cdouble coeff, std::vector<cdouble>& y) const;

  std::vector<cdouble> multiply(const std::vector<cdouble>& x) const;

  // Band Gaussian elimination with partial pivoting (fill-in kept inside an
  // extra `bandwidth` superdiagonals). Empty result when the matrix is
  // numerically singular.
  std::optional<std::vector<cdouble>> solve(const std::vector<cdouble>& rhs) const;

  Eigen::MatrixXcd dense() const;

  // raw diagonals, row-major: entry (row, col) at row * (2b+1) + (col - row + b)
  const std::vector<cdouble>& storage() const { return data_; }
  std::vector<cdouble>& storage() { return data_; }

private:
  int n_ = 0;
  int b_ = 0;
  std::vector<cdouble> data_;
};

// The dictionary [Psi, Phi]: Psi is N x M Vandermonde with distinct nodes
// (scaled by psi_scale), Phi is N x N banded with nonzero diagonal.
struct DictionaryConfig {
  int N = 0;
  int M = 0;
  std::vector<cdouble> nodes;  // M distinct values xi_m
  double psi_scale = 1.0;
  bool circulant = false;      // square Fourier case; windows wrap around
  bool fourier_nodes = false;  // nodes are exp(-2*pi*i*m / M)
  BandedMatrix phi;

  int bandwidth() const { return phi.bandwidth(); }
  // Throws on any violated invariant (distinct nodes, band shape, nonzero
  // diagonal, circulant consistency).
  void validate() const;
};

// Generic Vandermonde + identity Phi.
DictionaryConfig make_vandermonde(int N, std::vector<cdouble> nodes,
                                  double psi_scale = 1.0);

// Fourier frame: nodes exp(-2*pi*i*m / M), synthesis scaled by 1/sqrt(N),
// circulant exactly when M == N. Requires M >= N >= 1.
DictionaryConfig build_fourier_frame(int N, int M);

struct SparseSignal {
  std::vector<int> support1;      // Vandermonde atoms, indices in [0, M)
  std::vector<cdouble> coeffs1;
  std::vector<int> support2;      // local atoms, indices in [0, N)
  std::vector<cdouble> coeffs2;

  int P() const { return static_cast<int>(support1.size()); }
  int K() const { return static_cast<int>(support2.size()); }
  // Sorts both supports (coefficients stay aligned).
  void canonicalize();
};

// Bounds, duplicates and nonzero-coefficient checks; throws on violation.
void validate_signal(const DictionaryConfig& config, const SparseSignal& x,
                     double zero_threshold = 1e-12);

// y[n] = psi_scale * sum_p a_p xi^n + sum_k b_k Phi[n, n_k]
std::vector<cdouble> synthesize(const DictionaryConfig& config, const SparseSignal& x);

using AmplitudeLaw = std::function<cdouble(Rng&)>;

// Both supports drawn uniformly without replacement and independently of
// each other; amplitudes from `law` (redrawn if below the zero threshold).
SparseSignal sample_signal(const DictionaryConfig& config, int P, int K,
                           std::uint64_t seed, const AmplitudeLaw& law);
SparseSignal sample_signal(const DictionaryConfig& config, int P, int K,
                           std::uint64_t seed);  // complex standard normal

// Index of the dictionary node nearest to z and its distance. O(1) for
// Fourier nodes, linear scan otherwise.
std::pair<int, double> nearest_node(const DictionaryConfig& config, cdouble z);

// Dense N x M Vandermonde block including psi_scale (tests, coherence).
Eigen::MatrixXcd psi_matrix(const DictionaryConfig& config);

}  // namespace prosparse
