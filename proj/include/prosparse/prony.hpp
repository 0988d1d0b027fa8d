#pragma once

#include <complex>
#include <span>
#include <vector>

#include "prosparse/tolerances.hpp"

namespace prosparse {

using cdouble = std::complex<double>;

// Parameters of a sum of exponentials fitted to one window of samples.
// Amplitudes are reported in absolute indexing: the model value at global
// index n is sum_p amplitudes[p] * nodes[p]^n.
struct PronyEstimate {
  int order = 0;  // effective number of exponentials kept
  std::vector<cdouble> nodes;
  std::vector<cdouble> amplitudes;
  std::vector<cdouble> filter;  // annihilating filter, length requested P + 1
  double residual_norm = 0.0;   // fit error on the input window
  // Set when the solve was numerically degenerate: zero window, rank
  // collapse (fewer exponentials than requested), merged roots, or dropped
  // near-zero amplitudes.
  bool condition_flag = false;
};

// Fits up to P exponentials to a window of exactly 2P samples, where
// window[i] is the measurement at global index start_index + i.
//
// The annihilating filter is the null vector of the P x (P+1) convolution
// system (smallest right singular vector), its polynomial roots come from
// the companion-matrix eigenvalues, and amplitudes follow by least squares
// against the Vandermonde of recovered nodes.
PronyEstimate prony_solve(std::span<const cdouble> window, int P,
                          long start_index = 0,
                          const ToleranceConfig& tol = {});

// Evaluates the model at n = n_begin, ..., n_end - 1.
std::vector<cdouble> evaluate_model(const PronyEstimate& est, long n_begin, long n_end);

}  // namespace prosparse
