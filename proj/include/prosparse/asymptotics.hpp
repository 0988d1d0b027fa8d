#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "prosparse/dictionary.hpp"

namespace prosparse {

// Critical threshold of the success phase transition for K = floor(alpha N^delta)
// spikes and P = floor(beta N^(1-delta) ln N) exponentials:
//   delta / (2 alpha)       for 0 < delta < 1
//   -1 / (2 ln(1 - alpha))  for delta = 1 (requires alpha < 1)
// Natural logarithm throughout.
double beta_critical(double alpha, double delta);

struct PhasePoint {
  double alpha = 0.0;
  double beta = 0.0;
  double delta = 1.0;
  long N = 0;
  long K = 0;  // floor(alpha * N^delta)
  long P = 0;  // floor(beta * N^(1-delta) * ln N)
  long trials = 0;
  long successes = 0;
  double beta_c = 0.0;
  // P = 0 or K = 0; counted with the conventions below rather than skipped.
  bool degenerate = false;
};

// Monte Carlo success rates on an (alpha, beta) grid. Success is the gap
// criterion of the circulant Fourier + identity setting: the circular max
// gap of a uniformly random K-subset is at least 2P. Conventions: P = 0
// always succeeds; K = 0 succeeds when 2P <= N. Each grid point uses an RNG
// stream derived from (seed, alpha index, beta index), so the output is
// independent of `jobs`.
std::vector<PhasePoint> phase_grid(double delta, const std::vector<double>& alphas,
                                   const std::vector<double>& betas, long N,
                                   long trials, std::uint64_t seed, int jobs = 1);

// Largest normalized inner-product magnitude over distinct column pairs.
double mutual_coherence(const Eigen::MatrixXcd& columns);
// Restricted to pairs with one column from each block.
double mutual_coherence_cross(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

// Lower bound on the coherence of the N x M Fourier frame:
// (1/N) |1 - e^(2 pi i N / M)| / |1 - e^(2 pi i / M)|.
double fourier_frame_coherence_bound(int N, int M);
// Its N -> infinity limit at fixed redundancy d = M/N:
// d sqrt(1 - cos(2 pi / d)) / (sqrt(2) pi).
double fourier_frame_coherence_limit(double redundancy);

}  // namespace prosparse
