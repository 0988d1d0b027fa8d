#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "prosparse/dictionary.hpp"
#include "prosparse/prony.hpp"
#include "prosparse/tolerances.hpp"

namespace prosparse {

struct RecoverOptions {
  // Accept only (P, K) pairs inside the worst-case guarantee region; the
  // default accepts any sparsity and ranks by total sparsity afterwards.
  bool strict = false;
  // Stop the sweep once a solution provably unique by the worst-case bound
  // has been found. Off = exhaustive sweep.
  bool early_exit = true;
  // Square unitary Fourier + identity only: additionally run the sweep on
  // the conjugated spectrum, where spikes and Fourier atoms swap roles.
  bool dual_pass = false;
  // Highest exponential order swept; -1 means every P < N/2.
  int max_order = -1;
  // Residual sparsity cap K_max; -1 means N.
  long k_max = -1;
  // Hard cap on window evaluations; exceeding it returns partial results.
  std::uint64_t window_budget = UINT64_MAX;
  // Worker threads for the window sweep. Results are merged in window order,
  // so the output does not depend on this.
  int jobs = 1;
  ToleranceConfig tol;
};

struct Solution {
  SparseSignal signal;
  double fit_residual = 0.0;  // ||synthesize(signal) - y|| / ||y||
  int order = 0;              // sweep level P that produced the window
  int window_start = 0;
  bool via_dual = false;
};

enum class RecoveryStatus { recovered, no_solution };

struct RecoveryResult {
  // Deduplicated, ranked by total sparsity P + K, ties by (P, window).
  std::vector<Solution> solutions;
  std::uint64_t windows_tested = 0;
  RecoveryStatus status = RecoveryStatus::no_solution;
  bool budget_exhausted = false;

  // First solution matching the given signal (supports equal, coefficients
  // within rel_tol), if any.
  const Solution* find(const SparseSignal& planted, double rel_tol = 1e-6) const;
};

// Candidate filter. Default mode accepts everything (ranking happens later);
// strict mode keeps only pairs satisfying the worst-case bound, evaluated
// with P raised to at least 1 so that the trivial dense residual at P = 0
// cannot slip through.
bool acceptance_rule(int P, long K, const DictionaryConfig& config, bool strict);

// Extracts the local (Phi) component from a residual: thresholding for the
// identity, band elimination + thresholding otherwise. Absent when the
// thresholded coefficients fail to reproduce r within tol_abs, or when more
// than k_max entries survive.
std::optional<SparseSignal> residual_sparsify(const std::vector<cdouble>& r,
                                              const DictionaryConfig& config,
                                              double tol_abs, long k_max = -1);

// Sliding-window sweep: for every order P and window start, fit exponentials
// on the 2P samples clear of the band, map the recovered nodes onto
// dictionary atoms, and keep candidates whose residual is expressible as a
// sparse Phi combination. Candidate coefficients are re-fitted on the full
// signal before acceptance.
RecoveryResult recover(const std::vector<cdouble>& y, const DictionaryConfig& config,
                       const RecoverOptions& options = {});

}  // namespace prosparse
