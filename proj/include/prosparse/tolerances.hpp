#pragma once

namespace prosparse {

// All numeric thresholds used by the recovery pipeline, in one place so the
// CLI can override them uniformly.
struct ToleranceConfig {
  // A coefficient with magnitude at or below this is treated as zero.
  double zero_threshold = 1e-12;
  // Roots of the annihilating polynomial closer than this are merged.
  double root_merge = 1e-8;
  // Maximum distance between a recovered node and its nearest dictionary
  // node for the estimate to be kept.
  double node_snap = 1e-6;
  // Residual entries above residual_sparsity * max|y| count as spikes.
  double residual_sparsity = 1e-8;
  // A candidate is a solution when ||synth(candidate) - y||_2 <= fit * ||y||_2.
  double fit = 1e-6;
};

}  // namespace prosparse
