#pragma once

#include "tracemc/smc.hpp"

namespace tracemc {

// The trajectory a conditional sweep is built around. Its per-observe
// checkpoints (choice-prefix lengths) live inside the trace itself.
struct RetainedTrajectory {
  ExecutionTrace trace;
};

struct PgInit {
  RetainedTrajectory retained;
  SweepResult sweep;
};

// Initialize the chain: one ordinary sweep with resampling forced at every
// observe, then select the retained trajectory from its final weights.
PgInit pg_init(const ModelProgram& model, const SmcConfig& cfg);

// Conditional sweep: L-1 fresh particles plus the retained trajectory, which
// contributes its recorded per-observe increments to every weight vector and
// is guaranteed at least one offspring at every resampling event (the other
// L-1 slots are drawn from the full L-entry weight vector). Resampling is
// forced at every observe; cfg.tau plays no role here. The retained
// trajectory occupies the last slot of the result, and final weights are
// uniform. With L == 1 the sweep deterministically reproduces the retained
// trajectory.
SweepResult conditional_sweep(const ModelProgram& model, const SmcConfig& cfg,
                              const RetainedTrajectory& retained);

// M-iteration chain: initialize, then alternate conditional sweeps with
// retained-trajectory selection from each sweep's final weights. Iteration
// m's sweep is rooted at derive_seed(cfg.root_seed, m).
void pg_chain(const ModelProgram& model, const SmcConfig& cfg, int iterations,
              const ChainSink& sink);

}  // namespace tracemc
