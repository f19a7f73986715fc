#pragma once

#include <cstdint>

#include "tracemc/smc.hpp"

namespace tracemc {

// Chain state for sweep-level independent Metropolis-Hastings: whole sweeps
// are proposals, scored by their evidence estimates.
struct PimhState {
  SweepResult current;
  double log_evidence = 0.0;
  int iteration = 0;     // sweeps proposed so far, including the initializer
  int accept_count = 0;  // <= iteration; the initializer always counts
};

// min(1, Z'/Z) acceptance test in log space against a uniform draw u in (0,1).
bool pimh_accept(double proposed_log_z, double current_log_z, double u);

// One transition: run an independent sweep rooted at sweep_seed and accept or
// reject it. The first call initializes the chain (always accepted). The
// accept_stream supplies only the accept draw, so sweep randomness and chain
// randomness never interleave. Returns whether the proposal was accepted.
bool pimh_step(PimhState& state, const ModelProgram& model,
               const SmcConfig& cfg, std::uint64_t sweep_seed,
               RngStream& accept_stream);

// M-iteration chain. Iteration m proposes a sweep rooted at
// derive_seed(cfg.root_seed, m); rejected iterations re-emit the previous
// block unchanged. Returns the final acceptance rate accept_count/M.
double pimh_chain(const ModelProgram& model, const SmcConfig& cfg,
                  int iterations, const ChainSink& sink);

}  // namespace tracemc
