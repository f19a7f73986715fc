#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tracemc/model.hpp"
#include "tracemc/particle.hpp"
#include "tracemc/resampling.hpp"

namespace tracemc {

struct SmcConfig {
  int particles = 100;   // population size L
  double tau = -1.0;     // ESS resampling threshold; < 0 selects max(1, L/2)
  ResampleScheme scheme = ResampleScheme::systematic;
  std::uint64_t root_seed = 0;
  int workers = 1;       // 1 = serial reference execution
  bool always_resample = false;
  bool full_precision_predicts = false;
};

void validate(const SmcConfig& cfg);

// Threshold actually used: the explicit tau, or max(1, L/2) when unset.
double effective_tau(const SmcConfig& cfg);

// Per-observe diagnostics record.
struct StepEvent {
  int observe = 0;
  double ess = 0.0;
  bool resampled = false;
  // log of the mean unnormalized segment weight at this step (the evidence
  // contribution if a resampling event folds here).
  double log_mean_weight = 0.0;
  // Offspring granted to the retained trajectory (conditional sweeps only).
  int retained_offspring = -1;
};

struct SweepResult {
  std::vector<ExecutionTrace> traces;
  std::vector<double> final_norm_weights;  // sums to 1
  double log_evidence = 0.0;
  std::vector<StepEvent> events;
  double wallclock_seconds = 0.0;
};

// One sweep of L particles through the model: advance all particles observe
// by observe, resampling whenever ESS drops strictly below tau (or at every
// observe with always_resample). Particle advancement fans out over
// cfg.workers threads; all weight handling and resampling is serial and in
// slot order, so results are identical for any worker count.
SweepResult run_sweep(const ModelProgram& model, const SmcConfig& cfg);

// Weighted predict samples pooled across sweeps: each sweep contributes its
// L traces with that sweep's final normalized weights (total weight 1 per
// sweep). Values are parsed back from the rendered predict text so they
// match what any CSV consumer sees. Throws std::out_of_range when no trace
// in any sweep carries the predict name.
struct WeightedSamples {
  std::vector<double> values;
  std::vector<double> weights;

  double total_weight() const;
  double mean() const;
  double variance() const;
};

WeightedSamples posterior_estimate(std::span<const SweepResult> sweeps,
                                   const std::string& predict_name);

// One emitted chain iteration (shared by the chain engines; plain repeated
// SMC fills the acceptance fields with their trivial values).
struct ChainIteration {
  int iteration = 0;  // 1-based
  bool accepted = true;
  double acceptance_rate = 1.0;
  double log_evidence = 0.0;
  const SweepResult* block = nullptr;
};

using ChainSink = std::function<void(const ChainIteration&)>;

}  // namespace tracemc
