#include "tracemc/pg.hpp"

#include <chrono>
#include <stdexcept>
#include <string>
#include <utility>

#include "population.hpp"

namespace tracemc {

PgInit pg_init(const ModelProgram& model, const SmcConfig& cfg) {
  SmcConfig init_cfg = cfg;
  init_cfg.always_resample = true;
  PgInit out;
  out.sweep = run_sweep(model, init_cfg);
  RngStream selection(derive_seed(cfg.root_seed, detail::kSaltSelect));
  const int idx =
      discrete_index(out.sweep.final_norm_weights, selection.uniform());
  out.retained.trace = out.sweep.traces[idx];
  return out;
}

SweepResult conditional_sweep(const ModelProgram& model, const SmcConfig& cfg,
                              const RetainedTrajectory& retained) {
  validate(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  const ExecutionTrace& ret = retained.trace;
  const int N = ret.observe_count;
  if (static_cast<int>(ret.observe_logw.size()) != N ||
      static_cast<int>(ret.choices_at_observe.size()) != N) {
    throw std::invalid_argument(
        "conditional_sweep: malformed retained trajectory");
  }
  if (model.declared_observes && *model.declared_observes != N) {
    throw ModelContractViolation(
        "conditional_sweep: retained trajectory has " + std::to_string(N) +
        " observes, model '" + model.name + "' declares " +
        std::to_string(*model.declared_observes));
  }
  const int L = cfg.particles;
  const int F = L - 1;  // fresh particles alongside the retained trajectory

  RngStream resample_stream(derive_seed(cfg.root_seed, detail::kSaltResample));
  RngStream branch_seeder(derive_seed(cfg.root_seed, detail::kSaltBranch));

  detail::Population pop(model, {cfg.full_precision_predicts}, cfg.workers);
  if (F > 0) pop.launch(F, cfg.root_seed);

  SweepResult out;
  for (int n = 1; n <= N; ++n) {
    if (F > 0) {
      const int b = pop.barrier_or_done();
      if (b != n) {
        throw ModelContractViolation(
            "conditional sweep desynchronized: free particles at " +
            (b == detail::kAllCompleted ? std::string("completion")
                                        : std::to_string(b)) +
            ", retained trajectory at observe " + std::to_string(n));
      }
    }
    // Weight vector over all L slots; the retained trajectory sits last and
    // contributes the increment it recorded for this observe.
    std::vector<double> w = pop.cum_logw();
    w.push_back(ret.observe_logw[n - 1]);
    WeightVector wv;
    double lmw = 0.0;
    try {
      wv = normalize(w);
      lmw = log_mean_weight(w);
    } catch (const DegenerateSweepError& e) {
      throw DegenerateSweepError(std::string(e.what()) + " at observe " +
                                 std::to_string(n) + " of model '" +
                                 model.name + "' (conditional sweep)");
    }
    // L-1 free slots are drawn from the full weight vector; the retained
    // trajectory's own continuation fills the Lth slot unconditionally.
    const OffspringCounts counts =
        sample_offspring(wv, F, cfg.scheme, resample_stream);
    const int retained_children = counts.counts[F];
    out.events.push_back({n, ess(wv), true, lmw, retained_children + 1});
    out.log_evidence += lmw;
    if (F > 0) {
      const std::vector<int> free_counts(counts.counts.begin(),
                                         counts.counts.end() - 1);
      pop.resample_and_advance(free_counts, branch_seeder,
                               {&ret, retained_children});
    }
  }
  if (F > 0 && pop.barrier_or_done() != detail::kAllCompleted) {
    throw ModelContractViolation(
        "conditional sweep: free particles passed more observes than the "
        "retained trajectory");
  }
  out.traces = F > 0 ? pop.take_traces() : std::vector<ExecutionTrace>{};
  out.traces.push_back(ret);
  out.final_norm_weights.assign(L, 1.0 / L);
  out.wallclock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return out;
}

void pg_chain(const ModelProgram& model, const SmcConfig& cfg, int iterations,
              const ChainSink& sink) {
  validate(cfg);
  if (iterations < 1) {
    throw std::invalid_argument("pg_chain: need at least one iteration");
  }
  RngStream selection(derive_seed(cfg.root_seed, detail::kSaltSelect));

  SmcConfig init_cfg = cfg;
  init_cfg.root_seed = derive_seed(cfg.root_seed, 1);
  init_cfg.always_resample = true;
  SweepResult sweep = run_sweep(model, init_cfg);
  RetainedTrajectory retained;
  retained.trace = sweep.traces[discrete_index(sweep.final_norm_weights,
                                               selection.uniform())];
  if (sink) sink({1, true, 1.0, sweep.log_evidence, &sweep});

  for (int m = 2; m <= iterations; ++m) {
    SmcConfig iter_cfg = cfg;
    iter_cfg.root_seed = derive_seed(cfg.root_seed, m);
    SweepResult sw = conditional_sweep(model, iter_cfg, retained);
    if (sink) sink({m, true, 1.0, sw.log_evidence, &sw});
    const int idx =
        discrete_index(sw.final_norm_weights, selection.uniform());
    retained.trace = std::move(sw.traces[idx]);
  }
}

}  // namespace tracemc
