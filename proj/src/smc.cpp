#include "tracemc/smc.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

#include "population.hpp"

namespace tracemc {

namespace detail {

void Population::launch(int count, std::uint64_t root_seed) {
  parts_.clear();
  parts_.resize(count);
  parallel_for(count, workers_, [&](int i) {
    parts_[i] = ParticleHandle::start(*model_, derive_seed(root_seed, i), opts_);
    parts_[i].run_to_barrier();
  });
}

void Population::advance_all() {
  parallel_for(size(), workers_, [&](int i) { parts_[i].run_to_barrier(); });
}

int Population::barrier_or_done() const {
  int barrier = kAllCompleted;
  bool any_running = false;
  bool any_completed = false;
  for (const ParticleHandle& p : parts_) {
    if (p.status() == ParticleStatus::completed) {
      any_completed = true;
      continue;
    }
    const int n = p.observes_passed();
    if (any_running && n != barrier) {
      throw ModelContractViolation(
          "model '" + model_->name + "' desynchronized: particles paused at " +
          std::to_string(barrier) + " and " + std::to_string(n) + " observes");
    }
    barrier = n;
    any_running = true;
  }
  if (any_running && any_completed) {
    throw ModelContractViolation(
        "model '" + model_->name +
        "' passes different numbers of observes on different paths");
  }
  return any_running ? barrier : kAllCompleted;
}

std::vector<double> Population::cum_logw() const {
  std::vector<double> out(parts_.size());
  for (std::size_t i = 0; i < parts_.size(); ++i) out[i] = parts_[i].cum_logw();
  return out;
}

void Population::resample_and_advance(const std::vector<int>& counts,
                                      RngStream& seeder,
                                      const ExternalParent& external) {
  if (counts.size() != parts_.size()) {
    throw std::invalid_argument("resample: one offspring count per particle");
  }
  const int barrier = barrier_or_done();
  if (barrier == kAllCompleted && size() > 0) {
    throw std::logic_error("resample on a completed population");
  }

  struct Task {
    bool in_place = false;
    int parent = -1;
    std::shared_ptr<const std::vector<ChoiceRecord>> owner;
    const ChoiceRecord* prefix = nullptr;
    std::size_t prefix_len = 0;
    int target_observes = 0;
    RngStream stream;
  };

  int total = external.count;
  for (int k : counts) total += k;
  std::vector<Task> tasks(total);

  // Serial planning: every seed draw and stream split happens here, in slot
  // order, so the parallel build below is schedule-independent.
  int slot = 0;
  for (int l = 0; l < size(); ++l) {
    const int k = counts[l];
    if (k == 0) {
      parts_[l].kill();
      continue;
    }
    const RngStream parent_stream = parts_[l].stream();
    std::shared_ptr<const std::vector<ChoiceRecord>> snap;
    if (k > 1) {
      snap = std::make_shared<const std::vector<ChoiceRecord>>(
          parts_[l].trace().choices);
    }
    for (int j = 0; j < k; ++j) {
      Task& t = tasks[slot++];
      t.stream = parent_stream.split(seeder.raw());
      t.target_observes = barrier;
      if (j == 0) {
        t.in_place = true;
        t.parent = l;
      } else {
        t.owner = snap;
        t.prefix = snap->data();
        t.prefix_len = snap->size();
      }
    }
  }
  if (external.count > 0) {
    const ExecutionTrace& ext = *external.trace;
    const std::size_t len = checkpoint_prefix_len(ext, barrier);
    for (int j = 0; j < external.count; ++j) {
      Task& t = tasks[slot++];
      t.stream = RngStream(seeder.raw());
      t.prefix = ext.choices.data();
      t.prefix_len = len;
      t.target_observes = barrier;
    }
  }

  std::vector<ParticleHandle> next(total);
  for (int s = 0; s < total; ++s) {
    if (tasks[s].in_place) {
      next[s] = std::move(parts_[tasks[s].parent]);
      next[s].rekey_stream(tasks[s].stream);
    }
  }
  parallel_for(total, workers_, [&](int s) {
    Task& t = tasks[s];
    if (!t.in_place) {
      next[s] = ParticleHandle::replay(
          *model_, std::span<const ChoiceRecord>(t.prefix, t.prefix_len),
          t.target_observes, t.stream, opts_);
    }
    next[s].set_cum_logw(0.0);
    next[s].run_to_barrier();
  });
  parts_ = std::move(next);
}

std::vector<ExecutionTrace> Population::take_traces() {
  std::vector<ExecutionTrace> out;
  out.reserve(parts_.size());
  for (ParticleHandle& p : parts_) out.push_back(p.take_trace());
  parts_.clear();
  return out;
}

}  // namespace detail

int max_hardware_workers() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void validate(const SmcConfig& cfg) {
  if (cfg.particles < 1) {
    throw std::invalid_argument("config: need at least one particle");
  }
  if (cfg.workers < 1) {
    throw std::invalid_argument("config: need at least one worker");
  }
  if (cfg.tau >= 0.0 && cfg.tau > cfg.particles) {
    throw std::invalid_argument(
        "config: tau must lie in [0, particles] (ESS never exceeds the "
        "population size)");
  }
}

double effective_tau(const SmcConfig& cfg) {
  if (cfg.tau >= 0.0) return cfg.tau;
  return std::max(1.0, cfg.particles / 2.0);
}

SweepResult run_sweep(const ModelProgram& model, const SmcConfig& cfg) {
  validate(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  const int L = cfg.particles;
  const double tau = effective_tau(cfg);
  RngStream resample_stream(derive_seed(cfg.root_seed, detail::kSaltResample));
  RngStream branch_seeder(derive_seed(cfg.root_seed, detail::kSaltBranch));

  detail::Population pop(model, {cfg.full_precision_predicts}, cfg.workers);
  pop.launch(L, cfg.root_seed);

  SweepResult out;
  bool segment_open = false;
  int barrier = pop.barrier_or_done();
  while (barrier != detail::kAllCompleted) {
    const std::vector<double> cum = pop.cum_logw();
    WeightVector wv;
    double lmw = 0.0;
    try {
      wv = normalize(cum);
      lmw = log_mean_weight(cum);
    } catch (const DegenerateSweepError& e) {
      throw DegenerateSweepError(std::string(e.what()) + " at observe " +
                                 std::to_string(barrier) + " of model '" +
                                 model.name + "'");
    }
    const double e = ess(wv);
    const bool do_resample = cfg.always_resample || e < tau;
    out.events.push_back({barrier, e, do_resample, lmw, -1});
    if (do_resample) {
      out.log_evidence += lmw;
      segment_open = false;
      const OffspringCounts counts =
          sample_offspring(wv, L, cfg.scheme, resample_stream);
      pop.resample_and_advance(counts.counts, branch_seeder);
    } else {
      segment_open = true;
      pop.advance_all();
    }
    barrier = pop.barrier_or_done();
  }

  const std::vector<double> final_cum = pop.cum_logw();
  if (segment_open) out.log_evidence += log_mean_weight(final_cum);
  out.final_norm_weights =
      final_cum.empty() ? std::vector<double>{} : normalize(final_cum).norm;
  out.traces = pop.take_traces();
  out.wallclock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return out;
}

double WeightedSamples::total_weight() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

double WeightedSamples::mean() const {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    num += weights[i] * values[i];
    den += weights[i];
  }
  return num / den;
}

double WeightedSamples::variance() const {
  const double m = mean();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - m;
    num += weights[i] * d * d;
    den += weights[i];
  }
  return num / den;
}

WeightedSamples posterior_estimate(std::span<const SweepResult> sweeps,
                                   const std::string& predict_name) {
  WeightedSamples out;
  for (const SweepResult& sweep : sweeps) {
    for (std::size_t l = 0; l < sweep.traces.size(); ++l) {
      for (const PredictRecord& rec : sweep.traces[l].predicts) {
        if (rec.name != predict_name) continue;
        out.values.push_back(std::strtod(rec.value.c_str(), nullptr));
        out.weights.push_back(sweep.final_norm_weights[l]);
      }
    }
  }
  if (out.values.empty()) {
    throw std::out_of_range("no trace carries a predict named '" +
                            predict_name + "'");
  }
  return out;
}

}  // namespace tracemc
