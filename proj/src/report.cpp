#include "tracemc/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <stdexcept>

#include "tracemc/models.hpp"
#include "tracemc/parallel.hpp"
#include "tracemc/pg.hpp"
#include "tracemc/pimh.hpp"

namespace tracemc {

std::string emit_predict_line(const PredictRecord& rec) {
  return rec.name + "," + rec.value;
}

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string format_f6(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::string format_g9(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

std::ofstream open_csv(const std::filesystem::path& path, const char* header) {
  std::ofstream file(path);
  if (!file) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  file << header << '\n';
  return file;
}

}  // namespace

RunWriter::RunWriter(const std::string& out_dir,
                     const oracle::ExactPosterior* exact)
    : start_(std::chrono::steady_clock::now()) {
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  samples_ = open_csv(dir / "samples.csv",
                      "iteration,particle,predict_name,value,weight");
  diagnostics_ = open_csv(dir / "diagnostics.csv",
                          "iteration,wallclock_seconds,log_evidence,accepted,"
                          "acceptance_rate,ess_trace,resampled_trace");
  if (exact) {
    eval_.emplace(*exact);
    kl_ = open_csv(dir / "kl_curve.csv",
                   "cumulative_samples,wallclock_seconds,kl,kl_sum");
  }
}

void RunWriter::write_iteration(const ChainIteration& iter) {
  const SweepResult& block = *iter.block;
  for (std::size_t l = 0; l < block.traces.size(); ++l) {
    const std::string weight = format_g17(block.final_norm_weights[l]);
    for (const PredictRecord& rec : block.traces[l].predicts) {
      samples_ << iter.iteration << ',' << l << ',' << emit_predict_line(rec)
               << ',' << weight << '\n';
      if (eval_) {
        // Feed the evaluator exactly what a samples.csv reader would parse,
        // so the curve is recomputable from the file bit for bit.
        eval_->add_sample(rec.name, std::strtod(rec.value.c_str(), nullptr),
                          std::strtod(weight.c_str(), nullptr));
      }
    }
  }
  cumulative_samples_ += static_cast<long long>(block.traces.size());
  const double wallclock =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
          .count();

  diagnostics_ << iter.iteration << ',' << format_f6(wallclock) << ','
               << format_g17(iter.log_evidence) << ','
               << (iter.accepted ? 1 : 0) << ','
               << format_g9(iter.acceptance_rate) << ',';
  for (std::size_t i = 0; i < block.events.size(); ++i) {
    diagnostics_ << (i ? ";" : "") << format_g9(block.events[i].ess);
  }
  diagnostics_ << ',';
  for (std::size_t i = 0; i < block.events.size(); ++i) {
    diagnostics_ << (i ? ";" : "") << (block.events[i].resampled ? 1 : 0);
  }
  diagnostics_ << '\n';

  if (eval_) {
    const KlEvaluator::Report report = eval_->kl();
    kl_ << cumulative_samples_ << ',' << format_f6(wallclock) << ','
        << format_g17(report.avg) << ',' << format_g17(report.sum) << '\n';
  }
}

oracle::ExactPosterior exact_posterior_for(const std::string& model_id) {
  if (model_id == "gaussian") {
    using namespace models::gaussian;
    return oracle::gaussian_exact(kPriorMean, kPriorVar, kLikeVar, kData);
  }
  if (model_id == "hmm-small") return oracle::hmm_small_exact();
  if (model_id == "hmm-large") return oracle::hmm_large_exact();
  if (model_id == "crp") return oracle::crp_bench_exact();
  throw std::invalid_argument("no exact posterior for model '" + model_id +
                              "'");
}

int run(const RunOptions& options) {
  try {
    if (options.iterations < 1) {
      throw std::invalid_argument("need at least one iteration");
    }
    const ModelProgram model = models::model_by_name(options.model);
    SmcConfig cfg;
    cfg.particles = options.particles;
    cfg.tau = options.tau;
    cfg.scheme = parse_resample_scheme(options.scheme);
    cfg.root_seed = options.seed;
    cfg.workers =
        options.workers == 0 ? max_hardware_workers() : options.workers;
    validate(cfg);
    if (options.engine == "pg" && options.tau >= 0.0) {
      std::cerr << "warning: pg ignores tau; conditional sweeps resample at "
                   "every observe\n";
    }

    std::optional<oracle::ExactPosterior> exact;
    if (options.eval) exact = exact_posterior_for(options.model);
    RunWriter writer(options.out_dir, exact ? &*exact : nullptr);
    const ChainSink sink = [&](const ChainIteration& iter) {
      writer.write_iteration(iter);
    };

    if (options.engine == "smc") {
      for (int m = 1; m <= options.iterations; ++m) {
        SmcConfig iter_cfg = cfg;
        iter_cfg.root_seed = derive_seed(cfg.root_seed, m);
        const SweepResult sweep = run_sweep(model, iter_cfg);
        sink({m, true, 1.0, sweep.log_evidence, &sweep});
      }
    } else if (options.engine == "pimh") {
      pimh_chain(model, cfg, options.iterations, sink);
    } else if (options.engine == "pg") {
      pg_chain(model, cfg, options.iterations, sink);
    } else {
      throw std::invalid_argument("unknown engine '" + options.engine +
                                  "' (expected smc, pimh, or pg)");
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace tracemc
