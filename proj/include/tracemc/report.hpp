#pragma once

#include <chrono>
#include <fstream>
#include <optional>
#include <string>

#include "tracemc/eval.hpp"
#include "tracemc/smc.hpp"

namespace tracemc {

// The canonical "name,value" fragment of one sample row.
std::string emit_predict_line(const PredictRecord& rec);

// Round-trippable double rendering used for weights and KL values.
std::string format_g17(double x);

// Writes a run's CSV outputs under out_dir:
//   samples.csv      iteration,particle,predict_name,value,weight
//   diagnostics.csv  iteration,wallclock_seconds,log_evidence,accepted,
//                    acceptance_rate,ess_trace,resampled_trace
//   kl_curve.csv     cumulative_samples,wallclock_seconds,kl,kl_sum
//                    (only when an exact posterior is supplied)
// Sample rows carry no timing and are byte-reproducible under a fixed seed;
// wallclock columns in the other two files are measured at emission time.
// kl is the per-marginal average and kl_sum the sum, recomputed from exactly
// the rows written to samples.csv so far.
class RunWriter {
 public:
  RunWriter(const std::string& out_dir, const oracle::ExactPosterior* exact);

  void write_iteration(const ChainIteration& iter);

 private:
  std::ofstream samples_;
  std::ofstream diagnostics_;
  std::ofstream kl_;
  std::optional<KlEvaluator> eval_;
  long long cumulative_samples_ = 0;
  std::chrono::steady_clock::time_point start_;
};

// Everything the `run` entry point needs; mirrors the CLI flags.
struct RunOptions {
  std::string model = "gaussian";
  std::string engine = "smc";  // smc | pimh | pg
  int particles = 100;
  int iterations = 1;
  double tau = -1.0;  // < 0: engine default max(1, L/2)
  std::string scheme = "systematic";
  std::uint64_t seed = 0;
  int workers = 1;  // 0: all hardware threads
  std::string out_dir = ".";
  bool eval = false;
};

// Run one configured inference job and write its CSVs. Returns the process
// exit code (0 on success; errors print to stderr and return nonzero).
int run(const RunOptions& options);

// The exact posterior used by --eval for a benchmark model id.
oracle::ExactPosterior exact_posterior_for(const std::string& model_id);

}  // namespace tracemc
