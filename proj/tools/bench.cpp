// Sweep throughput benchmark: the serial reference execution (workers=1)
// against OpenMP fan-out, with a bit-identity check between the two.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <vector>

#include "tracemc/models.hpp"
#include "tracemc/parallel.hpp"
#include "tracemc/smc.hpp"

namespace {

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  return xs[xs.size() / 2];
}

bool same_results(const tracemc::SweepResult& a, const tracemc::SweepResult& b) {
  return a.log_evidence == b.log_evidence &&
         a.final_norm_weights == b.final_norm_weights && a.traces == b.traces;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sweep throughput: serial reference vs OpenMP workers"};
  std::string model_id = "hmm-large";
  int particles = 2000;
  int reps = 3;
  std::vector<int> workers = {1, 2, 4, 8};
  std::uint64_t seed = 0;
  app.add_option("--model", model_id, "Benchmark model")
      ->check(CLI::IsMember({"gaussian", "hmm-small", "hmm-large", "crp"}));
  app.add_option("--particles", particles, "Particles per sweep")
      ->check(CLI::PositiveNumber);
  app.add_option("--reps", reps, "Timed repetitions per worker count")
      ->check(CLI::PositiveNumber);
  app.add_option("--workers", workers, "Worker counts to compare");
  app.add_option("--seed", seed, "Root seed");
  CLI11_PARSE(app, argc, argv);

  const tracemc::ModelProgram model = tracemc::models::model_by_name(model_id);
  tracemc::SmcConfig cfg;
  cfg.particles = particles;
  cfg.root_seed = seed;
  cfg.workers = 1;

  std::printf("model=%s particles=%d reps=%d hardware_threads=%d\n",
              model_id.c_str(), particles, reps,
              tracemc::max_hardware_workers());
  const tracemc::SweepResult reference = tracemc::run_sweep(model, cfg);

  std::printf("%8s %12s %9s %10s\n", "workers", "median_s", "speedup",
              "identical");
  double base = 0.0;
  for (int w : workers) {
    cfg.workers = w;
    tracemc::SweepResult last;
    std::vector<double> times;
    for (int r = 0; r < reps; ++r) {
      last = tracemc::run_sweep(model, cfg);
      times.push_back(last.wallclock_seconds);
    }
    const double med = median(times);
    if (w == workers.front()) base = med;
    std::printf("%8d %12.4f %9.2fx %10s\n", w, med, base / med,
                same_results(last, reference) ? "yes" : "NO");
  }
  return 0;
}
