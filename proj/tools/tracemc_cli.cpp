#include <CLI11.hpp>

#include "tracemc/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Trace-based sequential Monte Carlo inference runner"};
  app.require_subcommand(1);

  tracemc::RunOptions options;
  CLI::App* run = app.add_subcommand(
      "run", "Run one inference job and write CSV outputs");
  run->add_option("--model", options.model,
                  "Model: gaussian | hmm-small | hmm-large | crp")
      ->check(CLI::IsMember({"gaussian", "hmm-small", "hmm-large", "crp"}));
  run->add_option("--engine", options.engine, "Engine: smc | pimh | pg")
      ->check(CLI::IsMember({"smc", "pimh", "pg"}));
  run->add_option("--particles", options.particles,
                  "Particles per sweep (L)")
      ->check(CLI::PositiveNumber);
  run->add_option("--iterations", options.iterations,
                  "Sweeps (smc) or chain iterations (pimh, pg)")
      ->check(CLI::PositiveNumber);
  run->add_option("--tau", options.tau,
                  "ESS resampling threshold (default: L/2)");
  run->add_option("--scheme", options.scheme,
                  "Resampling: multinomial | residual | systematic")
      ->check(CLI::IsMember({"multinomial", "residual", "systematic"}));
  run->add_option("--seed", options.seed, "Root seed");
  run->add_option("--workers", options.workers,
                  "Worker threads; 0 = all hardware threads");
  run->add_option("--out", options.out_dir, "Output directory");
  run->add_flag("--eval", options.eval,
                "Score samples against the exact posterior (kl_curve.csv)");

  CLI11_PARSE(app, argc, argv);
  return tracemc::run(options);
}
