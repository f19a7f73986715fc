#include "tracemc/pimh.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "population.hpp"

namespace tracemc {

bool pimh_accept(double proposed_log_z, double current_log_z, double u) {
  if (!(u > 0.0) || !(u < 1.0)) {
    throw std::invalid_argument("pimh_accept: u must lie in (0, 1)");
  }
  // log u < log(Z'/Z); u < 1 makes the test pass whenever Z' >= Z.
  return std::log(u) < proposed_log_z - current_log_z;
}

bool pimh_step(PimhState& state, const ModelProgram& model,
               const SmcConfig& cfg, std::uint64_t sweep_seed,
               RngStream& accept_stream) {
  SmcConfig sweep_cfg = cfg;
  sweep_cfg.root_seed = sweep_seed;
  SweepResult proposal = run_sweep(model, sweep_cfg);

  ++state.iteration;
  bool accepted;
  if (state.iteration == 1) {
    accepted = true;
  } else {
    accepted = pimh_accept(proposal.log_evidence, state.log_evidence,
                           accept_stream.uniform());
  }
  if (accepted) {
    ++state.accept_count;
    state.log_evidence = proposal.log_evidence;
    state.current = std::move(proposal);
  }
  return accepted;
}

double pimh_chain(const ModelProgram& model, const SmcConfig& cfg,
                  int iterations, const ChainSink& sink) {
  validate(cfg);
  if (iterations < 1) {
    throw std::invalid_argument("pimh_chain: need at least one iteration");
  }
  RngStream accept_stream(derive_seed(cfg.root_seed, detail::kSaltAccept));
  PimhState state;
  for (int m = 1; m <= iterations; ++m) {
    const bool accepted = pimh_step(state, model, cfg,
                                    derive_seed(cfg.root_seed, m),
                                    accept_stream);
    if (sink) {
      sink({m, accepted,
            static_cast<double>(state.accept_count) / state.iteration,
            state.log_evidence, &state.current});
    }
  }
  return static_cast<double>(state.accept_count) / state.iteration;
}

}  // namespace tracemc
