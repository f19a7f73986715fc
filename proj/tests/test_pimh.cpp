#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "support/stats.hpp"
#include "support/toy_models.hpp"
#include "tracemc/pimh.hpp"

using namespace tracemc;

namespace {

SmcConfig base_config(int particles, std::uint64_t seed) {
  SmcConfig cfg;
  cfg.particles = particles;
  cfg.root_seed = seed;
  return cfg;
}

struct RecordedIteration {
  int iteration;
  bool accepted;
  double acceptance_rate;
  double log_evidence;
  SweepResult block;  // deep copy: the sink pointer is only loan-valid
};

std::vector<RecordedIteration> record_chain(const ModelProgram& model,
                                            const SmcConfig& cfg,
                                            int iterations) {
  std::vector<RecordedIteration> out;
  pimh_chain(model, cfg, iterations, [&](const ChainIteration& it) {
    out.push_back(
        {it.iteration, it.accepted, it.acceptance_rate, it.log_evidence,
         *it.block});
  });
  return out;
}

bool same_block(const SweepResult& a, const SweepResult& b) {
  return a.traces == b.traces &&
         a.final_norm_weights == b.final_norm_weights &&
         a.log_evidence == b.log_evidence;
}

}  // namespace

TEST_CASE("acceptance decision boundaries") {
  // A better proposal is accepted for any u.
  CHECK(pimh_accept(-1.0, -2.0, 0.999999));
  CHECK(pimh_accept(-1.0, -2.0, 1e-12));
  // An equal proposal is accepted for any u < 1.
  CHECK(pimh_accept(-3.0, -3.0, 0.999999));
  // A worse proposal is accepted with probability Z'/Z = exp(diff).
  const double diff = -0.7;
  CHECK(pimh_accept(-2.7, -2.0, std::exp(diff) * 0.999));
  CHECK_FALSE(pimh_accept(-2.7, -2.0, std::exp(diff) * 1.001));
  // The exact boundary u = Z'/Z rejects (strict inequality).
  CHECK_FALSE(pimh_accept(-2.7, -2.0, std::exp(diff)));

  CHECK_THROWS_AS(pimh_accept(0.0, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(pimh_accept(0.0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(pimh_accept(0.0, 0.0, -0.25), std::invalid_argument);
  CHECK_THROWS_AS(
      pimh_accept(0.0, 0.0, std::numeric_limits<double>::quiet_NaN()),
      std::invalid_argument);
}

TEST_CASE("a choice-free model is always accepted") {
  // Every sweep of a deterministic program has the same evidence, and equal
  // evidence always passes the test.
  const ModelProgram model = toy::deterministic_toy();
  const std::vector<RecordedIteration> chain =
      record_chain(model, base_config(5, 42), 50);
  REQUIRE(chain.size() == 50);
  for (const RecordedIteration& it : chain) {
    CHECK(it.accepted);
    CHECK(it.acceptance_rate == 1.0);
    CHECK(it.log_evidence == doctest::Approx(-1.75).epsilon(1e-12));
    CHECK(same_block(it.block, chain[0].block));
  }
}

TEST_CASE("a one-iteration chain is exactly one seeded sweep") {
  const ModelProgram model = toy::two_observe_discrete_toy();
  const SmcConfig cfg = base_config(40, 4);
  const std::vector<RecordedIteration> chain = record_chain(model, cfg, 1);
  REQUIRE(chain.size() == 1);
  CHECK(chain[0].accepted);  // the initializer always counts
  CHECK(chain[0].acceptance_rate == 1.0);

  SmcConfig sweep_cfg = cfg;
  sweep_cfg.root_seed = derive_seed(cfg.root_seed, 1);
  const SweepResult direct = run_sweep(model, sweep_cfg);
  CHECK(same_block(chain[0].block, direct));
  CHECK(chain[0].log_evidence == direct.log_evidence);
}

TEST_CASE("a rigged-down chain rejects and re-emits the current block") {
  const ModelProgram model = toy::binary_toy();
  const SmcConfig cfg = base_config(10, 8);
  RngStream accept_stream(derive_seed(cfg.root_seed, 1234));

  PimhState state;
  CHECK(pimh_step(state, model, cfg, derive_seed(cfg.root_seed, 1),
                  accept_stream));
  const SweepResult before = state.current;

  // Rig the chain's standing evidence impossibly high: the next proposal's
  // acceptance probability collapses to exp(logZ' - 1e6) = 0.
  state.log_evidence = 1e6;
  const bool accepted = pimh_step(state, model, cfg,
                                  derive_seed(cfg.root_seed, 2),
                                  accept_stream);
  CHECK_FALSE(accepted);
  CHECK(state.iteration == 2);
  CHECK(state.accept_count == 1);
  CHECK(state.log_evidence == 1e6);              // rejected: nothing replaced
  CHECK(same_block(state.current, before));      // block bit-identical
}

TEST_CASE("rejected iterations replay the previous block bit for bit") {
  // Small L on a stochastic model gives noisy evidence estimates, so a long
  // chain is guaranteed to contain genuine rejections.
  const ModelProgram model = toy::two_observe_discrete_toy();
  const std::vector<RecordedIteration> chain =
      record_chain(model, base_config(3, 17), 200);
  int rejects = 0;
  int accept_count = 0;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    accept_count += chain[i].accepted ? 1 : 0;
    CHECK(chain[i].acceptance_rate ==
          doctest::Approx(static_cast<double>(accept_count) /
                          static_cast<double>(i + 1))
              .epsilon(1e-15));
    if (i > 0 && !chain[i].accepted) {
      ++rejects;
      CHECK(same_block(chain[i].block, chain[i - 1].block));
      CHECK(chain[i].log_evidence == chain[i - 1].log_evidence);
    }
  }
  CHECK(rejects > 10);
}

TEST_CASE("chains are deterministic under a fixed seed") {
  const ModelProgram model = toy::two_observe_discrete_toy();
  const SmcConfig cfg = base_config(6, 23);
  const std::vector<RecordedIteration> a = record_chain(model, cfg, 60);
  const std::vector<RecordedIteration> b = record_chain(model, cfg, 60);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].accepted == b[i].accepted);
    CHECK(a[i].log_evidence == b[i].log_evidence);
    CHECK(same_block(a[i].block, b[i].block));
  }
}

TEST_CASE("the chain estimates an enumerable posterior") {
  const ModelProgram model = toy::binary_toy();
  SmcConfig cfg = base_config(8, 31);
  std::vector<SweepResult> blocks;
  const double rate = pimh_chain(model, cfg, 3000, [&](const ChainIteration& it) {
    blocks.push_back(*it.block);
  });
  CHECK(rate > 0.0);
  CHECK(rate <= 1.0);
  const WeightedSamples s = posterior_estimate(blocks, "x");
  CHECK(s.total_weight() == doctest::Approx(3000.0).epsilon(1e-9));
  CHECK(s.mean() == doctest::Approx(0.7).epsilon(0.07));
}

TEST_CASE("iteration counts below one are rejected") {
  CHECK_THROWS_AS(pimh_chain(toy::binary_toy(), base_config(4, 1), 0, nullptr),
                  std::invalid_argument);
}
