#include "tracemc/models.hpp"

#include <cstdio>
#include <limits>
#include <stdexcept>

namespace tracemc::models {

namespace hmm_small {
const std::array<double, 11> kData = {std::numeric_limits<double>::quiet_NaN(),
                                      0.9, 0.8, 0.7, 0.0, -0.025,
                                      -5.0, -2.0, -0.1, 0.0, 0.13};
}

namespace crp {
const std::array<double, 10> kData = {1.0,   1.1,  1.2,   -1.0, -1.5,
                                      -2.0, 0.001, 0.01, 0.005, 0.0};
}

namespace {

ModelExecution gaussian_body(InferenceContext& ctx) {
  using namespace gaussian;
  const double mu = ctx.normal(kPriorMean, kPriorVar);
  co_await ctx.observe(normal_lnp(kData[0], mu, kLikeVar));
  co_await ctx.observe(normal_lnp(kData[1], mu, kLikeVar));
  ctx.predict("mu", mu);
}

ModelExecution hmm_small_body(InferenceContext& ctx) {
  using namespace hmm_small;
  int state = 0;
  for (int n = 0; n < kSteps; ++n) {
    state = ctx.discrete(n == 0 ? std::span<const double>(kInit)
                                : std::span<const double>(kTrans[state]));
    if (n > 0) {
      co_await ctx.observe(normal_lnp(kData[n], kMeans[state], kEmissionVar));
    }
    ctx.predict("state[" + std::to_string(n) + "]", state);
  }
}

ModelExecution hmm_large_body(InferenceContext& ctx) {
  using namespace hmm_large;
  const std::vector<double>& obs = hmm_large_observations();
  const std::vector<double> init(kK, 1.0 / kK);
  int state = 0;
  for (int n = 0; n < kSteps; ++n) {
    const std::vector<double> row = n == 0 ? init : transition_row(state);
    state = ctx.discrete(row);
    if (n > 0) {
      co_await ctx.observe(
          normal_lnp(obs[n - 1], state_mean(state), kEmissionVar));
    }
    ctx.predict("state[" + std::to_string(n) + "]", state);
  }
}

ModelExecution crp_body(InferenceContext& ctx) {
  using namespace crp;
  PolyaUrnState urn(kAlpha);
  MemoTable<int, int> class_of;
  std::vector<double> class_mean;
  std::vector<double> class_var;
  for (std::size_t n = 0; n < kData.size(); ++n) {
    const int cls = class_of.invoke(static_cast<int>(n), [&](int) {
      return polya_urn_draw(urn, [&](std::span<const double> probs) {
        return ctx.discrete(probs);
      });
    });
    if (cls == static_cast<int>(class_mean.size())) {
      const double variance = 1.0 / ctx.gamma(kGammaShape, kGammaRate);
      class_var.push_back(variance);
      class_mean.push_back(ctx.normal(kMeanLoc, variance));
    }
    co_await ctx.observe(normal_lnp(kData[n], class_mean[cls], class_var[cls]));
  }
  ctx.predict("num_classes", urn.num_classes());
}

}  // namespace

ModelProgram gaussian_model() {
  return {gaussian_body, 2, "gaussian"};
}

ModelProgram hmm_small_model() {
  return {hmm_small_body, hmm_small::kSteps - 1, "hmm-small"};
}

ModelProgram hmm_large_model() {
  return {hmm_large_body, hmm_large::kSteps - 1, "hmm-large"};
}

ModelProgram crp_model() {
  return {crp_body, static_cast<int>(crp::kData.size()), "crp"};
}

namespace hmm_large {
std::vector<double> transition_row(int k) {
  std::vector<double> row(kK, (1.0 - kSelfTrans) / (kK - 1));
  row[k] = kSelfTrans;
  return row;
}
}  // namespace hmm_large

const std::vector<double>& hmm_large_observations() {
  static const std::vector<double> obs = [] {
    using namespace hmm_large;
    RngStream stream(kDataSeed);
    const std::vector<double> init(kK, 1.0 / kK);
    int state = discrete_rng(stream, init);
    std::vector<double> out;
    out.reserve(kSteps - 1);
    for (int n = 1; n < kSteps; ++n) {
      state = discrete_rng(stream, transition_row(state));
      out.push_back(normal_rng(stream, state_mean(state), kEmissionVar));
    }
    return out;
  }();
  return obs;
}

std::string hmm_large_data_file_text() {
  std::string out = "# hmm-large observations, generated from seed " +
                    std::to_string(hmm_large::kDataSeed) + "\n";
  char buf[40];
  for (double y : hmm_large_observations()) {
    std::snprintf(buf, sizeof buf, "%.17g\n", y);
    out += buf;
  }
  return out;
}

ModelProgram model_by_name(const std::string& id) {
  if (id == "gaussian") return gaussian_model();
  if (id == "hmm-small") return hmm_small_model();
  if (id == "hmm-large") return hmm_large_model();
  if (id == "crp") return crp_model();
  throw std::invalid_argument("unknown model '" + id + "'");
}

const std::vector<std::string>& model_names() {
  static const std::vector<std::string> names = {"gaussian", "hmm-small",
                                                 "hmm-large", "crp"};
  return names;
}

}  // namespace tracemc::models
