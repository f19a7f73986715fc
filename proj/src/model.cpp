#include "tracemc/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace tracemc {

void ModelExecution::resume() {
  handle_.resume();
  if (handle_.done() && handle_.promise().error) {
    std::rethrow_exception(handle_.promise().error);
  }
}

template <typename Fresh>
double InferenceContext::next_value(DistId id, std::span<const double> params,
                                    Fresh&& fresh) {
  const auto index = static_cast<std::uint32_t>(trace_.choices.size());
  if (replay_cursor_ < replay_.size()) {
    const ChoiceRecord& rec = replay_[replay_cursor_];
    if (rec.dist_id != id) {
      throw ModelContractViolation(
          std::string("replay diverged at choice ") + std::to_string(index) +
          ": recorded " + dist_id_name(rec.dist_id) + ", program asked for " +
          dist_id_name(id));
    }
    if (rec.params.size() != params.size() ||
        !std::equal(rec.params.begin(), rec.params.end(), params.begin())) {
      throw ModelContractViolation(
          std::string("replay diverged at choice ") + std::to_string(index) +
          ": " + dist_id_name(id) + " parameters differ from the recording");
    }
    ++replay_cursor_;
    trace_.choices.push_back(
        {index, id, {params.begin(), params.end()}, rec.value});
    return rec.value;
  }
  const double value = fresh();
  trace_.choices.push_back({index, id, {params.begin(), params.end()}, value});
  return value;
}

double InferenceContext::normal(double mu, double var) {
  const double params[] = {mu, var};
  return next_value(DistId::normal, params,
                    [&] { return normal_rng(stream_, mu, var); });
}

double InferenceContext::gamma(double shape, double rate) {
  const double params[] = {shape, rate};
  return next_value(DistId::gamma, params,
                    [&] { return gamma_rng(stream_, shape, rate); });
}

int InferenceContext::discrete(std::span<const double> probs) {
  const double value = next_value(DistId::discrete, probs, [&] {
    return static_cast<double>(discrete_rng(stream_, probs));
  });
  const int k = static_cast<int>(value);
  if (k < 0 || static_cast<std::size_t>(k) >= probs.size()) {
    throw ModelContractViolation(
        "replay diverged: recorded discrete value " + std::to_string(value) +
        " is outside the current support of size " +
        std::to_string(probs.size()));
  }
  return k;
}

InferenceContext::ObservePoint InferenceContext::observe(double lnp) {
  if (std::isnan(lnp) || lnp == std::numeric_limits<double>::infinity()) {
    throw ModelContractViolation(
        "observe increment at observe " +
        std::to_string(trace_.observe_count + 1) + " is " +
        std::to_string(lnp) + "; only finite values or -inf are legal");
  }
  trace_.choices_at_observe.push_back(trace_.choices.size());
  trace_.observe_logw.push_back(lnp);
  ++trace_.observe_count;
  last_increment_ = lnp;
  return {};
}

void InferenceContext::predict(const std::string& name, double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, opts_.full_precision_predicts ? "%.17g" : "%f",
                value);
  add_predict(name, buf);
}

void InferenceContext::predict(const std::string& name, long long value) {
  add_predict(name, std::to_string(value));
}

void InferenceContext::add_predict(const std::string& name,
                                   std::string rendered) {
  if (name.empty()) {
    throw ModelContractViolation("predict: name must be non-empty");
  }
  if (name.find_first_of(",\"\n") != std::string::npos) {
    throw ModelContractViolation("predict: name '" + name +
                                 "' contains CSV delimiter characters");
  }
  trace_.predicts.push_back({name, std::move(rendered), trace_.observe_count});
}

void InferenceContext::arm_replay(std::vector<ChoiceRecord> prefix) {
  if (!trace_.choices.empty() || replay_cursor_ < replay_.size()) {
    throw ModelContractViolation(
        "arm_replay: context has already made choices");
  }
  replay_ = std::move(prefix);
  replay_cursor_ = 0;
}

}  // namespace tracemc
