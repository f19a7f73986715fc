#include "tracemc/distributions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tracemc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double standard_normal(RngStream& stream) {
  const double u1 = stream.uniform();
  const double u2 = stream.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

}  // namespace

double normal_lnp(double x, double mu, double var) {
  if (!(var > 0.0) || !std::isfinite(var)) {
    throw std::domain_error("normal_lnp: variance must be positive, got " +
                            std::to_string(var));
  }
  const double d = x - mu;
  return -0.5 * (std::log(kTwoPi * var) + d * d / var);
}

double normal_rng(RngStream& stream, double mu, double var) {
  if (!(var > 0.0) || !std::isfinite(var)) {
    throw std::domain_error("normal_rng: variance must be positive, got " +
                            std::to_string(var));
  }
  return mu + std::sqrt(var) * standard_normal(stream);
}

double gamma_rng(RngStream& stream, double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0)) {
    throw std::domain_error("gamma_rng: shape and rate must be positive");
  }
  if (shape < 1.0) {
    // Boost trick: X ~ Gamma(shape+1), X * U^{1/shape} ~ Gamma(shape).
    const double u = stream.uniform();
    return gamma_rng(stream, shape + 1.0, rate) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = standard_normal(stream);
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = stream.uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
      return d * v / rate;
    }
  }
}

std::vector<double> checked_probs(std::span<const double> probs) {
  if (probs.empty()) {
    throw std::domain_error("discrete: empty probability vector");
  }
  double sum = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p) || p < 0.0) {
      throw std::domain_error(
          "discrete: probabilities must be finite and nonnegative");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::domain_error("discrete: probabilities sum to " +
                            std::to_string(sum) + ", expected 1");
  }
  std::vector<double> out(probs.begin(), probs.end());
  for (double& p : out) p /= sum;
  return out;
}

int discrete_index(std::span<const double> normalized, double u) {
  double cum = 0.0;
  for (std::size_t i = 0; i < normalized.size(); ++i) {
    cum += normalized[i];
    if (u < cum) return static_cast<int>(i);
  }
  // Rounding left u above the accumulated mass; take the last live category.
  for (std::size_t i = normalized.size(); i-- > 0;) {
    if (normalized[i] > 0.0) return static_cast<int>(i);
  }
  return 0;
}

int discrete_rng(RngStream& stream, std::span<const double> probs) {
  const std::vector<double> p = checked_probs(probs);
  return discrete_index(p, stream.uniform());
}

PolyaUrnState::PolyaUrnState(double alpha_) : alpha(alpha_) {
  if (!(alpha > 0.0)) {
    throw std::domain_error("polya urn: alpha must be positive");
  }
}

std::vector<double> PolyaUrnState::draw_probs() const {
  std::vector<double> probs(counts.size() + 1);
  const double denom = total + alpha;
  for (std::size_t k = 0; k < counts.size(); ++k) probs[k] = counts[k] / denom;
  probs.back() = alpha / denom;
  return probs;
}

void PolyaUrnState::record(int class_id) {
  if (class_id < 0 || class_id > num_classes()) {
    throw std::domain_error("polya urn: class id " + std::to_string(class_id) +
                            " out of range");
  }
  if (class_id == num_classes()) {
    counts.push_back(1);
  } else {
    ++counts[class_id];
  }
  ++total;
}

int polya_urn_draw(PolyaUrnState& urn, RngStream& stream) {
  return polya_urn_draw(urn, [&stream](std::span<const double> probs) {
    return discrete_rng(stream, probs);
  });
}

}  // namespace tracemc
