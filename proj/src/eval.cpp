#include "tracemc/eval.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>

namespace tracemc {

double normal_cdf(double x, double mean, double variance) {
  return 0.5 * std::erfc(-(x - mean) / std::sqrt(2.0 * variance));
}

GaussianGrid GaussianGrid::from(double mean, double variance) {
  const double sd = std::sqrt(variance);
  return {mean - 6.0 * sd, mean + 6.0 * sd, 200};
}

int GaussianGrid::bin_of(double x) const {
  if (x < lo) return 0;
  if (x >= hi) return bins - 1;
  const int b = static_cast<int>((x - lo) / (hi - lo) * bins);
  return std::min(std::max(b, 0), bins - 1);
}

std::vector<double> GaussianGrid::truth(double mean, double variance) const {
  std::vector<double> mass(bins);
  const double width = (hi - lo) / bins;
  for (int b = 0; b < bins; ++b) {
    const double left = b == 0 ? 0.0 : normal_cdf(lo + b * width, mean, variance);
    const double right =
        b == bins - 1 ? 1.0 : normal_cdf(lo + (b + 1) * width, mean, variance);
    mass[b] = right - left;
  }
  return mass;
}

KlEvaluator::KlEvaluator(const oracle::ExactPosterior& exact) {
  for (const auto& [name, marg] : exact.marginals) {
    Accumulator acc;
    if (marg.kind == oracle::ExactMarginal::Kind::gaussian) {
      acc.gridded = true;
      acc.grid = GaussianGrid::from(marg.mean, marg.variance);
      acc.truth = acc.grid.truth(marg.mean, marg.variance);
      acc.mass.assign(acc.truth.size(), 0.0);
    } else {
      acc.truth = marg.probs;
      acc.mass.assign(marg.probs.size(), 0.0);
      for (std::size_t i = 0; i < marg.support.size(); ++i) {
        acc.support_at.emplace(marg.support[i], static_cast<int>(i));
      }
    }
    marginals_.emplace(name, std::move(acc));
  }
}

void KlEvaluator::add_sample(const std::string& name, double value,
                             double weight) {
  auto it = marginals_.find(name);
  if (it == marginals_.end()) return;
  Accumulator& acc = it->second;
  acc.total += weight;
  if (acc.gridded) {
    acc.mass[acc.grid.bin_of(value)] += weight;
    return;
  }
  auto at = acc.support_at.find(value);
  if (at == acc.support_at.end()) {
    acc.stray_mass += weight;
  } else {
    acc.mass[at->second] += weight;
  }
}

KlEvaluator::Report KlEvaluator::kl() const {
  Report report;
  for (const auto& [name, acc] : marginals_) {
    if (acc.total <= 0.0) {
      throw std::logic_error("kl: marginal '" + name +
                             "' has received no sample mass");
    }
    std::vector<double> p_hat(acc.mass.size());
    for (std::size_t i = 0; i < acc.mass.size(); ++i) {
      p_hat[i] = acc.mass[i] / acc.total;
    }
    double kl;
    if (acc.stray_mass > 0.0) {
      std::cerr << "warning: marginal '" << name << "' carries mass "
                << acc.stray_mass / acc.total
                << " outside the exact support; KL is +inf\n";
      kl = std::numeric_limits<double>::infinity();
    } else {
      kl = oracle::kl_divergence(p_hat, acc.truth);
    }
    report.sum += kl;
    report.marginals += 1;
  }
  report.avg = report.marginals > 0 ? report.sum / report.marginals : 0.0;
  return report;
}

}  // namespace tracemc
