#include "tracemc/resampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tracemc/distributions.hpp"

namespace tracemc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double max_finite(std::span<const double> log_unnorm) {
  double m = kNegInf;
  for (double lw : log_unnorm) {
    if (std::isnan(lw) || lw == std::numeric_limits<double>::infinity()) {
      throw std::domain_error("log weights must be finite or -inf");
    }
    m = std::max(m, lw);
  }
  return m;
}

OffspringCounts multinomial_offspring(std::span<const double> w, int draws,
                                      RngStream& stream) {
  OffspringCounts out;
  out.counts.assign(w.size(), 0);
  for (int d = 0; d < draws; ++d) {
    ++out.counts[discrete_index(w, stream.uniform())];
  }
  return out;
}

OffspringCounts systematic_offspring(std::span<const double> w, int draws,
                                     RngStream& stream) {
  OffspringCounts out;
  out.counts.assign(w.size(), 0);
  if (draws == 0) return out;
  const double u0 = stream.uniform();
  double cum = 0.0;
  int j = 0;
  for (std::size_t l = 0; l < w.size(); ++l) {
    cum += w[l];
    while (j < draws && (j + u0) / draws < cum) {
      ++out.counts[l];
      ++j;
    }
  }
  // Rounding can leave the last comb teeth above the accumulated mass; they
  // belong to the last category with positive weight.
  if (j < draws) {
    for (std::size_t l = w.size(); l-- > 0;) {
      if (w[l] > 0.0) {
        out.counts[l] += draws - j;
        break;
      }
    }
  }
  return out;
}

OffspringCounts residual_offspring(std::span<const double> w, int draws,
                                   RngStream& stream) {
  OffspringCounts out;
  out.counts.assign(w.size(), 0);
  std::vector<double> resid(w.size(), 0.0);
  int assigned = 0;
  for (std::size_t l = 0; l < w.size(); ++l) {
    const double target = draws * w[l];
    double ip = std::floor(target);
    // Snap fractions within 1e-9 of the next integer so exact expectations
    // (e.g. 10 * 0.3) produce deterministic integer parts.
    if (target - ip > 1.0 - 1e-9) ip += 1.0;
    out.counts[l] = static_cast<int>(ip);
    assigned += out.counts[l];
    resid[l] = std::max(0.0, target - ip);
  }
  while (assigned > draws) {
    // Only reachable through pathological rounding ties; undo the largest.
    auto it = std::max_element(out.counts.begin(), out.counts.end());
    --*it;
    --assigned;
  }
  const int rem = draws - assigned;
  if (rem > 0) {
    double rsum = 0.0;
    for (double r : resid) rsum += r;
    if (rsum <= 0.0) {
      resid.assign(w.begin(), w.end());
      rsum = 1.0;
    }
    for (double& r : resid) r /= rsum;
    const OffspringCounts extra = multinomial_offspring(resid, rem, stream);
    for (std::size_t l = 0; l < w.size(); ++l) out.counts[l] += extra.counts[l];
  }
  return out;
}

}  // namespace

const char* resample_scheme_name(ResampleScheme s) {
  switch (s) {
    case ResampleScheme::multinomial: return "multinomial";
    case ResampleScheme::residual: return "residual";
    case ResampleScheme::systematic: return "systematic";
  }
  return "?";
}

ResampleScheme parse_resample_scheme(const std::string& name) {
  if (name == "multinomial") return ResampleScheme::multinomial;
  if (name == "residual") return ResampleScheme::residual;
  if (name == "systematic") return ResampleScheme::systematic;
  throw std::invalid_argument("unknown resampling scheme '" + name + "'");
}

WeightVector normalize(std::span<const double> log_unnorm) {
  if (log_unnorm.empty()) {
    throw std::invalid_argument("normalize: empty weight vector");
  }
  const double m = max_finite(log_unnorm);
  if (m == kNegInf) {
    throw DegenerateSweepError(
        "all particles have zero likelihood (every log weight is -inf)");
  }
  WeightVector out;
  out.log_unnorm.assign(log_unnorm.begin(), log_unnorm.end());
  out.norm.resize(log_unnorm.size());
  double sum = 0.0;
  for (std::size_t l = 0; l < log_unnorm.size(); ++l) {
    out.norm[l] = std::exp(log_unnorm[l] - m);
    sum += out.norm[l];
  }
  for (double& w : out.norm) w /= sum;
  return out;
}

double log_mean_weight(std::span<const double> log_unnorm) {
  if (log_unnorm.empty()) {
    throw std::invalid_argument("log_mean_weight: empty weight vector");
  }
  const double m = max_finite(log_unnorm);
  if (m == kNegInf) {
    throw DegenerateSweepError(
        "all particles have zero likelihood (every log weight is -inf)");
  }
  double sum = 0.0;
  for (double lw : log_unnorm) sum += std::exp(lw - m);
  return m + std::log(sum) - std::log(static_cast<double>(log_unnorm.size()));
}

double ess(const WeightVector& w) {
  double sq = 0.0;
  for (double x : w.norm) sq += x * x;
  return 1.0 / sq;
}

OffspringCounts sample_offspring(const WeightVector& w, int draws,
                                 ResampleScheme scheme, RngStream& stream) {
  if (draws < 0) {
    throw std::invalid_argument("sample_offspring: negative draw count");
  }
  switch (scheme) {
    case ResampleScheme::multinomial:
      return multinomial_offspring(w.norm, draws, stream);
    case ResampleScheme::residual:
      return residual_offspring(w.norm, draws, stream);
    case ResampleScheme::systematic:
      return systematic_offspring(w.norm, draws, stream);
  }
  throw std::logic_error("unreachable");
}

std::vector<int> offspring_to_ancestors(const OffspringCounts& counts) {
  std::vector<int> ancestors;
  for (std::size_t l = 0; l < counts.counts.size(); ++l) {
    for (int k = 0; k < counts.counts[l]; ++k) {
      ancestors.push_back(static_cast<int>(l));
    }
  }
  return ancestors;
}

}  // namespace tracemc
