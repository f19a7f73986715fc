#pragma once

#include <span>
#include <string>
#include <vector>

#include "tracemc/errors.hpp"
#include "tracemc/rng.hpp"

namespace tracemc {

// Normalized weights alongside the raw log weights they came from.
struct WeightVector {
  std::vector<double> log_unnorm;
  std::vector<double> norm;  // sums to 1
};

enum class ResampleScheme { multinomial, residual, systematic };

const char* resample_scheme_name(ResampleScheme s);
ResampleScheme parse_resample_scheme(const std::string& name);

// Normalize log weights by max-shift + exponentiation. -inf entries get
// weight zero; if every entry is -inf there is nothing to normalize and a
// DegenerateSweepError is thrown.
WeightVector normalize(std::span<const double> log_unnorm);

// log of the plain average of exp(log_unnorm): logsumexp(lw) - log(L).
// Throws DegenerateSweepError when every entry is -inf.
double log_mean_weight(std::span<const double> log_unnorm);

// Effective sample size 1 / sum(w^2) of normalized weights; lies in
// [1, len(w)].
double ess(const WeightVector& w);

struct OffspringCounts {
  std::vector<int> counts;  // one per input weight; sums to the draw total
};

// Distribute `draws` offspring over the categories of `w` so that
// E[counts[i]] = draws * w.norm[i]. `draws` is the population size L for a
// plain resampling step; conditional sweeps pass L-1.
OffspringCounts sample_offspring(const WeightVector& w, int draws,
                                 ResampleScheme scheme, RngStream& stream);

// Expand counts into a sorted ancestor index list: counts [2,0,1] -> [0,0,2].
std::vector<int> offspring_to_ancestors(const OffspringCounts& counts);

}  // namespace tracemc
