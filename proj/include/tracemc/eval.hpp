#pragma once

#include <map>
#include <string>
#include <vector>

#include "tracemc/oracles.hpp"

namespace tracemc {

// Gaussian CDF (variance parameterization, like everything here).
double normal_cdf(double x, double mean, double variance);

// The discretization contract for continuous marginals: 200 equal bins over
// mean +- 6 standard deviations, with the two edge bins extended to +-inf.
struct GaussianGrid {
  double lo = 0.0;
  double hi = 0.0;
  int bins = 200;

  static GaussianGrid from(double mean, double variance);

  int bin_of(double x) const;

  // Exact per-bin mass of N(mean, variance) on this grid.
  std::vector<double> truth(double mean, double variance) const;
};

// Accumulates weighted predict samples and scores them against an exact
// posterior: KL(estimate || truth) per marginal, reported both averaged and
// summed over marginals. Gaussian marginals go through the shared grid;
// categorical marginals match support values exactly, and any sample mass
// outside the support (truth zero) drives the KL to +inf.
class KlEvaluator {
 public:
  explicit KlEvaluator(const oracle::ExactPosterior& exact);

  // Add one weighted sample. Names without an exact marginal are ignored.
  void add_sample(const std::string& name, double value, double weight);

  struct Report {
    double avg = 0.0;
    double sum = 0.0;
    int marginals = 0;
  };

  // Throws std::logic_error if some marginal has received no mass yet.
  Report kl() const;

 private:
  struct Accumulator {
    GaussianGrid grid;                  // gaussian marginals
    bool gridded = false;
    std::map<double, int> support_at;   // categorical marginals
    std::vector<double> truth;
    std::vector<double> mass;
    double stray_mass = 0.0;            // categorical mass off the support
    double total = 0.0;
  };

  std::map<std::string, Accumulator> marginals_;
};

}  // namespace tracemc
