#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tracemc::oracle {

// One exact marginal: a Gaussian (mean/variance) or a categorical over
// explicit support values.
struct ExactMarginal {
  enum class Kind { gaussian, categorical } kind = Kind::gaussian;
  double mean = 0.0;
  double variance = 0.0;
  std::vector<double> support;
  std::vector<double> probs;  // sums to 1 within 1e-9
};

// Exact posterior marginals keyed by predict name.
struct ExactPosterior {
  std::map<std::string, ExactMarginal> marginals;
  std::optional<double> log_evidence;
};

// Conjugate update for a N(prior_mean, prior_var) prior on the mean of a
// N(mu, like_var) likelihood; also yields the exact log evidence of `data`.
// The marginal is named "mu".
ExactPosterior gaussian_exact(double prior_mean, double prior_var,
                              double like_var, std::span<const double> data);

// Forward-backward smoothing in log space. observations[n] is the emission
// at step n; NaN marks an unobserved step. Each step's marginal lands under
// "state[n]" with support {0..K-1}.
ExactPosterior hmm_exact(
    int num_states,
    const std::function<std::vector<double>(int)>& trans_row,
    std::span<const double> init,
    const std::function<double(int)>& state_mean, double emission_var,
    std::span<const double> observations);

// Oracles bound to the shipped benchmark models.
ExactPosterior hmm_small_exact();
ExactPosterior hmm_large_exact();

// Visit every set partition of {0..n-1}, blocks ordered by first element
// (restricted growth string order).
void enumerate_set_partitions(
    int n,
    const std::function<void(const std::vector<std::vector<int>>&)>& visit);

struct NormalGammaPrior {
  double mean_loc = 0.0;    // location of the mean prior
  double mean_scale = 1.0;  // kappa: precision multiplier on the mean prior
  double shape = 1.0;       // gamma shape on the precision
  double rate = 1.0;        // gamma rate on the precision
};

// Log marginal likelihood of values drawn iid from one normal-gamma
// component.
double normal_gamma_log_marginal(std::span<const double> values,
                                 const NormalGammaPrior& prior);

// Exact posterior over the number of distinct classes in a CRP Gaussian
// mixture, by enumeration of all set partitions of the data. The marginal is
// named "num_classes" with support {1..n}.
ExactPosterior crp_exact(double alpha, std::span<const double> data,
                         const NormalGammaPrior& prior);
ExactPosterior crp_bench_exact();

// KL(p_hat || p) over a shared support: sum of p_hat ln(p_hat/p), with
// 0 ln 0 = 0. Mass where p == 0 makes the divergence +inf (warned once on
// stderr per call).
double kl_divergence(std::span<const double> p_hat, std::span<const double> p);

}  // namespace tracemc::oracle
