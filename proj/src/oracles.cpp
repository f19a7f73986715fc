#include "tracemc/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "tracemc/distributions.hpp"
#include "tracemc/models.hpp"

namespace tracemc::oracle {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double logsumexp(std::span<const double> xs) {
  double m = kNegInf;
  for (double x : xs) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace

ExactPosterior gaussian_exact(double prior_mean, double prior_var,
                              double like_var, std::span<const double> data) {
  if (!(prior_var > 0.0) || !(like_var > 0.0)) {
    throw std::domain_error("gaussian_exact: variances must be positive");
  }
  double m = prior_mean;
  double v = prior_var;
  double log_z = 0.0;
  for (double x : data) {
    // Predictive marginal of the next datum, then conjugate update.
    log_z += normal_lnp(x, m, v + like_var);
    const double vn = 1.0 / (1.0 / v + 1.0 / like_var);
    m = vn * (m / v + x / like_var);
    v = vn;
  }
  ExactPosterior out;
  ExactMarginal marg;
  marg.kind = ExactMarginal::Kind::gaussian;
  marg.mean = m;
  marg.variance = v;
  out.marginals.emplace("mu", std::move(marg));
  out.log_evidence = log_z;
  return out;
}

ExactPosterior hmm_exact(
    int num_states,
    const std::function<std::vector<double>(int)>& trans_row,
    std::span<const double> init,
    const std::function<double(int)>& state_mean, double emission_var,
    std::span<const double> observations) {
  const int K = num_states;
  const int N = static_cast<int>(observations.size());
  if (static_cast<int>(init.size()) != K) {
    throw std::invalid_argument("hmm_exact: init size != num_states");
  }
  std::vector<std::vector<double>> log_trans(K, std::vector<double>(K));
  for (int j = 0; j < K; ++j) {
    const std::vector<double> row = trans_row(j);
    for (int k = 0; k < K; ++k) log_trans[j][k] = std::log(row[k]);
  }
  auto emit = [&](int n, int k) {
    const double y = observations[n];
    return std::isnan(y) ? 0.0
                         : normal_lnp(y, state_mean(k), emission_var);
  };

  std::vector<std::vector<double>> alpha(N, std::vector<double>(K));
  for (int k = 0; k < K; ++k) alpha[0][k] = std::log(init[k]) + emit(0, k);
  std::vector<double> terms(K);
  for (int n = 1; n < N; ++n) {
    for (int k = 0; k < K; ++k) {
      for (int j = 0; j < K; ++j) terms[j] = alpha[n - 1][j] + log_trans[j][k];
      alpha[n][k] = logsumexp(terms) + emit(n, k);
    }
  }
  std::vector<std::vector<double>> beta(N, std::vector<double>(K, 0.0));
  for (int n = N - 2; n >= 0; --n) {
    for (int k = 0; k < K; ++k) {
      for (int j = 0; j < K; ++j) {
        terms[j] = log_trans[k][j] + emit(n + 1, j) + beta[n + 1][j];
      }
      beta[n][k] = logsumexp(terms);
    }
  }

  ExactPosterior out;
  out.log_evidence = logsumexp(alpha[N - 1]);
  for (int n = 0; n < N; ++n) {
    ExactMarginal marg;
    marg.kind = ExactMarginal::Kind::categorical;
    std::vector<double> post(K);
    for (int k = 0; k < K; ++k) post[k] = alpha[n][k] + beta[n][k];
    const double norm = logsumexp(post);
    for (int k = 0; k < K; ++k) {
      marg.support.push_back(k);
      marg.probs.push_back(std::exp(post[k] - norm));
    }
    out.marginals.emplace("state[" + std::to_string(n) + "]",
                          std::move(marg));
  }
  return out;
}

ExactPosterior hmm_small_exact() {
  using namespace models::hmm_small;
  return hmm_exact(
      kK,
      [](int j) {
        return std::vector<double>(kTrans[j].begin(), kTrans[j].end());
      },
      kInit, [](int k) { return kMeans[k]; }, kEmissionVar, kData);
}

ExactPosterior hmm_large_exact() {
  using namespace models::hmm_large;
  std::vector<double> obs(kSteps, std::numeric_limits<double>::quiet_NaN());
  const std::vector<double>& y = models::hmm_large_observations();
  for (int n = 1; n < kSteps; ++n) obs[n] = y[n - 1];
  const std::vector<double> init(kK, 1.0 / kK);
  return hmm_exact(
      kK, transition_row, init, state_mean, kEmissionVar, obs);
}

void enumerate_set_partitions(
    int n,
    const std::function<void(const std::vector<std::vector<int>>&)>& visit) {
  if (n <= 0) return;
  std::vector<int> assign(n, 0);
  std::vector<std::vector<int>> blocks;
  const std::function<void(int, int)> rec = [&](int i, int used) {
    if (i == n) {
      blocks.assign(used, {});
      for (int j = 0; j < n; ++j) blocks[assign[j]].push_back(j);
      visit(blocks);
      return;
    }
    for (int b = 0; b <= used; ++b) {
      assign[i] = b;
      rec(i + 1, std::max(used, b + 1));
    }
  };
  rec(0, 0);
}

double normal_gamma_log_marginal(std::span<const double> values,
                                 const NormalGammaPrior& prior) {
  const double m = static_cast<double>(values.size());
  if (m == 0.0) return 0.0;
  double mean = 0.0;
  for (double x : values) mean += x;
  mean /= m;
  double ss = 0.0;
  for (double x : values) ss += (x - mean) * (x - mean);

  const double kappa_m = prior.mean_scale + m;
  const double a_m = prior.shape + 0.5 * m;
  const double d = mean - prior.mean_loc;
  const double b_m =
      prior.rate + 0.5 * ss + 0.5 * prior.mean_scale * m * d * d / kappa_m;

  return std::lgamma(a_m) - std::lgamma(prior.shape) +
         prior.shape * std::log(prior.rate) - a_m * std::log(b_m) +
         0.5 * (std::log(prior.mean_scale) - std::log(kappa_m)) -
         0.5 * m * std::log(2.0 * std::numbers::pi);
}

ExactPosterior crp_exact(double alpha, std::span<const double> data,
                         const NormalGammaPrior& prior) {
  const int n = static_cast<int>(data.size());
  if (n == 0) throw std::invalid_argument("crp_exact: empty data");
  // Per-class-count pools of log posterior masses, combined by logsumexp at
  // the end for stability.
  std::vector<std::vector<double>> pools(n + 1);
  double log_alpha_rising = 0.0;  // log prod_{i=0}^{n-1} (alpha + i)
  for (int i = 0; i < n; ++i) log_alpha_rising += std::log(alpha + i);

  enumerate_set_partitions(n, [&](const std::vector<std::vector<int>>& blocks) {
    const int B = static_cast<int>(blocks.size());
    double lw = B * std::log(alpha) - log_alpha_rising;
    std::vector<double> values;
    for (const std::vector<int>& block : blocks) {
      lw += std::lgamma(static_cast<double>(block.size()));  // (m_b - 1)!
      values.clear();
      for (int idx : block) values.push_back(data[idx]);
      lw += normal_gamma_log_marginal(values, prior);
    }
    pools[B].push_back(lw);
  });

  std::vector<double> log_mass(n + 1, kNegInf);
  for (int B = 1; B <= n; ++B) log_mass[B] = logsumexp(pools[B]);
  const double log_z = logsumexp(log_mass);

  ExactPosterior out;
  out.log_evidence = log_z;
  ExactMarginal marg;
  marg.kind = ExactMarginal::Kind::categorical;
  for (int B = 1; B <= n; ++B) {
    marg.support.push_back(B);
    marg.probs.push_back(std::exp(log_mass[B] - log_z));
  }
  out.marginals.emplace("num_classes", std::move(marg));
  return out;
}

ExactPosterior crp_bench_exact() {
  using namespace models::crp;
  return crp_exact(kAlpha, kData,
                   {kMeanLoc, 1.0, kGammaShape, kGammaRate});
}

double kl_divergence(std::span<const double> p_hat, std::span<const double> p) {
  if (p_hat.size() != p.size()) {
    throw std::invalid_argument("kl_divergence: mismatched supports");
  }
  double kl = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p_hat[i] == 0.0) continue;
    if (p[i] == 0.0) {
      std::cerr << "warning: estimate places mass " << p_hat[i]
                << " on a zero-probability outcome (index " << i
                << "); KL is +inf\n";
      return std::numeric_limits<double>::infinity();
    }
    kl += p_hat[i] * (std::log(p_hat[i]) - std::log(p[i]));
  }
  return kl;
}

}  // namespace tracemc::oracle
