#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tracemc/models.hpp"
#include "tracemc/oracles.hpp"
#include "tracemc/rng.hpp"

using namespace tracemc;
using oracle::ExactMarginal;
using oracle::ExactPosterior;
using oracle::NormalGammaPrior;

// ---------------------------------------------------------------------------
// Independent in-test oracles. Everything below is written from the math
// directly (explicit densities, quadrature, exhaustive enumeration) so the
// library oracles are checked against a second derivation, not themselves.
// ---------------------------------------------------------------------------

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

double ln_gauss(double x, double mu, double var) {
  return -0.5 * std::log(2.0 * M_PI * var) - (x - mu) * (x - mu) / (2.0 * var);
}

// Composite Simpson weights: h/3 * {1, 4, 2, 4, ..., 4, 1} over n
// subintervals (n even).
double simpson_weight(int i, int n, double h) {
  const double base = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
  return base * h / 3.0;
}

struct QuadPosterior {
  double log_z = 0.0;
  double mean = 0.0;
  double var = 0.0;
};

// Quadrature posterior for the conjugate-normal model: mu ~ N(m0, v0),
// each datum scored under N(mu, like_var). One pass accumulates the
// evidence and the first two posterior moments.
QuadPosterior gaussian_quadrature(double m0, double v0, double like_var,
                                  const std::vector<double>& data, double lo,
                                  double hi, int n) {
  const double h = (hi - lo) / n;
  double z = 0.0, m1 = 0.0, m2 = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double mu = lo + i * h;
    double lp = ln_gauss(mu, m0, v0);
    for (double x : data) lp += ln_gauss(x, mu, like_var);
    const double f = std::exp(lp) * simpson_weight(i, n, h);
    z += f;
    m1 += mu * f;
    m2 += mu * mu * f;
  }
  QuadPosterior out;
  out.log_z = std::log(z);
  out.mean = m1 / z;
  out.var = m2 / z - out.mean * out.mean;
  return out;
}

// Exhaustive-path posterior for a K-state chain: every state sequence is
// scored by its prior times emission likelihood (NaN observation = no
// emission term). Returns per-step marginals and the log evidence.
struct BrutePosterior {
  std::vector<std::vector<double>> marginals;  // [step][state]
  double log_z = 0.0;
};

BrutePosterior hmm_brute_force(
    int K, const std::function<std::vector<double>(int)>& trans_row,
    const std::vector<double>& init,
    const std::function<double(int)>& state_mean, double emission_var,
    const std::vector<double>& obs) {
  const int N = static_cast<int>(obs.size());
  long paths = 1;
  for (int n = 0; n < N; ++n) paths *= K;

  std::vector<int> states(N);
  std::vector<double> log_joint(paths);
  double max_lj = -kInf;
  for (long code = 0; code < paths; ++code) {
    long c = code;
    for (int n = 0; n < N; ++n) {
      states[n] = static_cast<int>(c % K);
      c /= K;
    }
    double lj = std::log(init[states[0]]);
    for (int n = 1; n < N; ++n) {
      lj += std::log(trans_row(states[n - 1])[states[n]]);
    }
    for (int n = 0; n < N; ++n) {
      if (!std::isnan(obs[n])) {
        lj += ln_gauss(obs[n], state_mean(states[n]), emission_var);
      }
    }
    log_joint[code] = lj;
    max_lj = std::max(max_lj, lj);
  }

  BrutePosterior out;
  out.marginals.assign(N, std::vector<double>(K, 0.0));
  double z = 0.0;
  for (long code = 0; code < paths; ++code) {
    const double w = std::exp(log_joint[code] - max_lj);
    z += w;
    long c = code;
    for (int n = 0; n < N; ++n) {
      out.marginals[n][c % K] += w;
      c /= K;
    }
  }
  for (auto& m : out.marginals) {
    for (double& p : m) p /= z;
  }
  out.log_z = max_lj + std::log(z / 1.0);
  return out;
}

// Scaled forward pass: returns the log evidence and the final-step
// filtering distribution. Written as a direct recursion, independent of the
// library's log-space smoother.
struct ForwardResult {
  double log_z = 0.0;
  std::vector<double> last_filter;
};

ForwardResult hmm_forward_scaled(
    int K, const std::function<std::vector<double>(int)>& trans_row,
    const std::vector<double>& init,
    const std::function<double(int)>& state_mean, double emission_var,
    const std::vector<double>& obs) {
  const int N = static_cast<int>(obs.size());
  std::vector<double> alpha(init.begin(), init.end());
  double log_z = 0.0;
  for (int n = 0; n < N; ++n) {
    std::vector<double> next(K, 0.0);
    if (n == 0) {
      next = alpha;
    } else {
      for (int j = 0; j < K; ++j) {
        const std::vector<double> row = trans_row(j);
        for (int k = 0; k < K; ++k) next[k] += alpha[j] * row[k];
      }
    }
    if (!std::isnan(obs[n])) {
      for (int k = 0; k < K; ++k) {
        next[k] *= std::exp(ln_gauss(obs[n], state_mean(k), emission_var));
      }
    }
    double scale = 0.0;
    for (double p : next) scale += p;
    log_z += std::log(scale);
    for (double& p : next) p /= scale;
    alpha = next;
  }
  ForwardResult out;
  out.log_z = log_z;
  out.last_filter = alpha;
  return out;
}

// 2D quadrature for the normal-gamma marginal likelihood, substituting
// z = (mu - loc) * sqrt(kappa * lambda) so both integration ranges are
// fixed. Integrand:
//   Gamma(lambda; a, b) * phi(z) * prod_i N(x_i; loc + z/sqrt(kappa*lambda),
//   1/lambda)
double normal_gamma_quadrature(const std::vector<double>& xs,
                               const NormalGammaPrior& prior, double lam_hi,
                               int n_lam, double z_hi, int n_z) {
  const int m = static_cast<int>(xs.size());
  double xbar = 0.0;
  for (double x : xs) xbar += x;
  xbar /= m;
  double ssd = 0.0;
  for (double x : xs) ssd += (x - xbar) * (x - xbar);

  const double a = prior.shape, b = prior.rate;
  const double log_gamma_const = a * std::log(b) - std::lgamma(a);
  const double h_lam = lam_hi / n_lam;
  const double h_z = 2.0 * z_hi / n_z;

  double total = 0.0;
  for (int i = 1; i <= n_lam; ++i) {  // integrand vanishes at lambda = 0
    const double lam = i * h_lam;
    const double w_lam = simpson_weight(i, n_lam, h_lam);
    const double root = std::sqrt(prior.mean_scale * lam);
    // Everything not depending on z.
    const double base = log_gamma_const + (a - 1.0) * std::log(lam) -
                        b * lam + 0.5 * m * std::log(lam / (2.0 * M_PI)) -
                        0.5 * lam * ssd - 0.5 * std::log(2.0 * M_PI);
    double inner = 0.0;
    for (int j = 0; j <= n_z; ++j) {
      const double z = -z_hi + j * h_z;
      const double mu = prior.mean_loc + z / root;
      const double d = mu - xbar;
      inner += std::exp(base - 0.5 * lam * m * d * d - 0.5 * z * z) *
               simpson_weight(j, n_z, h_z);
    }
    total += w_lam * inner;
  }
  return std::log(total);
}

// CRP prior mass of one partition, built from the sequential seating
// probabilities (customer i joins block of size s with prob s/(alpha+i),
// opens a new block with prob alpha/(alpha+i)).
double crp_seating_log_prob(const std::vector<std::vector<int>>& blocks,
                            double alpha, int n) {
  std::map<int, int> block_of;  // item -> block index
  for (int b = 0; b < static_cast<int>(blocks.size()); ++b) {
    for (int item : blocks[b]) block_of[item] = b;
  }
  std::vector<int> sizes(blocks.size(), 0);
  double lp = 0.0;
  for (int i = 0; i < n; ++i) {
    const int b = block_of.at(i);
    if (sizes[b] == 0) {
      lp += std::log(i == 0 ? 1.0 : alpha / (alpha + i));
    } else {
      lp += std::log(sizes[b] / (alpha + i));
    }
    sizes[b] += 1;
  }
  return lp;
}

double logsumexp2(double a, double b) {
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

const ExactMarginal& marginal_of(const ExactPosterior& post,
                                 const std::string& name) {
  auto it = post.marginals.find(name);
  REQUIRE(it != post.marginals.end());
  return it->second;
}

}  // namespace

// ---------------------------------------------------------------------------
// Conjugate-normal oracle
// ---------------------------------------------------------------------------

TEST_CASE("conjugate-normal oracle matches quadrature on the benchmark") {
  const std::vector<double> data(models::gaussian::kData.begin(),
                                 models::gaussian::kData.end());
  const QuadPosterior quad = gaussian_quadrature(
      models::gaussian::kPriorMean, models::gaussian::kPriorVar,
      models::gaussian::kLikeVar, data, -30.0, 30.0, 60000);

  const ExactPosterior post = oracle::gaussian_exact(
      models::gaussian::kPriorMean, models::gaussian::kPriorVar,
      models::gaussian::kLikeVar, data);
  const ExactMarginal& mu = marginal_of(post, "mu");
  CHECK(mu.kind == ExactMarginal::Kind::gaussian);

  REQUIRE(post.log_evidence.has_value());
  CHECK(*post.log_evidence == doctest::Approx(quad.log_z).epsilon(1e-11));
  CHECK(mu.mean == doctest::Approx(quad.mean).epsilon(1e-10));
  CHECK(mu.variance == doctest::Approx(quad.var).epsilon(1e-8));

  // Closed-form values: precision 1/5 + 2/2 = 1.2, mean 8.7/1.2.
  CHECK(mu.mean == doctest::Approx(7.25).epsilon(1e-13));
  CHECK(mu.variance == doctest::Approx(5.0 / 6.0).epsilon(1e-13));
  // The benchmark's log evidence, quoted elsewhere rounded to 4 decimals.
  CHECK(std::abs(*post.log_evidence - (-8.2394)) < 5e-5);
}

TEST_CASE("conjugate-normal oracle matches quadrature off the benchmark") {
  const std::vector<double> data = {-1.0, 0.5, 2.0, -3.0};
  const QuadPosterior quad =
      gaussian_quadrature(-2.0, 0.5, 3.0, data, -20.0, 20.0, 40000);
  const ExactPosterior post = oracle::gaussian_exact(-2.0, 0.5, 3.0, data);
  const ExactMarginal& mu = marginal_of(post, "mu");
  CHECK(mu.mean == doctest::Approx(quad.mean).epsilon(1e-10));
  CHECK(mu.variance == doctest::Approx(quad.var).epsilon(1e-8));
  CHECK(*post.log_evidence == doctest::Approx(quad.log_z).epsilon(1e-11));
  // Independent closed form: precision 2 + 4/3, mean (-4 - 0.5) / (10/3).
  CHECK(mu.variance == doctest::Approx(0.3).epsilon(1e-13));
  CHECK(mu.mean == doctest::Approx(-1.35).epsilon(1e-13));
}

TEST_CASE("conjugate-normal oracle with no data returns the prior") {
  const ExactPosterior post = oracle::gaussian_exact(1.0, 5.0, 2.0, {});
  const ExactMarginal& mu = marginal_of(post, "mu");
  CHECK(mu.mean == 1.0);
  CHECK(mu.variance == 5.0);
  CHECK(*post.log_evidence == 0.0);
}

// ---------------------------------------------------------------------------
// Hidden-Markov oracle
// ---------------------------------------------------------------------------

TEST_CASE("small-chain oracle matches exhaustive path enumeration") {
  using namespace models::hmm_small;
  const auto trans_row = [](int k) {
    return std::vector<double>(kTrans[k].begin(), kTrans[k].end());
  };
  const auto mean_of = [](int k) { return kMeans[k]; };
  const std::vector<double> init(kInit.begin(), kInit.end());
  const std::vector<double> obs(kData.begin(), kData.end());

  const BrutePosterior brute =
      hmm_brute_force(kK, trans_row, init, mean_of, kEmissionVar, obs);
  const ExactPosterior post = oracle::hmm_small_exact();

  REQUIRE(post.log_evidence.has_value());
  CHECK(*post.log_evidence == doctest::Approx(brute.log_z).epsilon(1e-12));
  REQUIRE(post.marginals.size() == static_cast<std::size_t>(kSteps));
  for (int n = 0; n < kSteps; ++n) {
    const ExactMarginal& m =
        marginal_of(post, "state[" + std::to_string(n) + "]");
    CHECK(m.kind == ExactMarginal::Kind::categorical);
    REQUIRE(m.support == std::vector<double>{0.0, 1.0, 2.0});
    for (int k = 0; k < kK; ++k) {
      CHECK(std::abs(m.probs[k] - brute.marginals[n][k]) < 1e-9);
    }
  }
}

TEST_CASE("chain oracle with no observations reproduces the prior marginals") {
  const int K = 3, N = 4;
  const std::vector<std::vector<double>> T = {
      {0.6, 0.3, 0.1}, {0.2, 0.5, 0.3}, {0.1, 0.2, 0.7}};
  const std::vector<double> init = {0.5, 0.3, 0.2};
  const auto trans_row = [&](int k) { return T[k]; };
  const auto mean_of = [](int k) { return static_cast<double>(k); };
  const std::vector<double> obs(N, kNan);

  const ExactPosterior post =
      oracle::hmm_exact(K, trans_row, init, mean_of, 1.0, obs);
  CHECK(std::abs(*post.log_evidence) < 1e-12);

  std::vector<double> p = init;
  for (int n = 0; n < N; ++n) {
    if (n > 0) {
      std::vector<double> next(K, 0.0);
      for (int j = 0; j < K; ++j) {
        for (int k = 0; k < K; ++k) next[k] += p[j] * T[j][k];
      }
      p = next;
    }
    const ExactMarginal& m =
        marginal_of(post, "state[" + std::to_string(n) + "]");
    for (int k = 0; k < K; ++k) CHECK(m.probs[k] == doctest::Approx(p[k]).epsilon(1e-12));
  }
}

TEST_CASE("chain oracle handles an observation at the first step") {
  const std::vector<double> init = {0.4, 0.6};
  const auto trans_row = [](int) { return std::vector<double>{0.5, 0.5}; };
  const auto mean_of = [](int k) { return k == 0 ? -1.0 : 2.0; };
  const std::vector<double> obs = {0.7};

  const ExactPosterior post =
      oracle::hmm_exact(2, trans_row, init, mean_of, 1.5, obs);
  const double w0 = 0.4 * std::exp(ln_gauss(0.7, -1.0, 1.5));
  const double w1 = 0.6 * std::exp(ln_gauss(0.7, 2.0, 1.5));
  const ExactMarginal& m = marginal_of(post, "state[0]");
  CHECK(m.probs[0] == doctest::Approx(w0 / (w0 + w1)).epsilon(1e-13));
  CHECK(m.probs[1] == doctest::Approx(w1 / (w0 + w1)).epsilon(1e-13));
  CHECK(*post.log_evidence == doctest::Approx(std::log(w0 + w1)).epsilon(1e-13));
}

TEST_CASE("large-chain oracle agrees with an independent forward pass") {
  using namespace models::hmm_large;
  const std::vector<double>& y = models::hmm_large_observations();
  REQUIRE(y.size() == static_cast<std::size_t>(kSteps - 1));
  std::vector<double> obs(kSteps, kNan);
  for (int n = 1; n < kSteps; ++n) obs[n] = y[n - 1];
  const std::vector<double> init(kK, 1.0 / kK);

  const ForwardResult fwd = hmm_forward_scaled(
      kK, transition_row, init, state_mean, kEmissionVar, obs);
  const ExactPosterior post = oracle::hmm_large_exact();

  REQUIRE(post.log_evidence.has_value());
  CHECK(*post.log_evidence == doctest::Approx(fwd.log_z).epsilon(1e-11));
  REQUIRE(post.marginals.size() == static_cast<std::size_t>(kSteps));

  // At the final step the smoothing marginal equals the filtering one.
  const ExactMarginal& last =
      marginal_of(post, "state[" + std::to_string(kSteps - 1) + "]");
  REQUIRE(last.support.size() == static_cast<std::size_t>(kK));
  for (int k = 0; k < kK; ++k) {
    CHECK(last.probs[k] == doctest::Approx(fwd.last_filter[k]).epsilon(1e-9));
  }
  for (const auto& [name, m] : post.marginals) {
    double sum = 0.0;
    for (double p : m.probs) sum += p;
    CHECK(std::abs(sum - 1.0) < 1e-9);
  }
}

// ---------------------------------------------------------------------------
// Set-partition enumeration
// ---------------------------------------------------------------------------

TEST_CASE("partition enumeration counts match the Bell numbers") {
  const std::vector<long> bell = {1,   2,    5,    15,    52,
                                  203, 877,  4140, 21147, 115975};
  for (int n = 1; n <= 10; ++n) {
    long count = 0;
    oracle::enumerate_set_partitions(
        n, [&](const std::vector<std::vector<int>>&) { ++count; });
    CHECK(count == bell[n - 1]);
  }
}

TEST_CASE("partition enumeration emits valid, distinct partitions in order") {
  const int n = 4;
  std::set<std::string> seen;
  oracle::enumerate_set_partitions(
      n, [&](const std::vector<std::vector<int>>& blocks) {
        std::vector<bool> hit(n, false);
        std::string key;
        int prev_first = -1;
        for (const std::vector<int>& b : blocks) {
          REQUIRE(!b.empty());
          CHECK(std::is_sorted(b.begin(), b.end()));
          CHECK(b.front() > prev_first);  // blocks ordered by first element
          prev_first = b.front();
          for (int item : b) {
            REQUIRE(item >= 0);
            REQUIRE(item < n);
            CHECK(!hit[item]);
            hit[item] = true;
            key += std::to_string(item);
          }
          key += '|';
        }
        for (int i = 0; i < n; ++i) CHECK(hit[i]);
        CHECK(seen.insert(key).second);
      });
  CHECK(seen.size() == 15);
}

TEST_CASE("partition enumeration visits n=3 in growth-string order") {
  std::vector<std::vector<std::vector<int>>> got;
  oracle::enumerate_set_partitions(
      3, [&](const std::vector<std::vector<int>>& b) { got.push_back(b); });
  const std::vector<std::vector<std::vector<int>>> expected = {
      {{0, 1, 2}},
      {{0, 1}, {2}},
      {{0, 2}, {1}},
      {{0}, {1, 2}},
      {{0}, {1}, {2}},
  };
  CHECK(got == expected);
}

TEST_CASE("partition enumeration of n=0 visits nothing") {
  int count = 0;
  oracle::enumerate_set_partitions(
      0, [&](const std::vector<std::vector<int>>&) { ++count; });
  CHECK(count == 0);
}

// ---------------------------------------------------------------------------
// Normal-gamma marginal likelihood
// ---------------------------------------------------------------------------

TEST_CASE("normal-gamma marginal matches 2D quadrature") {
  const NormalGammaPrior prior = {0.4, 2.0, 1.5, 0.8};
  const std::vector<double> xs = {0.5, -0.3, 1.1};
  const double quad = normal_gamma_quadrature(xs, prior, 80.0, 8000, 10.0, 2000);
  const double exact = oracle::normal_gamma_log_marginal(xs, prior);
  CHECK(exact == doctest::Approx(quad).epsilon(1e-7));
}

TEST_CASE("normal-gamma marginal matches quadrature for a single value") {
  const NormalGammaPrior prior = {-1.0, 0.7, 2.5, 1.9};
  const std::vector<double> xs = {0.25};
  const double quad = normal_gamma_quadrature(xs, prior, 60.0, 6000, 10.0, 2000);
  const double exact = oracle::normal_gamma_log_marginal(xs, prior);
  CHECK(exact == doctest::Approx(quad).epsilon(1e-7));
}

TEST_CASE("normal-gamma marginal is exchangeable and empty-safe") {
  const NormalGammaPrior prior = {0.4, 2.0, 1.5, 0.8};
  const std::vector<double> a = {0.5, -0.3, 1.1};
  const std::vector<double> b = {1.1, 0.5, -0.3};
  CHECK(oracle::normal_gamma_log_marginal(a, prior) ==
        doctest::Approx(oracle::normal_gamma_log_marginal(b, prior))
            .epsilon(1e-12));
  CHECK(oracle::normal_gamma_log_marginal({}, prior) == 0.0);
}

// ---------------------------------------------------------------------------
// CRP mixture oracle
// ---------------------------------------------------------------------------

TEST_CASE("mixture oracle matches the hand-worked two-point posterior") {
  const double alpha = 1.3;
  const NormalGammaPrior prior = {0.2, 1.5, 2.0, 1.1};
  const std::vector<double> data = {0.3, 1.7};

  const std::vector<double> first = {data[0]};
  const std::vector<double> second = {data[1]};
  const double lw_together =
      std::log(1.0 / (1.0 + alpha)) +
      oracle::normal_gamma_log_marginal(data, prior);
  const double lw_apart =
      std::log(alpha / (1.0 + alpha)) +
      oracle::normal_gamma_log_marginal(first, prior) +
      oracle::normal_gamma_log_marginal(second, prior);
  const double log_z = logsumexp2(lw_together, lw_apart);

  const ExactPosterior post = oracle::crp_exact(alpha, data, prior);
  const ExactMarginal& m = marginal_of(post, "num_classes");
  CHECK(m.kind == ExactMarginal::Kind::categorical);
  REQUIRE(m.support == std::vector<double>{1.0, 2.0});
  CHECK(m.probs[0] ==
        doctest::Approx(std::exp(lw_together - log_z)).epsilon(1e-12));
  CHECK(m.probs[1] ==
        doctest::Approx(std::exp(lw_apart - log_z)).epsilon(1e-12));
  CHECK(*post.log_evidence == doctest::Approx(log_z).epsilon(1e-12));
}

TEST_CASE("mixture oracle matches explicit three-point enumeration") {
  const double alpha = 0.8;
  const NormalGammaPrior prior = {0.1, 1.2, 1.8, 0.9};
  const std::vector<double> data = {-0.4, 0.9, 0.2};

  // All five partitions of three items, listed explicitly. Their prior
  // masses come from the sequential seating probabilities, not from the
  // closed-form product the library uses.
  const std::vector<std::vector<std::vector<int>>> partitions = {
      {{0, 1, 2}},
      {{0, 1}, {2}},
      {{0, 2}, {1}},
      {{0}, {1, 2}},
      {{0}, {1}, {2}},
  };
  std::vector<double> pooled_lw(4, -kInf);  // index = number of blocks
  for (const auto& blocks : partitions) {
    double lw = crp_seating_log_prob(blocks, alpha, 3);
    for (const auto& block : blocks) {
      std::vector<double> values;
      for (int idx : block) values.push_back(data[idx]);
      lw += oracle::normal_gamma_log_marginal(values, prior);
    }
    const int B = static_cast<int>(blocks.size());
    pooled_lw[B] = pooled_lw[B] == -kInf ? lw : logsumexp2(pooled_lw[B], lw);
  }
  const double log_z =
      logsumexp2(logsumexp2(pooled_lw[1], pooled_lw[2]), pooled_lw[3]);

  const ExactPosterior post = oracle::crp_exact(alpha, data, prior);
  const ExactMarginal& m = marginal_of(post, "num_classes");
  REQUIRE(m.support == std::vector<double>{1.0, 2.0, 3.0});
  for (int B = 1; B <= 3; ++B) {
    CHECK(m.probs[B - 1] ==
          doctest::Approx(std::exp(pooled_lw[B] - log_z)).epsilon(1e-12));
  }
  CHECK(*post.log_evidence == doctest::Approx(log_z).epsilon(1e-12));
}

TEST_CASE("seating prior over all partitions sums to one") {
  const double alpha = 1.37;
  const int n = 10;
  double total = 0.0;
  oracle::enumerate_set_partitions(
      n, [&](const std::vector<std::vector<int>>& blocks) {
        total += std::exp(crp_seating_log_prob(blocks, alpha, n));
      });
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("benchmark mixture oracle binds the shipped model constants") {
  const ExactPosterior bound = oracle::crp_bench_exact();
  const NormalGammaPrior prior = {models::crp::kMeanLoc, 1.0,
                                  models::crp::kGammaShape,
                                  models::crp::kGammaRate};
  const std::vector<double> data(models::crp::kData.begin(),
                                 models::crp::kData.end());
  const ExactPosterior direct =
      oracle::crp_exact(models::crp::kAlpha, data, prior);

  const ExactMarginal& mb = marginal_of(bound, "num_classes");
  const ExactMarginal& md = marginal_of(direct, "num_classes");
  REQUIRE(mb.support.size() == 10);
  CHECK(mb.support == md.support);
  double sum = 0.0;
  for (std::size_t i = 0; i < mb.probs.size(); ++i) {
    CHECK(mb.probs[i] == md.probs[i]);
    sum += mb.probs[i];
  }
  CHECK(std::abs(sum - 1.0) < 1e-9);
  REQUIRE(bound.log_evidence.has_value());
  CHECK(*bound.log_evidence == *direct.log_evidence);
  CHECK(std::isfinite(*bound.log_evidence));
}

// ---------------------------------------------------------------------------
// KL divergence
// ---------------------------------------------------------------------------

TEST_CASE("divergence of a distribution against itself is zero") {
  const std::vector<double> p = {0.1, 0.2, 0.3, 0.4};
  CHECK(oracle::kl_divergence(p, p) == 0.0);
}

TEST_CASE("divergence matches a hand-computed value") {
  const std::vector<double> p_hat = {0.5, 0.5};
  const std::vector<double> p = {0.25, 0.75};
  CHECK(oracle::kl_divergence(p_hat, p) ==
        doctest::Approx(0.5 * std::log(4.0 / 3.0)).epsilon(1e-15));
}

TEST_CASE("divergence treats empty estimate cells as zero contribution") {
  // 0 * ln 0 = 0: the estimate missing a cell the truth covers is finite.
  const std::vector<double> p_hat = {0.0, 1.0};
  const std::vector<double> p = {0.5, 0.5};
  CHECK(oracle::kl_divergence(p_hat, p) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("divergence is infinite when the estimate puts mass off-support") {
  const std::vector<double> p_hat = {0.5, 0.5};
  const std::vector<double> p = {1.0, 0.0};
  CHECK(oracle::kl_divergence(p_hat, p) == kInf);
  // Matching zeros on both sides stay finite.
  const std::vector<double> q_hat = {0.5, 0.5, 0.0};
  const std::vector<double> q = {0.25, 0.75, 0.0};
  CHECK(std::isfinite(oracle::kl_divergence(q_hat, q)));
}

TEST_CASE("divergence is non-negative on random distribution pairs") {
  RngStream stream(914);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> p_hat(6), p(6);
    double sh = 0.0, sp = 0.0;
    for (int i = 0; i < 6; ++i) {
      p_hat[i] = stream.uniform() + 1e-3;
      p[i] = stream.uniform() + 1e-3;
      sh += p_hat[i];
      sp += p[i];
    }
    for (int i = 0; i < 6; ++i) {
      p_hat[i] /= sh;
      p[i] /= sp;
    }
    CHECK(oracle::kl_divergence(p_hat, p) >= -1e-12);
  }
}
