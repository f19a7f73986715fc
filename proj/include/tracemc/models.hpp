#pragma once

#include <array>
#include <string>
#include <vector>

#include "tracemc/model.hpp"

namespace tracemc::models {

// --- two-observation Gaussian with unknown mean -----------------------------
// mu ~ N(1, 5); observations 9 and 8 scored under N(mu, 2); predicts "mu".
namespace gaussian {
inline constexpr double kPriorMean = 1.0;
inline constexpr double kPriorVar = 5.0;
inline constexpr double kLikeVar = 2.0;
inline constexpr std::array<double, 2> kData = {9.0, 8.0};
}  // namespace gaussian

ModelProgram gaussian_model();

// --- 3-state hidden Markov model --------------------------------------------
// 11 latent states (steps 0..10); step 0 is unobserved; predicts "state[n]"
// for every step.
namespace hmm_small {
inline constexpr int kK = 3;
inline constexpr int kSteps = 11;
inline constexpr std::array<std::array<double, 3>, 3> kTrans = {{
    {0.1, 0.5, 0.4},
    {0.2, 0.2, 0.6},
    {0.15, 0.15, 0.7},
}};
inline constexpr std::array<double, 3> kInit = {1.0 / 3, 1.0 / 3, 1.0 / 3};
inline constexpr std::array<double, 3> kMeans = {-1.0, 1.0, 0.0};
inline constexpr double kEmissionVar = 1.0;
// kData[0] is NaN: step 0 has no observation and the value is never read.
extern const std::array<double, 11> kData;
}  // namespace hmm_small

ModelProgram hmm_small_model();

// --- 10-state hidden Markov model with generated data -----------------------
// 51 latent states (steps 0..50), uniform initial distribution, transition
// rows with 0.5 on self and 0.5/9 elsewhere, emission mean k for state k and
// variance 4. The 50 observations are generated by simulating this model
// once from a fixed seed (see hmm_large_observations) and shipped as
// data/hmm_large_observations.txt.
namespace hmm_large {
inline constexpr int kK = 10;
inline constexpr int kSteps = 51;  // steps 0..50; 50 observations
inline constexpr double kSelfTrans = 0.5;
inline constexpr double kEmissionVar = 4.0;
inline constexpr std::uint64_t kDataSeed = 42;

inline double state_mean(int k) { return static_cast<double>(k); }
std::vector<double> transition_row(int k);
}  // namespace hmm_large

// The 50 hmm-large observations, deterministically regenerated from
// hmm_large::kDataSeed on every call.
const std::vector<double>& hmm_large_observations();

// Render the observations in the shipped data-file format (header line
// naming the seed, then one value per line).
std::string hmm_large_data_file_text();

ModelProgram hmm_large_model();

// --- CRP mixture of Gaussians ------------------------------------------------
// Class assignments from a Polya urn with alpha = 1; per-class variance
// 1/Gamma(1,1) and mean N(0, variance); predicts "num_classes".
namespace crp {
inline constexpr double kAlpha = 1.0;
inline constexpr double kGammaShape = 1.0;
inline constexpr double kGammaRate = 1.0;
inline constexpr double kMeanLoc = 0.0;
extern const std::array<double, 10> kData;
}  // namespace crp

ModelProgram crp_model();

// Lookup by CLI id: gaussian | hmm-small | hmm-large | crp.
ModelProgram model_by_name(const std::string& id);
const std::vector<std::string>& model_names();

}  // namespace tracemc::models
