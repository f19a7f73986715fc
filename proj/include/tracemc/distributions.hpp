#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "tracemc/rng.hpp"

namespace tracemc {

// log N(x; mu, var). The second distribution parameter is a variance, not a
// standard deviation, everywhere in this library.
double normal_lnp(double x, double mu, double var);

// N(mu, var) sampler (Box-Muller, no cached spare: always two uniforms).
double normal_rng(RngStream& stream, double mu, double var);

// Gamma(shape, rate) sampler, mean shape/rate (Marsaglia-Tsang; the
// shape < 1 case goes through the shape+1 boost).
double gamma_rng(RngStream& stream, double shape, double rate);

// Validates a probability vector: entries finite and >= 0, sum within 1e-9
// of 1. Returns the renormalized copy; throws std::domain_error otherwise.
std::vector<double> checked_probs(std::span<const double> probs);

// Index of the category containing quantile u of an already-normalized
// probability vector (inverse CDF walk).
int discrete_index(std::span<const double> normalized, double u);

// Categorical draw over {0..K-1}; probs go through checked_probs.
int discrete_rng(RngStream& stream, std::span<const double> probs);

// Occupancy state of a Blackwell-MacQueen urn: class counts plus the
// concentration. An urn instance belongs to one program execution.
struct PolyaUrnState {
  explicit PolyaUrnState(double alpha);

  int num_classes() const { return static_cast<int>(counts.size()); }

  // Probabilities for the next draw: one entry per existing class plus a
  // final entry for a fresh class. counts[k] / (total + alpha), then
  // alpha / (total + alpha).
  std::vector<double> draw_probs() const;

  // Commit a drawn class id; id == num_classes() opens a fresh class.
  void record(int class_id);

  double alpha = 1.0;
  std::vector<int> counts;
  int total = 0;
};

// Draw the next class. The randomness is delegated to `sample`, a callable
// mapping a probability vector to an index in {0..K}, so inference code can
// route the draw through its recorded-choice machinery.
template <typename Sampler>
int polya_urn_draw(PolyaUrnState& urn, Sampler&& sample) {
  const std::vector<double> probs = urn.draw_probs();
  const int k = sample(std::span<const double>(probs));
  urn.record(k);
  return k;
}

// Plain-simulation overload.
int polya_urn_draw(PolyaUrnState& urn, RngStream& stream);

// Per-argument cache for one stochastic function: a key, once bound, is
// never re-randomized within the owning execution.
template <typename Arg, typename Value>
class MemoTable {
 public:
  template <typename Fn>
  Value invoke(const Arg& arg, Fn&& fn) {
    auto it = table_.find(arg);
    if (it != table_.end()) return it->second;
    Value value = fn(arg);
    table_.emplace(arg, value);
    return value;
  }

  bool contains(const Arg& arg) const { return table_.count(arg) != 0; }
  std::size_t size() const { return table_.size(); }

 private:
  std::map<Arg, Value> table_;
};

}  // namespace tracemc
