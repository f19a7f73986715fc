#pragma once

#include <stdexcept>
#include <string>

namespace tracemc {

// A model broke its side of the execution contract: nondeterministic replay,
// mismatched observe counts, a NaN/+inf observe increment, use of a dead
// particle, and the like. These are programming errors, not numerical ones.
class ModelContractViolation : public std::runtime_error {
 public:
  explicit ModelContractViolation(const std::string& what)
      : std::runtime_error(what) {}
};

// Every particle in a sweep reported zero likelihood (all weights -inf), so
// no normalized weight vector exists. Distinct from a contract violation: the
// model is fine, the data just killed the whole population.
class DegenerateSweepError : public std::runtime_error {
 public:
  explicit DegenerateSweepError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace tracemc
