#pragma once

// Internal engine plumbing shared by the sweep variants. Not installed.

#include <cstdint>
#include <memory>
#include <vector>

#include "tracemc/model.hpp"
#include "tracemc/parallel.hpp"
#include "tracemc/particle.hpp"

namespace tracemc::detail {

// Salt space for engine-internal seed derivation; particle launch seeds use
// the plain indices 0..L-1, so salts live far away.
constexpr std::uint64_t kSaltResample = 0xe1a1b2c3d4e5f601ULL;
constexpr std::uint64_t kSaltBranch = 0xe1a1b2c3d4e5f602ULL;
constexpr std::uint64_t kSaltRetained = 0xe1a1b2c3d4e5f603ULL;
constexpr std::uint64_t kSaltAccept = 0xe1a1b2c3d4e5f604ULL;
constexpr std::uint64_t kSaltSelect = 0xe1a1b2c3d4e5f605ULL;

constexpr int kAllCompleted = -1;

// The live particle population of one sweep. All random decisions (seed
// draws, stream splits) happen serially during planning; the parallel phase
// only runs model code against preassigned streams, which keeps every result
// bit-identical across worker counts.
class Population {
 public:
  Population(const ModelProgram& model, ParticleHandle::Options opts,
             int workers)
      : model_(&model), opts_(opts), workers_(workers) {}

  int size() const { return static_cast<int>(parts_.size()); }
  ParticleHandle& at(int i) { return parts_[i]; }
  const ParticleHandle& at(int i) const { return parts_[i]; }

  // Launch `count` fresh particles with seeds derive_seed(root_seed, i) and
  // advance each to its first barrier (or completion).
  void launch(int count, std::uint64_t root_seed);

  // Advance every particle one barrier forward.
  void advance_all();

  // The common synchronization point: kAllCompleted, or the observe count
  // all particles are paused at. A mixed population means the model passed
  // different numbers of observes on different paths.
  int barrier_or_done() const;

  std::vector<double> cum_logw() const;

  // Extra offspring replayed from a trajectory outside the population
  // (the retained trajectory of a conditional sweep). Children replay its
  // checkpoint at the current barrier and get fresh streams.
  struct ExternalParent {
    const ExecutionTrace* trace = nullptr;
    int count = 0;
  };

  // Replace the population according to the per-particle offspring counts
  // (continue-in-place for the first child, checkpoint replay for the rest),
  // append children of the external parent, reset every accumulated weight,
  // and advance everything one barrier. New slots are ordered by parent.
  void resample_and_advance(const std::vector<int>& counts, RngStream& seeder,
                            const ExternalParent& external);
  void resample_and_advance(const std::vector<int>& counts, RngStream& seeder) {
    resample_and_advance(counts, seeder, ExternalParent());
  }

  // Move all traces out (population must be fully completed).
  std::vector<ExecutionTrace> take_traces();

 private:
  const ModelProgram* model_;
  ParticleHandle::Options opts_;
  int workers_;
  std::vector<ParticleHandle> parts_;
};

}  // namespace tracemc::detail
