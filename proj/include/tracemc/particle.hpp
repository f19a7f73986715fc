#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "tracemc/model.hpp"

namespace tracemc {

enum class ParticleStatus { at_barrier, completed, killed, failed };

const char* particle_status_name(ParticleStatus s);

// What run_to_barrier reports: either the particle is paused at observe
// `observe_index` having contributed log_increment, or it ran to completion.
struct BarrierEvent {
  bool completed = false;
  int observe_index = 0;
  double log_increment = 0.0;
};

// One live execution of a model program. Move-only. The coroutine frame and
// its context sit behind a stable heap allocation, so handles can be shuffled
// freely while the program is suspended.
class ParticleHandle {
 public:
  struct Options {
    bool full_precision_predicts = false;
  };

  // A default-constructed handle owns nothing and behaves as killed.
  ParticleHandle() noexcept;

  // Fresh execution paused at the launch barrier (no choices made yet).
  static ParticleHandle start(const ModelProgram& model, std::uint64_t seed,
                              Options opts);
  static ParticleHandle start(const ModelProgram& model, std::uint64_t seed) {
    return start(model, seed, Options());
  }

  // Rebuild an execution mid-flight: re-execute the program feeding it the
  // recorded prefix until `observes` observes have been passed, leaving the
  // particle paused there with `stream` armed for post-prefix draws. The
  // prefix must cover at least the checkpoint at that barrier; a longer
  // prefix (up to a full trace) keeps feeding draws past the barrier.
  static ParticleHandle replay(const ModelProgram& model,
                               std::span<const ChoiceRecord> prefix,
                               int observes, RngStream stream, Options opts);
  static ParticleHandle replay(const ModelProgram& model,
                               std::span<const ChoiceRecord> prefix,
                               int observes, RngStream stream) {
    return replay(model, prefix, observes, stream, Options());
  }

  ParticleHandle(ParticleHandle&&) noexcept;
  ParticleHandle& operator=(ParticleHandle&&) noexcept;
  ParticleHandle(const ParticleHandle&) = delete;
  ParticleHandle& operator=(const ParticleHandle&) = delete;
  ~ParticleHandle();

  // Advance to the next observe barrier or to completion. On a program
  // exception the particle is marked failed and the exception propagates.
  BarrierEvent run_to_barrier();

  // Split an at-barrier particle into `count` independent continuations
  // sharing the choice prefix up to here. Child i's stream is
  // stream().split(child_seeds[i]); child 0 adopts this particle's frame,
  // the rest are rebuilt by replay and verified to reproduce the prefix
  // exactly. Consumes this handle.
  std::vector<ParticleHandle> branch(
      int count, std::span<const std::uint64_t> child_seeds) &&;

  // Discard the particle, freeing its frame, trace, and checkpoint storage.
  // Idempotent; every other operation on a killed handle throws.
  void kill();

  ParticleStatus status() const;
  int observes_passed() const;
  const ExecutionTrace& trace() const;

  // Move the trace out of a completed particle; the handle is dead after.
  ExecutionTrace take_trace();

  // Log weight accumulated since the last reset (engines reset at
  // resampling events).
  double cum_logw() const;
  void set_cum_logw(double value);

  const RngStream& stream() const;
  void rekey_stream(const RngStream& stream);

 private:
  struct Impl;
  Impl& require_live(const char* op) const;

  std::unique_ptr<Impl> impl_;
};

}  // namespace tracemc
