#pragma once

#include <coroutine>
#include <exception>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tracemc/distributions.hpp"
#include "tracemc/errors.hpp"
#include "tracemc/rng.hpp"
#include "tracemc/trace.hpp"

namespace tracemc {

class InferenceContext;

// Owning handle for one model coroutine. The coroutine starts suspended and
// is stepped from barrier to barrier by the particle that owns it.
class ModelExecution {
 public:
  struct promise_type {
    std::exception_ptr error;

    ModelExecution get_return_object() {
      return ModelExecution(
          std::coroutine_handle<promise_type>::from_promise(*this));
    }
    std::suspend_always initial_suspend() noexcept { return {}; }
    std::suspend_always final_suspend() noexcept { return {}; }
    void return_void() noexcept {}
    void unhandled_exception() { error = std::current_exception(); }
  };

  ModelExecution() = default;
  explicit ModelExecution(std::coroutine_handle<promise_type> handle)
      : handle_(handle) {}
  ModelExecution(ModelExecution&& other) noexcept
      : handle_(std::exchange(other.handle_, {})) {}
  ModelExecution& operator=(ModelExecution&& other) noexcept {
    if (this != &other) {
      if (handle_) handle_.destroy();
      handle_ = std::exchange(other.handle_, {});
    }
    return *this;
  }
  ModelExecution(const ModelExecution&) = delete;
  ModelExecution& operator=(const ModelExecution&) = delete;
  ~ModelExecution() {
    if (handle_) handle_.destroy();
  }

  bool valid() const { return static_cast<bool>(handle_); }
  bool done() const { return handle_.done(); }

  // Run to the next suspension point (observe barrier) or to completion.
  // Rethrows any exception the program body raised.
  void resume();

 private:
  std::coroutine_handle<promise_type> handle_;
};

// A probabilistic program: a coroutine body over an InferenceContext. The
// body must be deterministic given the values returned by the context's
// draw calls, and must pass a fixed number of observes on every path (the
// count may be declared up front for early error checking).
struct ModelProgram {
  std::function<ModelExecution(InferenceContext&)> body;
  std::optional<int> declared_observes;
  std::string name;
};

// The interface a program body sees, plus the recording machinery behind it.
// Every random draw goes through here and lands in the trace; when a replay
// prefix is armed, draws return the recorded values instead of fresh ones.
class InferenceContext {
 public:
  struct Options {
    bool full_precision_predicts = false;  // %.17g instead of %f
  };

  InferenceContext(RngStream stream, Options opts)
      : stream_(stream), opts_(opts) {}
  explicit InferenceContext(RngStream stream)
      : InferenceContext(stream, Options()) {}

  InferenceContext(const InferenceContext&) = delete;
  InferenceContext& operator=(const InferenceContext&) = delete;

  // --- program-facing API -------------------------------------------------
  double normal(double mu, double var);
  double gamma(double shape, double rate);
  int discrete(std::span<const double> probs);

  struct [[nodiscard]] ObservePoint {
    bool await_ready() const noexcept { return false; }
    void await_suspend(std::coroutine_handle<>) const noexcept {}
    void await_resume() const noexcept {}
  };

  // Score one observation: record lnp as this observe's log-weight increment
  // and suspend at the barrier. Use as `co_await ctx.observe(lnp)`. lnp of
  // -inf (impossible data) is legal; NaN or +inf is a contract violation.
  ObservePoint observe(double lnp);

  void predict(const std::string& name, double value);
  void predict(const std::string& name, long long value);
  void predict(const std::string& name, int value) {
    predict(name, static_cast<long long>(value));
  }

  // --- engine-facing API ----------------------------------------------------
  const ExecutionTrace& trace() const { return trace_; }
  ExecutionTrace take_trace() { return std::move(trace_); }
  int observes_passed() const { return trace_.observe_count; }
  double last_increment() const { return last_increment_; }

  const RngStream& stream() const { return stream_; }
  void rekey_stream(const RngStream& stream) { stream_ = stream; }

  // Arm replay of a recorded choice prefix: subsequent draws return the
  // recorded values (validating the program follows the same path) until the
  // prefix is exhausted, then fresh draws resume from the stream.
  void arm_replay(std::vector<ChoiceRecord> prefix);
  bool replay_exhausted() const { return replay_cursor_ >= replay_.size(); }
  std::size_t replay_consumed() const { return replay_cursor_; }

 private:
  template <typename Fresh>
  double next_value(DistId id, std::span<const double> params, Fresh&& fresh);
  void add_predict(const std::string& name, std::string rendered);

  ExecutionTrace trace_;
  RngStream stream_;
  Options opts_;
  double last_increment_ = 0.0;
  std::vector<ChoiceRecord> replay_;
  std::size_t replay_cursor_ = 0;
};

}  // namespace tracemc
