#include "tracemc/particle.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace tracemc {

const char* particle_status_name(ParticleStatus s) {
  switch (s) {
    case ParticleStatus::at_barrier: return "at_barrier";
    case ParticleStatus::completed: return "completed";
    case ParticleStatus::killed: return "killed";
    case ParticleStatus::failed: return "failed";
  }
  return "?";
}

struct ParticleHandle::Impl {
  // Owned copy: a handle must not dangle when the caller's ModelProgram was a
  // temporary. The copy is cheap (a std::function and a name).
  ModelProgram model;
  Options opts;
  InferenceContext ctx;
  ModelExecution exec;
  ParticleStatus status = ParticleStatus::at_barrier;
  double cum_logw = 0.0;

  Impl(const ModelProgram& m, RngStream stream, Options o)
      : model(m),
        opts(o),
        ctx(stream, InferenceContext::Options{o.full_precision_predicts}) {}
};

ParticleHandle::ParticleHandle() noexcept = default;
ParticleHandle::ParticleHandle(ParticleHandle&&) noexcept = default;
ParticleHandle& ParticleHandle::operator=(ParticleHandle&&) noexcept = default;
ParticleHandle::~ParticleHandle() = default;

ParticleHandle::Impl& ParticleHandle::require_live(const char* op) const {
  if (!impl_) {
    throw ModelContractViolation(std::string(op) +
                                 ": particle has been killed");
  }
  return *impl_;
}

ParticleHandle ParticleHandle::start(const ModelProgram& model,
                                     std::uint64_t seed, Options opts) {
  if (!model.body) {
    throw std::invalid_argument("start: model has no body");
  }
  ParticleHandle p;
  p.impl_ = std::make_unique<Impl>(model, RngStream(seed), opts);
  p.impl_->exec = p.impl_->model.body(p.impl_->ctx);
  return p;
}

ParticleHandle ParticleHandle::replay(const ModelProgram& model,
                                      std::span<const ChoiceRecord> prefix,
                                      int observes, RngStream stream,
                                      Options opts) {
  if (!model.body) {
    throw std::invalid_argument("replay: model has no body");
  }
  if (observes < 0) {
    throw std::invalid_argument("replay: negative observe target");
  }
  ParticleHandle p;
  p.impl_ = std::make_unique<Impl>(model, stream, opts);
  p.impl_->exec = p.impl_->model.body(p.impl_->ctx);
  p.impl_->ctx.arm_replay({prefix.begin(), prefix.end()});
  while (p.impl_->ctx.observes_passed() < observes) {
    const BarrierEvent ev = p.run_to_barrier();
    if (ev.completed) {
      p.impl_->status = ParticleStatus::failed;
      throw ModelContractViolation(
          "replay: program completed after " + std::to_string(ev.observe_index) +
          " observes, expected to reach barrier " + std::to_string(observes));
    }
  }
  // At the barrier every choice so far must have come from the prefix; fresh
  // draws here would mean the prefix was not a checkpoint of this program.
  const std::size_t fed = p.impl_->ctx.replay_consumed();
  if (p.impl_->ctx.trace().choices.size() != fed) {
    p.impl_->status = ParticleStatus::failed;
    throw ModelContractViolation(
        "replay: prefix of " + std::to_string(prefix.size()) +
        " choices is shorter than the checkpoint at barrier " +
        std::to_string(observes));
  }
  return p;
}

BarrierEvent ParticleHandle::run_to_barrier() {
  Impl& im = require_live("run_to_barrier");
  if (im.status != ParticleStatus::at_barrier) {
    throw ModelContractViolation(
        std::string("run_to_barrier on a ") + particle_status_name(im.status) +
        " particle");
  }
  const int before = im.ctx.observes_passed();
  try {
    im.exec.resume();
  } catch (...) {
    im.status = ParticleStatus::failed;
    throw;
  }
  if (im.exec.done()) {
    im.status = ParticleStatus::completed;
    if (im.model.declared_observes &&
        im.ctx.observes_passed() != *im.model.declared_observes) {
      im.status = ParticleStatus::failed;
      throw ModelContractViolation(
          "model '" + im.model.name + "' completed after " +
          std::to_string(im.ctx.observes_passed()) + " observes, declared " +
          std::to_string(*im.model.declared_observes));
    }
    return {true, im.ctx.observes_passed(), 0.0};
  }
  if (im.ctx.observes_passed() != before + 1) {
    im.status = ParticleStatus::failed;
    throw ModelContractViolation(
        "model '" + im.model.name +
        "' suspended without co_awaiting exactly one observe");
  }
  const double inc = im.ctx.last_increment();
  im.cum_logw += inc;
  return {false, im.ctx.observes_passed(), inc};
}

std::vector<ParticleHandle> ParticleHandle::branch(
    int count, std::span<const std::uint64_t> child_seeds) && {
  Impl& im = require_live("branch");
  if (im.status != ParticleStatus::at_barrier) {
    throw ModelContractViolation(std::string("branch on a ") +
                                 particle_status_name(im.status) +
                                 " particle");
  }
  if (count < 1 || child_seeds.size() != static_cast<std::size_t>(count)) {
    throw std::invalid_argument("branch: need one seed per child");
  }
  const ModelProgram& model = im.model;
  const Options opts = im.opts;
  const RngStream parent_stream = im.ctx.stream();
  const int observes = im.ctx.observes_passed();
  const double cum = im.cum_logw;
  ExecutionTrace snapshot;
  if (count > 1) snapshot = im.ctx.trace();

  std::vector<ParticleHandle> children;
  children.reserve(count);
  im.ctx.rekey_stream(parent_stream.split(child_seeds[0]));
  children.push_back(std::move(*this));
  for (int i = 1; i < count; ++i) {
    ParticleHandle child = replay(model, snapshot.choices, observes,
                                  parent_stream.split(child_seeds[i]), opts);
    if (child.trace() != snapshot) {
      throw ModelContractViolation(
          "branch: replay did not reproduce the parent trace; the program is "
          "not deterministic given its recorded choices");
    }
    child.impl_->cum_logw = cum;
    children.push_back(std::move(child));
  }
  return children;
}

void ParticleHandle::kill() { impl_.reset(); }

ParticleStatus ParticleHandle::status() const {
  return impl_ ? impl_->status : ParticleStatus::killed;
}

int ParticleHandle::observes_passed() const {
  return require_live("observes_passed").ctx.observes_passed();
}

const ExecutionTrace& ParticleHandle::trace() const {
  return require_live("trace").ctx.trace();
}

ExecutionTrace ParticleHandle::take_trace() {
  Impl& im = require_live("take_trace");
  if (im.status != ParticleStatus::completed) {
    throw ModelContractViolation(std::string("take_trace on a ") +
                                 particle_status_name(im.status) +
                                 " particle");
  }
  ExecutionTrace t = im.ctx.take_trace();
  impl_.reset();
  return t;
}

double ParticleHandle::cum_logw() const {
  return require_live("cum_logw").cum_logw;
}

void ParticleHandle::set_cum_logw(double value) {
  require_live("set_cum_logw").cum_logw = value;
}

const RngStream& ParticleHandle::stream() const {
  return require_live("stream").ctx.stream();
}

void ParticleHandle::rekey_stream(const RngStream& stream) {
  require_live("rekey_stream").ctx.rekey_stream(stream);
}

}  // namespace tracemc
