#pragma once

#include <cstdint>

namespace tracemc {

// splitmix64 finalizer (Steele et al.). Also used standalone to derive seeds.
std::uint64_t mix64(std::uint64_t x);

// Derive the idx-th child seed of a root seed. Used for particle launch
// seeds, per-iteration sweep seeds, and any other fan-out from one seed.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t idx);

// Counter-based random stream: state is (key, counter) and draw i is a hash
// of the pair, so copies are cheap value copies and two streams with equal
// state yield equal sequences. split(k) keys a child stream on the parent's
// current state plus k, which makes child sequences reproducible under a
// fixed root seed no matter how execution is scheduled across threads.
class RngStream {
 public:
  RngStream() = default;
  explicit RngStream(std::uint64_t seed);

  // 64 uniform random bits.
  std::uint64_t raw();

  // Uniform draw in the open interval (0, 1).
  double uniform();

  // Child stream keyed on (current state, key). Does not advance *this.
  RngStream split(std::uint64_t key) const;

  std::uint64_t key() const { return key_; }
  std::uint64_t draws() const { return counter_; }

  friend bool operator==(const RngStream&, const RngStream&) = default;

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

}  // namespace tracemc
