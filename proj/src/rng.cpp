#include "tracemc/rng.hpp"

namespace tracemc {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t mix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t idx) {
  return mix64(mix64(root) ^ mix64(idx * kGolden + 1));
}

RngStream::RngStream(std::uint64_t seed) : key_(mix64(mix64(seed))) {}

std::uint64_t RngStream::raw() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double RngStream::uniform() {
  // 53 mantissa bits centered in (0,1): never exactly 0 or 1.
  return (static_cast<double>(raw() >> 11) + 0.5) * 0x1.0p-53;
}

RngStream RngStream::split(std::uint64_t key) const {
  RngStream child;
  child.key_ = mix64(key_ ^ mix64(counter_ + key * kGolden));
  child.counter_ = 0;
  return child;
}

}  // namespace tracemc
