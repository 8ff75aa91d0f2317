#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace paraconvex {

/// Derives an independent 64-bit stream id from a seed and a list of tags
/// (splitmix64 finalizer folded over the tags). Streams keyed this way stay
/// fixed when unrelated sampling budgets change, which keeps sampled sups
/// monotone in the budget and runs bit-reproducible.
inline std::uint64_t stream_id(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) noexcept {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(seed);
  for (std::uint64_t t : tags) h = mix(h ^ mix(t));
  return h;
}

inline std::uint64_t tag_of(double v) noexcept { return std::bit_cast<std::uint64_t>(v); }

class Rng {
 public:
  explicit Rng(std::uint64_t stream) : engine_(stream) {}

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  std::size_t below(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }
  double exponential() { return std::exponential_distribution<double>(1.0)(engine_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace paraconvex
