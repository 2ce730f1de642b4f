#pragma once

#include <array>
#include <cstdint>

#include "allocsim/math.hpp"

namespace allocsim {

// splitmix64; used to expand seeds and to fold indices into stream keys.
struct SplitMix64 {
  std::uint64_t state;

  constexpr explicit SplitMix64(std::uint64_t seed) noexcept : state(seed) {}

  constexpr std::uint64_t next() noexcept {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
};

// Order-sensitive fold of one index into a running seed, so (a,b) and (b,a)
// land on different streams.
constexpr std::uint64_t seed_fold(std::uint64_t h, std::uint64_t v) noexcept {
  return SplitMix64(h ^ (0x9e3779b97f4a7c15ull + v + (h << 6) + (h >> 2))).next();
}

// Stream key for one replication. Every (design, hypothesis, replication)
// cell gets its own stream from the master seed, which is what makes results
// independent of scheduling: workers never share a stream.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t design,
                                    std::uint64_t hypothesis,
                                    std::uint64_t replication) noexcept {
  return seed_fold(seed_fold(seed_fold(master, design), hypothesis), replication);
}

// xoshiro256++ with splitmix64 state expansion. Fixed algorithm (not the
// standard library engines) so identical seeds replay identical trials on any
// platform or toolchain.
class Xoshiro256pp {
 public:
  constexpr explicit Xoshiro256pp(std::uint64_t seed) noexcept : s_{} {
    SplitMix64 sm(seed);
    for (auto& w : s_) w = sm.next();
  }

  constexpr std::uint64_t next() noexcept {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // [0,1), 53-bit resolution.
  double uniform01() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // (0,1); safe to push through norm_quantile.
  double uniform_open() noexcept {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  bool bernoulli(double p) noexcept { return uniform01() < p; }

  double normal(double mu, double sigma) { return mu + sigma * norm_quantile(uniform_open()); }

  // Uniform integer in [0, n); rejection keeps it exact. n >= 1.
  std::uint64_t below(std::uint64_t n) noexcept {
    const std::uint64_t limit = ~0ull - ~0ull % n;
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % n;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> s_;
};

}
