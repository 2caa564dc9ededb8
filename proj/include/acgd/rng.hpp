#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace acgd {

inline uint64_t splitmix64(uint64_t& x) {
  x += 0x9e3779b97f4a7c15ull;
  uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// xoshiro256++ with splitmix64 seeding. The standard library engines are
// portable but its distributions are not; metrics files must reproduce
// byte-for-byte across toolchains, so all sampling goes through this class.
// State is four words, which keeps checkpoints and snapshots trivial.
class Rng {
 public:
  Rng() : Rng(0, 0) {}

  explicit Rng(uint64_t seed, uint64_t stream = 0) {
    uint64_t x = seed ^ (0x6a09e667f3bcc909ull + stream * 0x9e3779b97f4a7c15ull);
    for (auto& w : s_) w = splitmix64(x);
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Unbiased draw from {0, ..., n-1} via rejection.
  uint64_t uniform_int(uint64_t n) {
    const uint64_t threshold = (-n) % n;
    for (;;) {
      uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // Standard normal via Box-Muller. No spare is cached so the engine state
  // alone determines the stream.
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    // guard against log(0)
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

  double normal(double mu, double sigma) { return mu + sigma * normal(); }

  std::array<uint64_t, 4> state() const { return {s_[0], s_[1], s_[2], s_[3]}; }
  void set_state(const std::array<uint64_t, 4>& s) {
    for (int i = 0; i < 4; ++i) s_[i] = s[i];
  }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  uint64_t s_[4];
};

// Stateless hash-indexed standard normal, used for observation noise: the
// value depends only on (key, index), so recomputing an observation from a
// restored snapshot reproduces it bit-identically.
inline double hashed_normal(uint64_t key, uint64_t index) {
  uint64_t x = key ^ (index * 0xd1342543de82ef95ull);
  uint64_t a = splitmix64(x);
  uint64_t b = splitmix64(x);
  double u1 = static_cast<double>(a >> 11) * 0x1.0p-53;
  double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
}

}  // namespace acgd
