#pragma once

#include <cmath>
#include <cstdint>

namespace bandit {

// Seedable counter-stream PRNG: xoshiro256++ state derived from
// (seed, stream_id) through splitmix64. The generator is pure integer
// arithmetic, so a given (seed, stream_id, draw index) yields the same
// sample on every platform; Gaussian draws go through Box-Muller and are
// reproducible up to libm's cos/log rounding.
class RngStream {
 public:
  RngStream(uint64_t seed, uint64_t stream_id) : seed_(seed), stream_(stream_id) {
    // splitmix64 walk: one step for the seed, one per stream id unit is too
    // slow, so fold the stream id into the initial state instead.
    uint64_t x = seed + 0x9E3779B97F4A7C15ULL * (stream_id + 1);
    for (int i = 0; i < 4; ++i) s_[i] = splitmix(x);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
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

  // Uniform on [0, 1), 53 random bits.
  double next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe as a log() argument.
  double next_uniform_pos() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; consumes exactly two uniforms per draw.
  double next_gaussian() {
    const double u1 = next_uniform_pos();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return r * std::cos(6.28318530717958647692 * u2);
  }

  uint64_t seed() const { return seed_; }
  uint64_t stream_id() const { return stream_; }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  static uint64_t splitmix(uint64_t& x) {
    x += 0x9E3779B97F4A7C15ULL;
    uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  uint64_t seed_;
  uint64_t stream_;
  uint64_t s_[4];
};

}  // namespace bandit
