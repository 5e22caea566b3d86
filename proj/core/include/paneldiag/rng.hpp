#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace paneldiag {

// splitmix64 step. Used only to expand seeds into generator state.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// xoshiro256++ with splitmix64 seeding. Chosen over <random> engines because
// its output is a pure function of the seed on every platform and toolchain,
// which the byte-identical-rerun guarantee depends on.
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64_next(sm);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform01() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Box-Muller, cosine branch only: consumes exactly two uniforms per draw,
  // keeps no cached spare, so the stream position is a pure function of the
  // number of draws taken.
  double normal(double mean, double sd) {
    constexpr double two_pi = 6.283185307179586476925286766559;
    const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
    const double u2 = uniform01();
    return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_;
};

// Named substreams of one seed. Each stream is an independently seeded
// generator, so consuming one stream never shifts another; in particular
// contamination draws cannot perturb the base panel.
enum class RngStream : std::uint64_t {
  UnitEffect = 1,
  Regressor = 2,
  Noise = 3,
  Contamination = 4,
};

inline Xoshiro256pp substream(std::uint64_t seed, RngStream stream) {
  std::uint64_t sm = seed;
  const std::uint64_t base = splitmix64_next(sm);
  const std::uint64_t tag =
      static_cast<std::uint64_t>(stream) * 0xbf58476d1ce4e5b9ULL;
  return Xoshiro256pp(base ^ tag);
}

}  // namespace paneldiag
