#pragma once

#include <cstdint>
#include <limits>

#include <boost/random/gamma_distribution.hpp>
#include <boost/random/normal_distribution.hpp>

namespace wald {

/// SplitMix64 step: advances `state` and returns the next output.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Mixes a (seed, stream) pair into one 64-bit stream key.
std::uint64_t stream_key(std::uint64_t seed, std::uint64_t stream) noexcept;

/// FNV-1a hash of a string, used to derive per-check seeds from names.
std::uint64_t fnv1a(const char* s) noexcept;

/// xoshiro256++ engine. Satisfies UniformRandomBitGenerator.
///
/// Streams are addressed by (seed, stream index); the 256-bit state is filled
/// from SplitMix64 started at stream_key(seed, stream). This is the only
/// generator used anywhere in the library.
class Xoshiro256pp {
 public:
  using result_type = std::uint64_t;

  Xoshiro256pp(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
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

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

/// Random variates used by all samplers.
///
/// Normals come from Boost.Random's ziggurat normal_distribution; gamma
/// variates from Boost.Random's gamma_distribution. Uniforms use the top 53
/// bits of one engine output and lie in [0, 1).
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream = 0) : engine_(seed, stream) {}

  double normal() { return normal_(engine_); }

  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform on (0, 1): never returns 0.
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double gamma(double shape) {
    boost::random::gamma_distribution<double> g(shape, 1.0);
    return g(engine_);
  }

  double chi_square(double df) { return 2.0 * gamma(0.5 * df); }

  double beta(double a, double b) {
    const double x = gamma(a);
    const double y = gamma(b);
    return x / (x + y);
  }

  Xoshiro256pp& engine() noexcept { return engine_; }

 private:
  Xoshiro256pp engine_;
  boost::random::normal_distribution<double> normal_;
};

}  // namespace wald
