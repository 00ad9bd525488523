#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

namespace gempart {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// xoshiro256** seeded through SplitMix64. Satisfies
/// UniformRandomBitGenerator so it plugs into <random> distributions.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 42);

  /// Generator for block `block` of job `job` under master seed `seed`.
  /// Independent of how blocks are scheduled across threads.
  static Rng stream(std::uint64_t seed, std::uint64_t job, std::uint64_t block);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return next(); }
  result_type next();

  /// A new generator seeded from this one's output; advances this one.
  Rng split();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  double gamma(double shape);
  double beta(double a, double b);

 private:
  std::array<std::uint64_t, 4> s_{};
};

/// FNV-1a, used to derive per-check job ids from their names.
std::uint64_t hash_name(std::string_view name);

}  // namespace gempart
