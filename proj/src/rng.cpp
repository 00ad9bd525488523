#include "gempart/rng.hpp"

#include <random>

namespace gempart {

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed) {
  SplitMix64 sm(seed);
  for (auto& w : s_) w = sm.next();
}

Rng Rng::stream(std::uint64_t seed, std::uint64_t job, std::uint64_t block) {
  SplitMix64 sm(seed);
  std::uint64_t h = sm.next();
  h ^= job + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
  SplitMix64 sm2(h);
  h = sm2.next() ^ (block * 0xD1B54A32D192ED03ULL);
  return Rng(SplitMix64(h).next());
}

std::uint64_t Rng::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

Rng Rng::split() { return Rng(next() ^ 0x6A09E667F3BCC909ULL); }

std::uint64_t Rng::below(std::uint64_t n) {
  // Lemire's nearly-divisionless method
  __uint128_t m = static_cast<__uint128_t>(next()) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = -n % n;
    while (low < threshold) {
      m = static_cast<__uint128_t>(next()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double Rng::gamma(double shape) {
  std::gamma_distribution<double> g(shape, 1.0);
  return g(*this);
}

double Rng::beta(double a, double b) {
  for (;;) {
    const double x = gamma(a);
    const double y = gamma(b);
    if (x + y > 0.0) return x / (x + y);
  }
}

std::uint64_t hash_name(std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : name) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace gempart
