#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace certamp {

// Counter-based generator: output i is splitmix64(key + i * golden).
// fork() derives an independent stream without touching this one.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0, std::uint64_t stream = 0)
      : key_(mix(seed ^ mix(stream + 0x6a09e667f3bcc909ULL))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next(); }

  std::uint64_t next() { return mix(key_ + (ctr_++) * kGolden); }

  Rng fork(std::uint64_t stream) const {
    Rng r;
    r.key_ = mix(key_ ^ mix(stream * 0xd1342543de82ef95ULL + 0x9e3779b97f4a7c15ULL));
    return r;
  }

  std::uint64_t counter() const { return ctr_; }

  // [0, 1) with 53 random bits
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  // (0, 1)
  double uniform_open() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

  // Lemire's nearly-divisionless bounded integer, result in [0, bound)
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) return 0;
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < bound) {
      std::uint64_t t = (0 - bound) % bound;
      while (lo < t) {
        m = static_cast<unsigned __int128>(next()) * bound;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  bool bernoulli(double p) { return uniform() < p; }
  double exponential() { return -std::log(uniform_open()); }
  // Gamma(2, 1) as a sum of two unit exponentials
  double gamma2() { return -std::log(uniform_open() * uniform_open()); }

  // Box-Muller, one value per call so the stream position is predictable
  double normal() {
    double u1 = uniform_open(), u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t key_ = 0;
  std::uint64_t ctr_ = 0;
};

}  // namespace certamp
