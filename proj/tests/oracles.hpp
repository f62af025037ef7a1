#pragma once

// Independent reference evaluations shared by the unit tests and the
// acceptance runner. Nothing here calls into the library's numerics.

#include <cmath>
#include <cstdint>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using mp = boost::multiprecision::cpp_bin_float_50;

struct EatConstantsMp {
  double V = 0, c = 0, c_prime = 0, K = 0, lg = 0;
};

// Second-order EAT constants evaluated in 50-digit arithmetic. The output
// register of a round is classical with d_A = 2^{m n}; the exponent of K uses
// the round count L.
inline EatConstantsMp eat_constants_mp(double var, double w, int n, double m, std::int64_t L, double eps_smooth,
                                       double eps_accept) {
  using boost::multiprecision::exp;
  using boost::multiprecision::log;
  using boost::multiprecision::pow;
  using boost::multiprecision::sqrt;
  const mp ln2 = log(mp(2));
  auto log2 = [&](const mp& x) { return log(x) / ln2; };
  const mp es(eps_smooth), ea(eps_accept);
  const mp lg = log2(mp(2) / (es * es * ea * ea));
  const mp dA = pow(mp(2), mp(m) * n);
  const mp V = sqrt(mp(var) + 2) + log2(2 * dA + 1);
  const mp Lm(static_cast<double>(L));
  const mp c = V * sqrt(2 * ln2 * lg);
  const mp K = 4 * pow(mp(w) + 1, 3) * pow(mp(2), mp(w) * sqrt(2 * lg) / (V * sqrt(Lm * ln2)));
  const mp cp = 2 * lg / (V * V * ln2) * K;
  return {static_cast<double>(V), static_cast<double>(c), static_cast<double>(cp), static_cast<double>(K),
          static_cast<double>(lg)};
}

// T (4 / 2^{n/2} + sqrt(2 (1 - cos(pi / 2k)^k)) + 2 / sqrt(l + 1)) in 50 digits.
inline double eps_prime_mp(double T, int n, double k, double l) {
  using boost::multiprecision::cos;
  using boost::multiprecision::pow;
  using boost::multiprecision::sqrt;
  const mp pi = boost::math::constants::pi<mp>();
  mp v = 4 / pow(mp(2), mp(n) / 2) + sqrt(2 * (1 - pow(cos(pi / (2 * mp(k))), mp(k)))) + 2 / sqrt(mp(l) + 1);
  return static_cast<double>(mp(T) * v);
}

// Kolmogorov survival function by its alternating series.
inline double kolmogorov_sf_mp(double lambda) {
  if (lambda <= 0) return 1.0;
  mp s = 0, l2 = mp(lambda) * lambda;
  for (int k = 1; k < 200; ++k) {
    mp t = boost::multiprecision::exp(-2 * mp(k) * k * l2);
    s += (k % 2 ? t : mp(-t));
    if (t < mp(1e-40)) break;
  }
  return static_cast<double>(2 * s);
}

// Weak-source-first two-source rows: (beta, alpha) for n1 = 86,225,218 bits of
// weak source, n2 = 1,513,678 quantum bits, m = 4093, eps_ts = eps_2 = 1e-8.
struct RazRow {
  double beta, alpha;
};
inline constexpr RazRow kWeakFirstRows[] = {
    {0.134, 0.532}, {0.479, 0.509}, {0.108, 0.540}, {0.458, 0.510},
    {0.509, 0.509}, {0.092, 0.548}, {0.137, 0.532}, {0.025, 0.710},
};
// Quantum-first row quoted with the restricted-model rate.
inline constexpr RazRow kQuantumFirstRow = {0.528, 0.409};

inline constexpr std::int64_t kWeakFirstN1 = 86'225'218;
inline constexpr std::int64_t kQuantumBits = 1'513'664;  // 23,651 x 64
inline constexpr std::int64_t kQuantumPadded = 1'513'678;

}  // namespace oracle
