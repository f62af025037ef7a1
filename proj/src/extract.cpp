#include "certamp/extract.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "certamp/errors.hpp"
#include "certamp/gf2.hpp"

namespace certamp {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return std::uint64_t((unsigned __int128)a * b % m);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  for (; e; e >>= 1, b = mulmod(b, b, m))
    if (e & 1) r = mulmod(r, b, m);
  return r;
}

gf2::Poly to_poly(const BitBlock& b) {
  gf2::Poly p(b.words().begin(), b.words().end());
  gf2::trim(p);
  return p;
}

BitBlock from_poly(const gf2::Poly& p, std::size_t m, Provenance tag) {
  BitBlock out(m, tag);
  auto& w = out.words();
  for (std::size_t i = 0; i < w.size() && i < p.size(); ++i) w[i] = p[i];
  out.clear_tail();
  return out;
}

double log2_sum_exp2(double a, double b) {
  double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log2(1.0 + std::exp2(lo - hi));
}

}  // namespace

bool is_prime(std::uint64_t d) {
  if (d < 2) return false;
  for (std::uint64_t q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (d % q == 0) return d == q;
  }
  std::uint64_t r = d - 1;
  int s = 0;
  while (!(r & 1)) {
    r >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = powmod(a, r, d);
    if (x == 1 || x == d - 1) continue;
    bool composite = true;
    for (int i = 1; i < s && composite; ++i) {
      x = mulmod(x, x, d);
      if (x == d - 1) composite = false;
    }
    if (composite) return false;
  }
  return true;
}

bool has_primitive_root_2(std::uint64_t d) {
  if (!is_prime(d) || d < 3) return false;
  std::uint64_t phi = d - 1, rest = phi;
  for (std::uint64_t q = 2; q * q <= rest; ++q) {
    if (rest % q) continue;
    if (powmod(2, phi / q, d) == 1) return false;
    while (rest % q == 0) rest /= q;
  }
  if (rest > 1 && powmod(2, phi / rest, d) == 1) return false;
  return true;
}

nlohmann::json CirculantSpec::to_json() const {
  return {{"n_in", n_in}, {"d_seed", d_seed}, {"m", m}, {"k", k}, {"eps_seeded", eps_seeded}};
}

CirculantSpec circulant_params(std::size_t n_in, double k, double eps_seeded) {
  if (!(eps_seeded > 0 && eps_seeded <= 1)) throw std::invalid_argument("circulant: eps outside (0,1]");
  if (n_in == 0) throw std::invalid_argument("circulant: empty input");
  const std::size_t d = n_in + 1;
  if (!has_primitive_root_2(d)) throw Infeasible("circulant: n_in + 1 is not a prime with primitive root 2");
  double mf = std::floor(k - 2 * std::log2(1 / eps_seeded));
  if (mf <= 0) throw Infeasible("circulant: k <= 2 log2(1/eps), no output");
  CirculantSpec s;
  s.n_in = n_in;
  s.d_seed = d;
  s.m = std::min<std::size_t>(std::size_t(mf), n_in);
  s.k = k;
  s.eps_seeded = eps_seeded;
  return s;
}

BitBlock circulant_extract(const BitBlock& source, const BitBlock& seed, std::size_t m) {
  const std::size_t d = source.size() + 1;
  if (seed.size() != d) throw std::invalid_argument("circulant_extract: seed must have n_in + 1 bits");
  if (m > source.size()) throw std::invalid_argument("circulant_extract: m exceeds input length");
  return from_poly(gf2::cyclic_mul(to_poly(seed), to_poly(source), d), m, Provenance::extracted);
}

std::int64_t seeded_output_len(double alpha, std::size_t input_len, double eps_seeded) {
  if (!(alpha > 0 && alpha <= 1)) throw std::invalid_argument("seeded_output_len: alpha outside (0,1]");
  if (!(eps_seeded > 0 && eps_seeded <= 1)) throw std::invalid_argument("seeded_output_len: eps outside (0,1]");
  auto m = std::int64_t(std::floor(double(input_len) * alpha + 2 * std::log2(eps_seeded)));
  if (m <= 0) throw Infeasible("seeded_output_len: nonpositive output length");
  return m;
}

// ---- Raz --------------------------------------------------------------------

nlohmann::json RazSpec::to_json() const {
  return {{"n1", n1},
          {"n2", n2},
          {"m", m},
          {"k1_avail", k1_avail},
          {"k2_avail", k2_avail},
          {"k1", k1},
          {"k2", k2},
          {"l", l},
          {"log2_p", log2_p},
          {"log2_gamma", log2_gamma},
          {"log2_gamma_bound", log2_gamma_bound},
          {"log2_eps_ts", log2_eps_ts},
          {"eps_ts", eps_ts}};
}

namespace {

struct GammaBest {
  double log2_gamma = INFINITY;
  std::int64_t l = 0;
  double log2_p = 0;
};

// min over (l, even p) of log2 of 2^{(n1-k1)/p} [2^{(l - n1/2 + 1)/p} + p 2^{-k2/2}].
// For a given p the smallest admissible l, ceil(log2(p m)), is optimal.
GammaBest best_gamma(std::int64_t n1, double k1, std::int64_t n2, double k2, std::int64_t m) {
  GammaBest best;
  const double lmax = std::floor(double(n2) + std::log2(double(n1) / 2));
  const double lm = std::log2(double(m));
  // Past p ~ 2^8 n1 the (n1 - k1)/p factor is below 2^{-8} and larger p only grows p 2^{-k2/2}.
  const double Pcap = std::min(lmax - lm, std::log2(double(n1)) + 8);
  auto eval = [&](double P) {
    std::int64_t l = std::int64_t(std::ceil(P + lm - 1e-12));
    if (double(l) > lmax) return;
    double inv_p = std::exp2(-P);
    double v = (double(n1) - k1) * inv_p + log2_sum_exp2((double(l) - double(n1) / 2 + 1) * inv_p, P - k2 / 2);
    if (v < best.log2_gamma) best = {v, l, P};
  };
  for (double P = 1; P <= Pcap; P += 1.0 / 64) {
    if (P < 53) {
      // nearest even integers around 2^P
      double p = std::exp2(P);
      double lo = 2 * std::floor(p / 2), hi = lo + 2;
      if (lo >= 2) eval(std::log2(lo));
      eval(std::log2(hi));
    } else {
      eval(std::round(P));
    }
  }
  return best;
}

}  // namespace

std::optional<RazSpec> raz_feasible(std::int64_t n1, double k1, std::int64_t n2, double k2, std::int64_t m,
                                    double eps_target) {
  if (n1 <= 0 || n1 % 2) throw std::invalid_argument("raz: n1 must be positive and even");
  if (n2 <= 0 || n2 > n1 / 2) throw std::invalid_argument("raz: need 0 < n2 <= n1/2");
  if (m <= 0 || m > n1 / 2) throw std::invalid_argument("raz: need 0 < m <= n1/2");
  if (!(eps_target > 0)) throw std::invalid_argument("raz: eps_target must be positive");
  // g = log2 gamma; extractor parameters k_i = k_i' - 1 - 2 log2(1/gamma)
  auto feasible = [&](double g, GammaBest* out) {
    GammaBest b = best_gamma(n1, k1 - 1 + 2 * g, n2, k2 - 1 + 2 * g, m);
    if (out) *out = b;
    return b.log2_gamma <= g;
  };
  if (!feasible(0.0, nullptr)) return std::nullopt;
  double lo = -std::max(k1, k2) - 2, hi = 0;
  if (feasible(lo, nullptr)) hi = lo;
  for (int it = 0; it < 80 && hi - lo > 1e-9 * std::max(1.0, -lo); ++it) {
    double mid = 0.5 * (lo + hi);
    (feasible(mid, nullptr) ? hi : lo) = mid;
  }
  GammaBest b;
  feasible(hi, &b);
  RazSpec s;
  s.n1 = n1;
  s.n2 = n2;
  s.m = m;
  s.k1_avail = k1;
  s.k2_avail = k2;
  s.log2_gamma = hi;
  s.k1 = k1 - 1 + 2 * hi;
  s.k2 = k2 - 1 + 2 * hi;
  s.l = b.l;
  s.log2_p = b.log2_p;
  s.log2_gamma_bound = b.log2_gamma;
  s.log2_eps_ts = 0.75 * double(m) + 0.5 * (std::log2(1.5) + hi);
  s.eps_ts = std::exp2(s.log2_eps_ts);
  if (s.log2_eps_ts > std::log2(eps_target)) return std::nullopt;
  return s;
}

namespace {

bool layout_ok(double alpha, double beta, const RazLayout& L) {
  const double kq = beta * double(L.quantum_bits) - std::log2(1 / L.eps_2);
  if (L.quantum_first) return raz_feasible(L.n1, kq, L.n2, alpha * double(L.n2), L.m, L.eps_ts).has_value();
  return raz_feasible(L.n1, alpha * double(L.n1), L.n2, kq, L.m, L.eps_ts).has_value();
}

}  // namespace

std::optional<double> required_alpha(double beta, const RazLayout& layout) {
  if (!layout_ok(1.0, beta, layout)) return std::nullopt;
  double lo = 0, hi = 1;
  for (int it = 0; it < 40; ++it) {
    double mid = 0.5 * (lo + hi);
    (layout_ok(mid, beta, layout) ? hi : lo) = mid;
  }
  return hi;
}

std::optional<double> required_beta(double alpha, const RazLayout& layout) {
  if (!layout_ok(alpha, 1.0, layout)) return std::nullopt;
  double lo = 0, hi = 1;
  for (int it = 0; it < 40; ++it) {
    double mid = 0.5 * (lo + hi);
    (layout_ok(alpha, mid, layout) ? hi : lo) = mid;
  }
  return hi;
}

BitBlock two_source_extract(const BitBlock& x1, const BitBlock& x2, std::size_t m) {
  const std::size_t n1 = x1.size();
  if (n1 == 0 || n1 % 2) throw std::invalid_argument("two_source_extract: |x1| must be positive and even");
  const std::size_t deg = n1 / 2;
  if (x2.size() > deg) throw std::invalid_argument("two_source_extract: |x2| exceeds |x1|/2");
  if (m == 0 || m > deg) throw std::invalid_argument("two_source_extract: need 0 < m <= |x1|/2");
  const int k = gf2::find_trinomial(int(deg));
  if (k < 0) throw Infeasible("two_source_extract: no irreducible trinomial of degree " + std::to_string(deg));
  gf2::Poly a = to_poly(x1.slice(0, deg)), b = to_poly(x1.slice(deg, deg));
  gf2::Poly prod = gf2::mulmod_trinomial(a, to_poly(x2), int(deg), k);
  gf2::xor_into(prod, b);
  return from_poly(prod, m, Provenance::extracted);
}

BitBlock two_source_extract(const BitBlock& x1, const BitBlock& x2, const RazSpec& spec) {
  if (std::int64_t(x1.size()) != spec.n1 || std::int64_t(x2.size()) != spec.n2)
    throw std::invalid_argument("two_source_extract: input lengths do not match the spec");
  return two_source_extract(x1, x2, std::size_t(spec.m));
}

// ---- budget -------------------------------------------------------------------

double compose_two_source_error(double eps_smooth, double eps_ts, double eps_2) {
  return 6 * eps_smooth + 2 * eps_ts + 2 * eps_2;
}

double SoundnessBudget::total() const {
  return compose_two_source_error(eps_smooth, eps_ts, eps_2) + M * eps_seeded;
}

nlohmann::json SoundnessBudget::to_json() const {
  return {{"eps_sou", eps_sou},       {"eps_accept", eps_accept}, {"eps_smooth", eps_smooth},
          {"eps_2", eps_2},           {"eps_ts", eps_ts},         {"eps_seeded", eps_seeded},
          {"M", M},                   {"eps_source", eps_source}, {"eps_ext", eps_ext},
          {"eps_prf", eps_prf},       {"eps_B", eps_B()},         {"total", total()}};
}

SoundnessBudget soundness_split(double eps_sou, double eps_2, double eps_ts, double eps_seeded, double M) {
  if (!(eps_sou > 0 && eps_sou < 1)) throw std::invalid_argument("soundness_split: eps_sou outside (0,1)");
  if (eps_2 < 0 || eps_ts < 0 || eps_seeded < 0 || M < 0) throw std::invalid_argument("soundness_split: negative term");
  SoundnessBudget b;
  b.eps_sou = eps_sou;
  b.eps_accept = eps_sou;
  b.eps_2 = eps_2;
  b.eps_ts = eps_ts;
  b.eps_seeded = eps_seeded;
  b.M = M;
  b.eps_smooth = (eps_sou - 2 * eps_2 - 2 * eps_ts - M * eps_seeded) / 6;
  if (!(b.eps_smooth > 0)) throw Infeasible("soundness_split: budget leaves no room for eps_smooth");
  return b;
}

}  // namespace certamp
