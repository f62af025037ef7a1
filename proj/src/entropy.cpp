#include "certamp/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "certamp/errors.hpp"
#include "certamp/special.hpp"

namespace certamp {

namespace {

constexpr double kLn2 = std::numbers::ln2;

double log2_1p_pow2(double e) {
  // log2(1 + 2^e)
  return e > 60 ? e + std::log2(1.0 + std::exp2(-e)) : std::log2(1.0 + std::exp2(e));
}

// 16 (k+l)^2 ln^2 N / N, computed in log space to survive large n
double kl_correction(int n, double kl2) {
  double lnN = n * kLn2;
  return std::exp(std::log(16.0 * kl2) + 2 * std::log(lnN) - lnN);
}

double sqrt_cos_term(double k) {
  // sqrt(2 (1 - cos(pi/2k)^k)) without cancellation at large k
  double x = std::numbers::pi / (2 * k);
  double s = std::sin(x / 2);
  double lc = std::log1p(-2 * s * s);
  return std::sqrt(-2.0 * std::expm1(k * lc));
}

}  // namespace

double eps_prime(double T, int n, double k, double l) {
  if (k < 1 || l < 1) throw std::invalid_argument("eps_prime: k, l must be >= 1");
  return T * (4.0 * std::exp2(-n / 2.0) + sqrt_cos_term(k) + 2.0 / std::sqrt(l + 1.0));
}

double eps_double_prime(int n, double k, double l) {
  double N = std::exp2(double(n));
  if (k >= N) throw std::invalid_argument("eps_double_prime: k >= N");
  double kl = k + l;
  return eps_prime(1, n, k, l) + 2 * kl * (kl - 1) / N + 2 * k / (N * (1 - k / N));
}

double single_round_entropy(double delta, const SingleRoundInputs& in, bool improved) {
  if (improved && (in.m != 1 || in.T != 1)) throw std::invalid_argument("improved bound needs m = T = 1");
  if (!(in.phi_adv > 0 && in.phi_adv <= 1)) throw std::invalid_argument("phi_adv must lie in (0,1]");
  const int n = in.n;
  const double lnN = n * kLn2, kl = in.k + in.l;
  double eps = 0, fs = 0;
  if (in.finite_size_terms) {
    eps = improved ? eps_double_prime(n, in.k, in.l) : eps_prime(in.T, n, in.k, in.l);
    fs = 1.001 * kl_correction(n, improved ? 1.0 : kl * kl);
  }
  // a fidelity-phi device that scores delta behaves like an ideal one scoring delta / phi
  const double phi = in.phi_adv;
  const double eff = (delta - in.F_C) / phi;
  double inner;
  if (improved) {
    inner = (eff - 2 * eps * (lnN + 3.5) - fs) * n - std::log2(double(n)) - 5;
  } else {
    inner = in.m * ((eff - 2 * in.m * eps * (lnN + 3.5) - fs) * n - std::log2(double(n)) - std::log2(kl) - 3) - 2;
  }
  return phi * inner;
}

// ---- oracle model -----------------------------------------------------------

double OracleParams::N() const { return std::exp2(double(n)); }
double OracleParams::cap() const { return p_max > 0 ? p_max : 2.0 / N(); }

void OracleParams::validate() const {
  if (n < 2) throw std::invalid_argument("OracleParams: n too small");
  if (!(gamma > 0 && gamma <= 1)) throw std::invalid_argument("OracleParams: gamma outside (0,1]");
  if (k < 1 || l < 1) throw std::invalid_argument("OracleParams: k, l must be >= 1");
  if (!(cap() * N() > 1)) throw std::invalid_argument("OracleParams: p_max must exceed 1/N");
  if (!(eps_smooth > 0 && eps_smooth < 1 && eps_accept > 0 && eps_accept < 1))
    throw std::invalid_argument("OracleParams: eps outside (0,1)");
  if (L < 1 || m < 1 || T < 0) throw std::invalid_argument("OracleParams: bad L, m or T");
  if (!(phi_adv > 0 && phi_adv <= 1)) throw std::invalid_argument("OracleParams: phi_adv outside (0,1]");
  if (improved && (m != 1 || T != 1)) throw std::invalid_argument("OracleParams: improved needs m = T = 1");
}

Tradeoff::Tradeoff(const OracleParams& p, EatVariant v) : variant(v), p_(p) {
  p.validate();
  const int n = p.n;
  const double N = p.N(), lnN = n * kLn2, kl = p.k + p.l, m = p.m;
  const double r = 1.0 - std::exp2(-n / 3.0);
  const double kl_frac = kl * kl / N;

  eps = p.improved ? eps_double_prime(n, p.k, p.l) : eps_prime(p.T, n, p.k, p.l);
  d_Q = std::exp2(-n / 3.0) + kl_frac + eps;
  d = m * std::max(d_Q, p.d_C);
  if (d >= 1) throw Infeasible("tradeoff: deviation mass d >= 1");

  x_max = N * r * p.cap();
  // Np_min solves 1 - (1 + x) e^{-x} = d
  double xr = bisect([&](double x) { return -std::expm1(-x) - x * std::exp(-x) - d; }, 0.0, 60.0, 1e-15);
  p_min = xr / N;
  x_min = N * r * p_min;
  if (x_min >= x_max) throw Infeasible("tradeoff: p_min above p_max");

  if (p.improved)
    C = (std::log2(double(n)) + 3) / n + 4 * eps * (lnN + 3.5) + 1.001 * kl_correction(n, 1.0) + 0.001;
  else
    C = (std::log2(double(n)) + std::log2(kl) + 3) / n + 4 * m * eps * (lnN + 3.5) +
        1.001 * kl_correction(n, kl * kl) + 0.001;

  const bool truncated = v == EatVariant::full || v == EatVariant::improved_h;
  auto raw = [&](double s) {
    if (truncated) return m * n * ((t(s) - p.Phi_C / m) * (1 - kl_frac) - p.phi_adv * C) - 2;
    const double phi = p.phi_adv, F_C = p.Phi_C / m;
    if (p.improved)
      return phi * (((s - 1 - F_C) / phi - 2 * eps * (lnN + 3.5) - 1.001 * kl_correction(n, 1.0) - 0.001) * n -
                    std::log2(double(n)) - 7);
    return phi * (m * (((s - 1 - F_C) / phi - 2 * m * eps * (lnN + 3.5) - 1.001 * kl_correction(n, kl * kl) - 0.001) *
                           n -
                       std::log2(double(n)) - std::log2(kl) - 5) -
                  2);
  };
  intercept_ = raw(0.0);
  slope_ = raw(1.0) - intercept_;
  h_max = h(N * p.cap());
  h_zero = h(0.0);
}

double Tradeoff::t(double s) const {
  const double r = 1.0 - std::exp2(-p_.n / 3.0);
  const double e = std::exp(x_min - x_max);
  return (s * r - 1 - d * x_max - x_min + e) / (1 - e * (1 + x_max - x_min));
}

double var_f_naive(const OracleParams& p, const Tradeoff& f) {
  double g = f.h_max - f.h_zero;
  return g * g / p.gamma;
}

double var_f(const OracleParams& p, const Tradeoff& f) {
  const double hm = f.h_max, xm = f.x_max, d = f.d, tail = std::exp(-xm) - d;
  auto sq = [&](double x) {
    double g = hm - f.h(x);
    return std::exp(-x) * g * g;
  };
  double second = d * (hm - f.h_zero) * (hm - f.h_zero) + integrate(sq, 0.0, xm, 1e-12) +
                  tail * (hm - f.h(xm)) * (hm - f.h(xm));
  double hq = d * f.h_zero + integrate([&](double x) { return std::exp(-x) * f.h(x); }, 0.0, xm, 1e-12) +
              tail * f.h(xm);
  double v = second / p.gamma - (hm - hq) * (hm - hq);
  double scale = second / p.gamma + 1e-300;
  if (v < -1e-9 * scale) throw std::domain_error("var_f: negative variance, parameters inconsistent");
  return std::max(v, 0.0);
}

double var_f_closed_form(const OracleParams& p, const Tradeoff& f) {
  // h(x) = a + b x; h_max - h(x) = b (X - x) with X = N p_max
  const double b = f.slope(), a = f.h_zero, X = p.N() * p.cap(), u = f.x_max, d = f.d;
  const double eu = std::exp(-u), tail = eu - d;
  auto P = [&](double x) { return (X - x) * (X - x) - 2 * (X - x) + 2; };
  double sq_int = b * b * (P(0) - eu * P(u));
  double lin_int = (a + b) - eu * (a + b * u + b);
  double hm = a + b * X;
  double second = d * (b * X) * (b * X) + sq_int + tail * (b * (X - u)) * (b * (X - u));
  double hq = d * a + lin_int + tail * (a + b * u);
  return std::max(second / p.gamma - (hm - hq) * (hm - hq), 0.0);
}

EatConstants eat_constants(double h, double var, double w, int n, double m, std::int64_t L, double eps_smooth,
                           double eps_accept) {
  EatConstants k;
  k.h = h;
  k.var = var;
  k.w = w;
  k.lg = 1.0 - 2 * std::log2(eps_smooth) - 2 * std::log2(eps_accept);
  const double mn = m * n;
  k.V = std::sqrt(var + 2) + log2_1p_pow2(mn + 1);  // log2(2 * 2^{mn} + 1)
  const double Ld = double(L);
  k.c = k.V * std::sqrt(2 * kLn2 * k.lg);
  k.K = 4 * std::pow(w + 1, 3) * std::exp2(w * std::sqrt(2 * k.lg) / (k.V * std::sqrt(Ld * kLn2)));
  k.c_prime = 2 * k.lg * k.K / (k.V * k.V * kLn2);
  k.H_fixed = Ld * h - std::sqrt(Ld) * k.c - k.c_prime;
  k.w_ok = w >= 3;
  k.rounds_ok = Ld >= 8 * kLn2 * k.lg / (k.V * k.V);

  // Optimize the Renyi order; the order behind the fixed constants is
  // included so the optimum can never fall below H_fixed's alpha term.
  const double amax = 1.0 / (2 * kLn2);
  const double a0 = std::sqrt(2 * k.lg / (Ld * kLn2)) / k.V;
  double best_u = std::min(a0, amax), best = eat_alpha_bound(1 + best_u, k, L);
  const int grid = 400;
  const double lo = std::log(1e-12), hi = std::log(amax);
  int best_i = -1;
  for (int i = 0; i <= grid; ++i) {
    double u = std::exp(lo + (hi - lo) * i / grid);
    double v = eat_alpha_bound(1 + u, k, L);
    if (v > best) {
      best = v;
      best_u = u;
      best_i = i;
    }
  }
  if (best_i >= 0) {
    // golden-section refinement in log(alpha - 1) between grid neighbours
    double a = lo + (hi - lo) * std::max(best_i - 1, 0) / grid, b = lo + (hi - lo) * std::min(best_i + 1, grid) / grid;
    const double g = (std::sqrt(5.0) - 1) / 2;
    for (int it = 0; it < 100; ++it) {
      double c1 = b - g * (b - a), c2 = a + g * (b - a);
      if (eat_alpha_bound(1 + std::exp(c1), k, L) > eat_alpha_bound(1 + std::exp(c2), k, L))
        b = c2;
      else
        a = c1;
    }
    double u = std::exp(0.5 * (a + b));
    double v = eat_alpha_bound(1 + u, k, L);
    if (v > best) {
      best = v;
      best_u = u;
    }
  }
  k.H_alpha = best;
  k.alpha = 1 + best_u;
  return k;
}

double eat_alpha_bound(double alpha, const EatConstants& k, std::int64_t L) {
  const double u = alpha - 1, Ld = double(L), w = k.w;
  double lnw = w * kLn2 + std::log1p(std::exp(2.0 - w * kLn2));  // ln(2^w + e^2)
  double K_a = std::exp2(u * w) * lnw * lnw * lnw / (6 * std::pow(2 - alpha, 3) * kLn2);
  return Ld * k.h - Ld * u * kLn2 / 2 * k.V * k.V - k.lg / u - Ld * u * u * K_a;
}

nlohmann::json EntropyReport::to_json() const {
  return {{"model", model}, {"H", H},         {"beta", beta},           {"beta_raw", beta_raw},
          {"flags", flags}, {"constants", constants}, {"formal_only", formal_only}};
}

namespace {

const char* variant_name(EatVariant v) {
  switch (v) {
    case EatVariant::vanilla: return "vanilla";
    case EatVariant::improved_h: return "improved-h";
    case EatVariant::improved_var: return "improved-var";
    default: return "full";
  }
}

void finish(EntropyReport& r, double denom) {
  r.beta_raw = r.H / denom;
  r.beta = std::clamp(r.beta_raw, 0.0, 1.0);
  if (r.formal_only) r.flags.push_back("formal-only");
}

}  // namespace

EntropyReport eat_min_entropy(const OracleParams& p, EatVariant variant) {
  Tradeoff f(p, variant);
  const bool better_var = variant == EatVariant::full || variant == EatVariant::improved_var;
  double var = better_var ? var_f(p, f) : var_f_naive(p, f);
  double w = 2 * p.m * p.n + f.h_max - f.h_zero;
  EatConstants k = eat_constants(f.h(p.s_star), var, w, p.n, p.m, p.L, p.eps_smooth, p.eps_accept);
  k.q_prime_ok = std::exp(-f.x_max) >= f.d;
  k.n_ok = p.n >= 50;

  EntropyReport r;
  r.model = std::string("oracle-") + (p.improved ? "improved-" : "general-") + variant_name(variant);
  r.H = k.H_alpha;
  r.formal_only = !k.n_ok;
  if (!k.w_ok) r.flags.push_back("w<3");
  if (!k.rounds_ok) r.flags.push_back("too-few-rounds");
  if (!k.q_prime_ok) r.flags.push_back("q-prime-negative-mass");
  r.constants = {{"k", p.k},          {"l", p.l},         {"eps", f.eps},         {"d_Q", f.d_Q},
                 {"d", f.d},          {"C", f.C},         {"p_min", f.p_min},     {"x_min", f.x_min},
                 {"x_max", f.x_max},  {"t", f.t(p.s_star)}, {"h", k.h},          {"h_max", f.h_max},
                 {"h_zero", f.h_zero}, {"var", k.var},    {"V", k.V},             {"w", k.w},
                 {"K", k.K},          {"c", k.c},         {"c_prime", k.c_prime}, {"lg", k.lg},
                 {"H_fixed", k.H_fixed}, {"H_alpha", k.H_alpha}, {"alpha", k.alpha}, {"s_star", p.s_star},
                 {"Phi_C", p.Phi_C},  {"gamma", p.gamma}, {"L", p.L}};
  finish(r, double(p.L) * p.m * p.n);
  return r;
}

EntropyReport eat_optimize_kl(OracleParams p, EatVariant variant, std::vector<int> k_exps, std::vector<int> l_exps) {
  auto fill = [&](std::vector<int>& e) {
    if (e.empty())
      for (int i = 0; i <= p.n / 2; ++i) e.push_back(i);
  };
  fill(k_exps);
  fill(l_exps);
  EntropyReport best;
  bool found = false;
  for (int ke : k_exps) {
    for (int le : l_exps) {
      p.k = std::exp2(double(ke));
      p.l = std::exp2(double(le));
      try {
        EntropyReport r = eat_min_entropy(p, variant);
        if (!found || r.H > best.H) {
          best = std::move(r);
          found = true;
        }
      } catch (const Infeasible&) {
      } catch (const std::invalid_argument&) {
      }
    }
  }
  if (!found) throw Infeasible("eat_optimize_kl: no admissible (k, l) on the grid");
  best.constants["grid"] = "powers of two";
  return best;
}

double honest_truncated_mean(double phi, double x_max) {
  return (1 - phi) * trunc_mean_shape1(0, x_max) + phi * trunc_mean_shape2(0, x_max);
}

double zero_entropy_fidelity(const OracleParams& p, EatVariant variant) {
  Tradeoff f(p, variant);
  const double X = p.N() * p.cap();
  auto g = [&](double phi) { return f.h(honest_truncated_mean(phi, X)); };
  if (g(1.0) <= 0) throw Infeasible("zero_entropy_fidelity: no entropy even at fidelity 1");
  if (g(0.0) >= 0) return 0.0;
  return bisect(g, 0.0, 1.0, 1e-13);
}

// ---- ad-hoc -----------------------------------------------------------------

double AdHocParams::N() const { return std::exp2(double(n)); }
double AdHocParams::cap() const { return p_max > 0 ? p_max : 2.0 / N(); }

void AdHocParams::validate() const {
  if (L < 1 || L_val < 1 || L_val > L) throw std::invalid_argument("AdHocParams: need 1 <= L_val <= L");
  if (!(eps1 > 0 && eps1 < 1 && eps2 > 0 && eps2 < 1)) throw std::invalid_argument("AdHocParams: eps1, eps2");
  if (!(eps_smooth > 0 && eps_smooth < 1)) throw std::invalid_argument("AdHocParams: eps_smooth");
  if (k < 1 || l < 1 || m < 1) throw std::invalid_argument("AdHocParams: k, l, m");
}

AdHocTerms adhoc_terms_for_phi(const AdHocParams& p, double Phi) {
  p.validate();
  AdHocTerms t;
  const int n = p.n;
  const double N = p.N(), lnN = n * kLn2, kl = p.k + p.l, r = 1 - std::exp2(-n / 3.0);
  const double eps = eps_prime(p.T, n, p.k, p.l);
  const double d_Q = std::exp2(-n / 3.0) + kl * kl / N + eps;
  t.d = p.m * std::max(d_Q, p.d_C);
  if (t.d >= 1) throw Infeasible("adhoc: deviation mass d >= 1");
  t.x_min = bisect([&](double x) { return -std::expm1(-x) - x * std::exp(-x) - t.d; }, 0.0, 60.0, 1e-15);
  t.p_min = t.x_min / (N * r);
  t.C = (std::log2(double(n)) + std::log2(kl) + 3) / n + 4 * p.m * eps * (lnN + 3.5) +
        1.001 * kl_correction(n, kl * kl) + 0.001;
  t.c = 3 * log2_1p_pow2(p.m * n + 1) * std::sqrt(1 - 2 * std::log2(p.eps_smooth));
  t.Phi = Phi;

  const double Lv = double(p.L_val), Ld = double(p.L);
  double nmm = t.d > 0 ? (1 + std::sqrt(3 / (Lv * t.d) * std::log(1 / p.eps1))) * Lv * t.d : 0.0;
  t.n_clamped = nmm >= Lv;
  t.n_maxmax = std::min<std::int64_t>(p.L_val, std::int64_t(std::ceil(nmm)));
  const std::int64_t rest = p.L - t.n_maxmax, vrest = p.L_val - t.n_maxmax;
  double n2 = Phi > 0 ? (1 + std::sqrt(3 / (Ld * Phi) * std::log(1 / p.eps2))) * Ld * Phi : 0.0;
  t.N2_max = std::min<std::int64_t>(rest, std::int64_t(std::ceil(n2)));
  t.chi = double(vrest) * (p.s_star - N / Lv * (double(t.n_maxmax) * p.cap() + double(vrest) * t.p_min)) * r;

  if (vrest == 0 || t.chi <= 0) {
    t.eps3 = 1.0;
    return t;
  }
  PmfTable pmf = hypergeom_table(rest, t.N2_max, vrest);
  double acc = 0;
  for (std::size_t j = 0; j < pmf.p.size(); ++j) {
    double i = double(pmf.lo + std::int64_t(j));
    acc += pmf.p[j] * gamma_q(double(vrest) + i, t.chi);
  }
  t.eps3 = std::clamp(acc, 0.0, 1.0);
  return t;
}

double adhoc_phi_of_H(const AdHocParams& p, double H) {
  const int n = p.n;
  const double N = p.N(), kl = p.k + p.l, lnN = n * kLn2;
  const double eps = eps_prime(p.T, n, p.k, p.l);
  const double C = (std::log2(double(n)) + std::log2(kl) + 3) / n + 4 * p.m * eps * (lnN + 3.5) +
                   1.001 * kl_correction(n, kl * kl) + 0.001;
  const double c = 3 * log2_1p_pow2(p.m * n + 1) * std::sqrt(1 - 2 * std::log2(p.eps_smooth));
  const double mn = p.m * n, Ld = double(p.L);
  return p.Phi_C / p.m + (2 / mn + p.phi_adv * C + (H + c * std::sqrt(Ld)) / (Ld * mn)) / (1 - kl * kl / N);
}

double adhoc_pass_bound(const AdHocParams& p, double H) {
  return p.eps1 + p.eps2 + adhoc_terms_for_phi(p, adhoc_phi_of_H(p, H)).eps3;
}

EntropyReport adhoc_min_entropy(const AdHocParams& p) {
  p.validate();
  const double Hmax = double(p.L) * p.m * p.n;
  if (adhoc_pass_bound(p, 0.0) > p.eps_accept)
    throw Infeasible("adhoc_min_entropy: abort condition cannot exclude even zero entropy");
  double lo = 0, hi = Hmax;
  if (adhoc_pass_bound(p, hi) <= p.eps_accept) {
    lo = hi;
  } else {
    for (int it = 0; it < 200 && hi - lo > 1e-6 * std::max(1.0, lo); ++it) {
      double mid = 0.5 * (lo + hi);
      (adhoc_pass_bound(p, mid) <= p.eps_accept ? lo : hi) = mid;
    }
  }
  AdHocTerms t = adhoc_terms_for_phi(p, adhoc_phi_of_H(p, lo));
  EntropyReport r;
  r.model = "ad-hoc";
  r.H = lo;
  r.formal_only = p.n < 50;
  if (t.n_clamped) r.flags.push_back("n_maxmax-clamped");
  r.constants = {{"d", t.d},         {"x_min", t.x_min}, {"p_min", t.p_min},       {"C", t.C},
                 {"c", t.c},         {"Phi", t.Phi},     {"chi", t.chi},           {"n_maxmax", t.n_maxmax},
                 {"N2_max", t.N2_max}, {"eps3", t.eps3}, {"pass_bound", p.eps1 + p.eps2 + t.eps3}};
  finish(r, Hmax);
  return r;
}

double simulate_shape_mixture(const AdHocParams& p, double Phi, std::size_t trials, Rng& rng) {
  AdHocTerms t = adhoc_terms_for_phi(p, Phi);
  const double N = p.N(), r = 1 - std::exp2(-p.n / 3.0), xcap = N * p.cap();
  std::size_t pass = 0;
  for (std::size_t tr = 0; tr < trials; ++tr) {
    double s = 0;
    for (std::int64_t i = 0; i < p.L_val; ++i) {
      double x;  // N p
      if (rng.bernoulli(t.d)) {
        x = xcap;
      } else {
        double g = rng.bernoulli(std::min(Phi, 1.0)) ? rng.gamma2() : rng.exponential();
        x = g / r + N * t.p_min;
      }
      s += std::min(x, xcap);
    }
    if (s / double(p.L_val) >= p.s_star) ++pass;
  }
  return double(pass) / double(trials);
}

// ---- restricted ---------------------------------------------------------------

RestrictedResult restricted_min_entropy(const RestrictedParams& p) {
  if (p.chi < 0) throw std::invalid_argument("restricted: chi < 0");
  if (!(p.eps_accept > 0 && p.eps_accept < 1 && p.eps_smooth > 0 && p.eps_smooth <= 1))
    throw std::invalid_argument("restricted: eps outside range");
  auto pass = [&](std::int64_t Q) {
    return spoof_pass_prob(double(Q), p.chi, p.L, p.L_val, p.f_adv, p.phi, p.alloc);
  };
  if (pass(p.L) < p.eps_accept) throw Infeasible("restricted: threshold unreachable even with L quantum samples");
  std::int64_t lo = 0, hi = p.L;  // pass(hi) >= eps_accept
  if (pass(0) >= p.eps_accept) {
    hi = 0;
  } else {
    while (hi - lo > 1) {
      std::int64_t mid = lo + (hi - lo) / 2;
      (pass(mid) >= p.eps_accept ? hi : lo) = mid;
    }
  }
  RestrictedResult out;
  out.Q_min = hi;
  EntropyReport& r = out.report;
  r.model = "restricted";
  r.H = double(hi) * (p.n - 1) + std::log2(p.eps_smooth);
  const double R_Q = double(hi) / double(p.L);
  r.constants = {{"Q_min", hi},
                 {"R_Q", R_Q},
                 {"asymptotic_rate", R_Q * (p.n - 1) / p.n},
                 {"chi", p.chi},
                 {"f_adv", p.f_adv},
                 {"phi", p.phi},
                 {"L", p.L},
                 {"L_val", p.L_val},
                 {"allocation", p.alloc == Allocation::fixed_count ? "fixed-count" : "per-round"}};
  finish(r, double(p.L) * p.n);
  return out;
}

}  // namespace certamp
