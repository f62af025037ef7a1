#include "certamp/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace certamp {

namespace {

constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;

double stirling_correction(double a) {
  double r = 1.0 / a, r2 = r * r;
  return r * (1.0 / 12 - r2 * (1.0 / 360 - r2 * (1.0 / 1260 - r2 * (1.0 / 1680))));
}

// log(x^a e^-x / Gamma(a)); the large-a branch avoids cancelling two O(a log a) terms
double log_prefactor(double a, double x) {
  if (a >= 10.0) {
    double t = (x - a) / a;
    return a * (std::log1p(t) - t) + 0.5 * std::log(a / (2 * std::numbers::pi)) - stirling_correction(a);
  }
  return a * std::log(x) - x - std::lgamma(a);
}

double series_p(double a, double x) {
  double ap = a, del = 1.0 / a, sum = del;
  for (int i = 0; i < 1000000; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * kEps) break;
  }
  return sum * std::exp(log_prefactor(a, x));
}

// modified Lentz on the Legendre continued fraction; returns log Q
double log_cf_q(double a, double x) {
  double b = x + 1.0 - a, c = 1.0 / kTiny, d = 1.0 / b, h = d;
  for (int i = 1; i < 1000000; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return log_prefactor(a, x) + std::log(h);
}

void check_gamma_args(double a, double x) {
  if (!(a > 0) || x < 0 || std::isnan(x)) throw std::invalid_argument("incomplete gamma: need a > 0, x >= 0");
}

}  // namespace

double gamma_p(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return series_p(a, x);
  return -std::expm1(log_cf_q(a, x));
}

double gamma_q(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - series_p(a, x);
  return std::exp(log_cf_q(a, x));
}

double log_gamma_q(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0) return 0.0;
  if (x < a + 1.0) return std::log1p(-series_p(a, x));
  return log_cf_q(a, x);
}

double log_choose(double n, double k) {
  return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

double hypergeom_pmf(std::int64_t i, std::int64_t N, std::int64_t K, std::int64_t n) {
  if (N < 0 || K < 0 || n < 0 || K > N || n > N) throw std::invalid_argument("hypergeom_pmf: bad parameters");
  if (i < std::max<std::int64_t>(0, n - (N - K)) || i > std::min(n, K)) return 0.0;
  double lp = log_choose(double(K), double(i)) + log_choose(double(N - K), double(n - i)) -
              log_choose(double(N), double(n));
  return std::exp(lp);
}

double binom_pmf(std::int64_t i, std::int64_t n, double p) {
  if (i < 0 || i > n) return 0.0;
  if (p <= 0) return i == 0 ? 1.0 : 0.0;
  if (p >= 1) return i == n ? 1.0 : 0.0;
  return std::exp(log_choose(double(n), double(i)) + i * std::log(p) + (n - i) * std::log1p(-p));
}

namespace {

// Walks outward from the mode with a pmf ratio; up(i) = f(i+1)/f(i), down(i) = f(i-1)/f(i).
template <class Up, class Down>
PmfTable walk_pmf(std::int64_t lo, std::int64_t hi, std::int64_t mode, double cutoff, Up up, Down down) {
  std::vector<double> right{1.0}, left;
  double v = 1.0;
  for (std::int64_t i = mode; i < hi; ++i) {
    v *= up(i);
    if (v < cutoff) break;
    right.push_back(v);
  }
  v = 1.0;
  for (std::int64_t i = mode; i > lo; --i) {
    v *= down(i);
    if (v < cutoff) break;
    left.push_back(v);
  }
  PmfTable t;
  t.lo = mode - static_cast<std::int64_t>(left.size());
  t.p.assign(left.rbegin(), left.rend());
  t.p.insert(t.p.end(), right.begin(), right.end());
  double s = 0;
  for (double x : t.p) s += x;
  for (double& x : t.p) x /= s;
  return t;
}

}  // namespace

PmfTable hypergeom_table(std::int64_t N, std::int64_t K, std::int64_t n, double cutoff) {
  if (N < 0 || K < 0 || n < 0 || K > N || n > N) throw std::invalid_argument("hypergeom_table: bad parameters");
  std::int64_t lo = std::max<std::int64_t>(0, n - (N - K)), hi = std::min(n, K);
  auto mode = static_cast<std::int64_t>(std::floor(double(n + 1) * double(K + 1) / double(N + 2)));
  mode = std::clamp(mode, lo, hi);
  const double Nd = double(N), Kd = double(K), nd = double(n);
  return walk_pmf(
      lo, hi, mode, cutoff,
      [&](std::int64_t i) { return (Kd - i) * (nd - i) / ((i + 1.0) * (Nd - Kd - nd + i + 1.0)); },
      [&](std::int64_t i) { return i * (Nd - Kd - nd + i) / ((Kd - i + 1.0) * (nd - i + 1.0)); });
}

PmfTable binom_table(std::int64_t n, double prob, double cutoff) {
  if (n < 0 || prob < 0 || prob > 1) throw std::invalid_argument("binom_table: bad parameters");
  if (prob == 0) return {0, {1.0}};
  if (prob == 1) return {n, {1.0}};
  auto mode = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor((n + 1) * prob)), 0, n);
  const double odds = prob / (1 - prob);
  return walk_pmf(
      0, n, mode, cutoff, [&](std::int64_t i) { return double(n - i) / double(i + 1) * odds; },
      [&](std::int64_t i) { return double(i) / double(n - i + 1) / odds; });
}

double digamma(double x) {
  if (x <= 0 && x == std::floor(x)) throw std::domain_error("digamma pole");
  double acc = 0;
  if (x < 0) {  // reflection
    return digamma(1 - x) - std::numbers::pi / std::tan(std::numbers::pi * x);
  }
  while (x < 10) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  double r = 1.0 / x, r2 = r * r;
  double tail = r2 * (1.0 / 12 -
                      r2 * (1.0 / 120 - r2 * (1.0 / 252 - r2 * (1.0 / 240 - r2 * (1.0 / 132 - r2 * 691.0 / 32760)))));
  return acc + std::log(x) - 0.5 * r - tail;
}

double trigamma(double x) {
  if (x <= 0) throw std::domain_error("trigamma: x must be positive");
  double acc = 0;
  while (x < 10) {
    acc += 1.0 / (x * x);
    x += 1.0;
  }
  double r = 1.0 / x, r2 = r * r;
  double s = r + 0.5 * r2 +
             r * r2 * (1.0 / 6 - r2 * (1.0 / 30 - r2 * (1.0 / 42 - r2 * (1.0 / 30 - r2 * (5.0 / 66 - r2 * (691.0 / 2730 - r2 * 7.0 / 6))))));
  return acc + s;
}

double harmonic(std::uint64_t n) {
  if (n <= 1000000) {
    double s = 0;
    for (std::uint64_t i = n; i >= 1; --i) s += 1.0 / double(i);
    return s;
  }
  return digamma(double(n) + 1.0) + std::numbers::egamma;
}

double kolmogorov_sf(double lambda) {
  if (lambda <= 0) return 1.0;
  const double pi2 = std::numbers::pi * std::numbers::pi;
  if (lambda < 1.18) {
    double s = 0;
    for (int j = 1; j <= 20; ++j) {
      double k = 2 * j - 1;
      s += std::exp(-k * k * pi2 / (8 * lambda * lambda));
    }
    return 1.0 - std::sqrt(2 * std::numbers::pi) / lambda * s;
  }
  double s = 0;
  for (int j = 1; j <= 100; ++j) {
    double t = std::exp(-2.0 * j * j * lambda * lambda);
    s += (j % 2 ? t : -t);
    if (t < 1e-18) break;
  }
  return std::clamp(2 * s, 0.0, 1.0);
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

void gk15(const std::function<double(double)>& f, double a, double b, double& result, double& err) {
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double fc = f(c);
  double rk = fc * kWgk[7], rg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    double dx = h * kXgk[j];
    double s = f(c - dx) + f(c + dx);
    rk += kWgk[j] * s;
    if (j % 2 == 1) rg += kWg[j / 2] * s;
  }
  result = rk * h;
  err = std::fabs((rk - rg) * h);
}

double adapt(const std::function<double(double)>& f, double a, double b, double whole, double err, double tol,
             int depth) {
  if (err <= tol || depth <= 0) return whole;
  double m = 0.5 * (a + b), l, el, r, er;
  gk15(f, a, m, l, el);
  gk15(f, m, b, r, er);
  return adapt(f, a, m, l, el, 0.5 * tol, depth - 1) + adapt(f, m, b, r, er, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol, double abs_tol,
                 int max_depth) {
  if (a == b) return 0.0;
  double whole, err;
  gk15(f, a, b, whole, err);
  double tol = std::max(abs_tol, rel_tol * std::fabs(whole));
  return adapt(f, a, b, whole, err, tol, max_depth);
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double abs_tol, int max_iter) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if ((flo > 0) == (fhi > 0)) throw std::domain_error("bisect: no sign change on bracket");
  for (int i = 0; i < max_iter && hi - lo > abs_tol; ++i) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace certamp
