#include "certamp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "certamp/special.hpp"

namespace certamp {

MeanSe mean_se(const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("mean_se: empty sample");
  double m = 0;
  for (double x : xs) m += x;
  m /= double(xs.size());
  double v = 0;
  for (double x : xs) v += (x - m) * (x - m);
  v = xs.size() > 1 ? v / double(xs.size() - 1) : 0.0;
  return {m, std::sqrt(v / double(xs.size())), v};
}

TestResult ks_one_sample(std::vector<double> xs, const std::function<double(double)>& cdf) {
  if (xs.empty()) throw std::invalid_argument("ks_one_sample: empty sample");
  std::sort(xs.begin(), xs.end());
  const double n = double(xs.size());
  double d = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double f = cdf(xs[i]);
    d = std::max({d, f - double(i) / n, double(i + 1) / n - f});
  }
  double sn = std::sqrt(n);
  return {d, kolmogorov_sf((sn + 0.12 + 0.11 / sn) * d)};
}

TestResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = double(a.size()), nb = double(b.size());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(double(i) / na - double(j) / nb));
  }
  double ne = std::sqrt(na * nb / (na + nb));
  return {d, kolmogorov_sf((ne + 0.12 + 0.11 / ne) * d)};
}

TestResult chi_square_uniform(const std::vector<std::uint64_t>& counts) {
  if (counts.size() < 2) throw std::invalid_argument("chi_square_uniform: need >= 2 bins");
  double total = 0;
  for (auto c : counts) total += double(c);
  double e = total / double(counts.size()), x2 = 0;
  for (auto c : counts) x2 += (double(c) - e) * (double(c) - e) / e;
  return {x2, gamma_q(0.5 * double(counts.size() - 1), 0.5 * x2)};
}

TestResult monobit(const BitBlock& bits) {
  if (bits.size() == 0) throw std::invalid_argument("monobit: empty block");
  double s = 2.0 * double(bits.popcount()) - double(bits.size());
  double stat = std::fabs(s) / std::sqrt(double(bits.size()));
  return {stat, std::erfc(stat / std::sqrt(2.0))};
}

namespace {
double psi_sq(const BitBlock& bits, int m) {
  if (m <= 0) return 0.0;
  const std::size_t n = bits.size();
  std::vector<std::uint64_t> counts(std::size_t{1} << m, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t v = 0;
    for (int j = 0; j < m; ++j) v = (v << 1) | bits.get((i + j) % n);
    ++counts[v];
  }
  double s = 0;
  for (auto c : counts) s += double(c) * double(c);
  return s * double(counts.size()) / double(n) - double(n);
}
}  // namespace

std::pair<TestResult, TestResult> serial(const BitBlock& bits, int m) {
  if (m < 2 || m > 16) throw std::invalid_argument("serial: m out of range");
  if (bits.size() < (std::size_t{1} << (m + 2))) throw std::invalid_argument("serial: block too short");
  double p0 = psi_sq(bits, m), p1 = psi_sq(bits, m - 1), p2 = psi_sq(bits, m - 2);
  double d1 = p0 - p1, d2 = p0 - 2 * p1 + p2;
  TestResult r1{d1, gamma_q(std::ldexp(1.0, m - 2), d1 / 2)};
  TestResult r2{d2, gamma_q(std::ldexp(1.0, m - 3), d2 / 2)};
  return {r1, r2};
}

bool battery_passes(const BitBlock& bits, double alpha) {
  if (monobit(bits).p_value < alpha) return false;
  auto [a, b] = serial(bits, 2);
  return a.p_value >= alpha && b.p_value >= alpha;
}

}  // namespace certamp
