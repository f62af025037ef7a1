#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace certamp {

// Regularized incomplete gamma functions P(a, x) and Q(a, x) = 1 - P(a, x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);
// log Q(a, x), usable deep in the tail where Q underflows
double log_gamma_q(double a, double x);

double log_choose(double n, double k);
// Hypergeometric: population N, K successes, n draws; P[X = i]
double hypergeom_pmf(std::int64_t i, std::int64_t N, std::int64_t K, std::int64_t n);
double binom_pmf(std::int64_t i, std::int64_t n, double p);

// Dense pmf over a contiguous support [lo, lo + p.size()), built by the
// ratio recurrence from the mode and normalized. Tails with mass below
// `cutoff` relative to the mode are dropped.
struct PmfTable {
  std::int64_t lo = 0;
  std::vector<double> p;
};
PmfTable hypergeom_table(std::int64_t N, std::int64_t K, std::int64_t n, double cutoff = 1e-20);
PmfTable binom_table(std::int64_t n, double prob, double cutoff = 1e-20);

double digamma(double x);
double trigamma(double x);
double harmonic(std::uint64_t n);

// Kolmogorov distribution survival function Pr[K > lambda]
double kolmogorov_sf(double lambda);
double normal_sf(double z);

// Adaptive Gauss-Kronrod (7/15) quadrature.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10, double abs_tol = 1e-300, int max_depth = 60);

// Bisection for a sign change of f on [lo, hi]. Throws if f(lo), f(hi) share a sign.
double bisect(const std::function<double(double)>& f, double lo, double hi, double abs_tol = 1e-14,
              int max_iter = 400);

}  // namespace certamp
