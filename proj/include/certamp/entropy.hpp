#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "certamp/scoring.hpp"

namespace certamp {

// ---- single-round constants ------------------------------------------------

// T (4 / 2^{n/2} + sqrt(2 (1 - cos(pi / 2k)^k)) + 2 / sqrt(l + 1))
double eps_prime(double T, int n, double k, double l);
// eps_prime(1, n, k, l) + 2 (k+l)(k+l-1) / N + 2k / (N (1 - k/N))
double eps_double_prime(int n, double k, double l);

struct SingleRoundInputs {
  int n = 64;
  double m = 1, T = 1;
  double k = 1, l = 1;
  double F_C = 0;        // average classical simulation fidelity per circuit
  double phi_adv = 1.0;  // adversary device fidelity
  bool finite_size_terms = true;  // false zeroes the eps and 16 ln^2 N / N corrections
};

// General (T, m)-query bound, or the (1,1)-query improved bound when `improved`.
double single_round_entropy(double delta, const SingleRoundInputs& in, bool improved);

// ---- oracle model (EAT) ----------------------------------------------------

enum class EatVariant {
  vanilla,       // plain single-round bound, naive variance
  improved_h,    // truncated-score single-round bound, naive variance
  improved_var,  // plain single-round bound, improved variance
  full,          // both improvements
};

struct OracleParams {
  int n = 64;
  double m = 1, T = 1;
  double k = 1, l = 1;
  std::int64_t L = 1;
  double gamma = 1;
  double p_max = 0;  // 0 means 2/N
  double phi_adv = 1;
  double Phi_C = 0;
  double d_C = 0;
  double eps_smooth = 1e-3, eps_accept = 1e-3;
  double s_star = 0;  // threshold on the mean of N min(p, p_max)
  bool improved = true;  // eps'' and the (1,1)-query constants; needs m = T = 1

  double N() const;
  double cap() const;
  void validate() const;
};

// The affine min-tradeoff function and the quantities it is built from.
class Tradeoff {
 public:
  Tradeoff(const OracleParams& p, EatVariant variant = EatVariant::full);

  double h(double s) const { return intercept_ + slope_ * s; }
  double t(double s) const;
  double slope() const { return slope_; }

  double eps = 0, d_Q = 0, d = 0, C = 0;
  double p_min = 0, x_min = 0, x_max = 0;
  double h_max = 0, h_zero = 0;  // h(N p_max), h(0)
  EatVariant variant;

 private:
  OracleParams p_;
  double slope_ = 0, intercept_ = 0;
};

// Variance bound of the min-tradeoff function. The improved form integrates
// over q'(x); the naive form is (h(N p_max) - h(0))^2 / gamma.
double var_f(const OracleParams& p, const Tradeoff& f);
double var_f_naive(const OracleParams& p, const Tradeoff& f);
// Closed form of the improved variance for affine h (used as a cross-check).
double var_f_closed_form(const OracleParams& p, const Tradeoff& f);

struct EatConstants {
  double h = 0, var = 0, V = 0, w = 0, K = 0, c = 0, c_prime = 0, lg = 0;
  double H_fixed = 0;          // L h - sqrt(L) c - c'
  double H_alpha = 0;          // optimized over the Renyi order
  double alpha = 0;            // optimizing order
  bool w_ok = true;            // w >= 3
  bool rounds_ok = true;       // L >= 8 ln2 lg / V^2
  bool q_prime_ok = true;      // e^{-x_max} >= d
  bool n_ok = true;            // n >= 50 (preconditions of the bound)
};

// EAT second-order constants for given h(s*), var, w.
EatConstants eat_constants(double h, double var, double w, int n, double m, std::int64_t L, double eps_smooth,
                           double eps_accept);
// The alpha-dependent bound L h - L(a-1) ln2 V^2 / 2 - lg / (a-1) - L (a-1)^2 K_a.
double eat_alpha_bound(double alpha, const EatConstants& k, std::int64_t L);

struct EntropyReport {
  std::string model;
  double H = 0;            // smooth min-entropy lower bound, bits
  double beta_raw = 0;     // H / (L m n)
  double beta = 0;         // clamped to [0, 1]
  nlohmann::json constants;
  std::vector<std::string> flags;
  bool formal_only = false;

  nlohmann::json to_json() const;
};

EntropyReport eat_min_entropy(const OracleParams& p, EatVariant variant = EatVariant::full);

// Scans k, l over powers of two up to 2^{n/2} (or the given exponent lists)
// and returns the best report; constants record the chosen k and l.
EntropyReport eat_optimize_kl(OracleParams p, EatVariant variant = EatVariant::full,
                              std::vector<int> k_exps = {}, std::vector<int> l_exps = {});

// Mean of N min(p, p_max) for an honest fidelity-phi device (x = N p, capped at x_max).
double honest_truncated_mean(double phi, double x_max);
// Honest fidelity at which h(s) crosses zero, with s the honest truncated mean.
double zero_entropy_fidelity(const OracleParams& p, EatVariant variant = EatVariant::full);

// ---- ad-hoc multi-round bound ----------------------------------------------

struct AdHocParams {
  std::int64_t L = 1, L_val = 1;
  double m = 1;
  int n = 64;
  double T = 1, k = 1, l = 1;
  double Phi_C = 0, d_C = 0;
  double eps1 = 1e-4, eps2 = 1e-4;
  double eps_smooth = 1e-3;
  double eps_accept = 1e-3;  // H is certified when eps1 + eps2 + eps3(H) <= eps_accept
  double s_star = 0;         // threshold on the mean of N min(p, p_max) over validated rounds
  double p_max = 0;          // 0 means 2/N
  double phi_adv = 1;

  double N() const;
  double cap() const;
  void validate() const;
};

struct AdHocTerms {
  double d = 0, x_min = 0, p_min = 0, C = 0, c = 0, Phi = 0, chi = 0;
  std::int64_t n_maxmax = 0, N2_max = 0;
  double eps3 = 0;
  bool n_clamped = false;  // Chernoff bound exceeded L_val and was clamped
};

// All terms of the bound for a given shape-2 weight Phi.
AdHocTerms adhoc_terms_for_phi(const AdHocParams& p, double Phi);
// Phi implied by an entropy level H.
double adhoc_phi_of_H(const AdHocParams& p, double H);
// eps1 + eps2 + eps3 at entropy level H.
double adhoc_pass_bound(const AdHocParams& p, double H);

EntropyReport adhoc_min_entropy(const AdHocParams& p);

// Monte-Carlo of the dominant shape-mixture adversary: per round p = p_max
// with probability d, else p_min + Gamma(1 or 2)/(N (1 - N^{-1/3})) with
// shape 2 at rate Phi; a uniformly random L_val subset is scored.
double simulate_shape_mixture(const AdHocParams& p, double Phi, std::size_t trials, Rng& rng);

// ---- restricted model ------------------------------------------------------

struct RestrictedParams {
  int n = 64;
  std::int64_t L = 1, L_val = 1;
  double chi = 0;
  double f_adv = 0;
  double phi = 1;
  double eps_accept = 1e-3;
  double eps_smooth = 1e-3;
  Allocation alloc = Allocation::fixed_count;
};

struct RestrictedResult {
  std::int64_t Q_min = 0;
  EntropyReport report;
};

RestrictedResult restricted_min_entropy(const RestrictedParams& p);

}  // namespace certamp
