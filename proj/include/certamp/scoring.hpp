#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include <json.hpp>

#include "certamp/rng.hpp"

namespace certamp {

struct ScoreParams {
  int n = 0;
  double p_max = 0;  // 0 means the default 2/N

  double N() const { return std::ldexp(1.0, n); }
  double cap() const { return p_max > 0 ? p_max : 2.0 / N(); }
  void validate() const;
};

// (N / L_val) sum p_i - 1. Timed-out rounds are passed in as p = 0.
double xeb_score(const std::vector<double>& probabilities, int n);
// (N / L_val) sum min(p_i, p_max) - 1
double truncated_score(const std::vector<double>& probabilities, const ScoreParams& params);

// Standard error of an XEB estimate from L draws of a fidelity-phi mixture:
// sqrt((1 + 2 phi - phi^2) / L).
double mixture_xeb_stderr(double phi, std::size_t L);

nlohmann::json score_report(const std::vector<double>& probabilities, const ScoreParams& params);

// Law of x = N p (times `rescale`) for a Porter-Thomas mixture:
// with probability d the value sits at x_max, otherwise it is
// min(x_min + Y, x_max) with Y ~ (1 - phi) Gamma(1,1) + phi Gamma(2,1).
struct PTMixture {
  double phi = 1.0;
  double rescale = 1.0;
  double x_min = 0.0;
  double x_max = std::numeric_limits<double>::infinity();
  double d = 0.0;

  void validate() const;
};

double pt_cdf(const PTMixture& mix, double x);
// Mean of N p under the mixture.
double pt_mean(const PTMixture& mix);

// E[min(x_min + Y, x_max)] for Y ~ Gamma(1,1) and Gamma(2,1).
double trunc_mean_shape1(double x_min, double x_max);
double trunc_mean_shape2(double x_min, double x_max);

// How shape-2 samples are spread over rounds by a restricted adversary.
enum class Allocation {
  fixed_count,  // exactly ceil(Q phi + f_adv L) shape-2 rounds, hypergeometric into the validation set
  per_round,    // each round shape-2 independently with rate (Q phi + f_adv L) / L
};

// Probability that the validation-set XEB reaches chi when Q of L rounds are
// answered by a fidelity-phi quantum device and a further f_adv fraction of
// rounds carry classical shape-2 samples.
double spoof_pass_prob(double Q, double chi, std::int64_t L, std::int64_t L_val, double f_adv, double phi,
                       Allocation alloc = Allocation::fixed_count);

// Monte-Carlo counterpart of spoof_pass_prob: allocates shape-2 rounds,
// draws a validation subset, and sums gamma draws.
double simulate_spoof_pass(double Q, double chi, std::int64_t L, std::int64_t L_val, double f_adv, double phi,
                           std::size_t trials, Rng& rng, Allocation alloc = Allocation::fixed_count);

}  // namespace certamp
