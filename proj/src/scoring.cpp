#include "certamp/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "certamp/special.hpp"

namespace certamp {

void ScoreParams::validate() const {
  if (n < 1 || n > 1000) throw std::invalid_argument("ScoreParams: bad n");
  if (!(cap() > 1.0 / N())) throw std::invalid_argument("ScoreParams: p_max must exceed 1/N");
}

namespace {
void check_probs(const std::vector<double>& ps) {
  if (ps.empty()) throw std::invalid_argument("score: empty probability list");
  for (double p : ps)
    if (!(p >= 0 && p <= 1)) throw std::invalid_argument("score: probability outside [0,1]");
}
}  // namespace

double xeb_score(const std::vector<double>& probabilities, int n) {
  check_probs(probabilities);
  double s = 0;
  for (double p : probabilities) s += p;
  return std::ldexp(1.0, n) / double(probabilities.size()) * s - 1.0;
}

double truncated_score(const std::vector<double>& probabilities, const ScoreParams& params) {
  check_probs(probabilities);
  params.validate();
  const double cap = params.cap();
  double s = 0;
  for (double p : probabilities) s += std::min(p, cap);
  return params.N() / double(probabilities.size()) * s - 1.0;
}

double mixture_xeb_stderr(double phi, std::size_t L) {
  return std::sqrt((1.0 + 2.0 * phi - phi * phi) / double(L));
}

nlohmann::json score_report(const std::vector<double>& probabilities, const ScoreParams& params) {
  double xeb = xeb_score(probabilities, params.n);
  return {{"n", params.n},
          {"L_val", probabilities.size()},
          {"p_max", params.cap()},
          {"score", truncated_score(probabilities, params)},
          {"xeb", xeb},
          {"stderr", mixture_xeb_stderr(std::clamp(xeb, 0.0, 1.0), probabilities.size())}};
}

void PTMixture::validate() const {
  if (!(phi >= 0 && phi <= 1)) throw std::invalid_argument("PTMixture: phi outside [0,1]");
  if (!(rescale > 0)) throw std::invalid_argument("PTMixture: rescale must be positive");
  if (!(x_min >= 0 && x_max > x_min)) throw std::invalid_argument("PTMixture: need 0 <= x_min < x_max");
  if (!(d >= 0 && d <= 1)) throw std::invalid_argument("PTMixture: d outside [0,1]");
}

double pt_cdf(const PTMixture& mix, double x) {
  mix.validate();
  if (x < 0) throw std::invalid_argument("pt_cdf: x < 0");
  double y = x * mix.rescale;
  if (y >= mix.x_max) return 1.0;
  if (y <= mix.x_min) return 0.0;
  double u = y - mix.x_min;
  return (1.0 - mix.d) * (1.0 - (1.0 + mix.phi * u) * std::exp(-u));
}

double trunc_mean_shape1(double x_min, double x_max) {
  if (std::isinf(x_max)) return 1.0 + x_min;
  return 1.0 + x_min - std::exp(x_min - x_max);
}

double trunc_mean_shape2(double x_min, double x_max) {
  if (std::isinf(x_max)) return 2.0 + x_min;
  double w = x_max - x_min;
  return 2.0 + x_min - std::exp(-w) * (2.0 + w);
}

double pt_mean(const PTMixture& mix) {
  mix.validate();
  double body = (1.0 - mix.phi) * trunc_mean_shape1(mix.x_min, mix.x_max) +
                mix.phi * trunc_mean_shape2(mix.x_min, mix.x_max);
  double m = mix.d > 0 ? mix.d * mix.x_max + (1.0 - mix.d) * body : body;
  return m / mix.rescale;
}

namespace {

void check_spoof_args(double Q, double chi, std::int64_t L, std::int64_t L_val, double f_adv, double phi) {
  if (chi < -1) throw std::invalid_argument("spoof_pass_prob: chi < -1");
  if (L < 1 || L_val < 1 || L_val > L) throw std::invalid_argument("spoof_pass_prob: need 1 <= L_val <= L");
  if (Q < 0 || Q > double(L)) throw std::invalid_argument("spoof_pass_prob: Q outside [0, L]");
  if (!(f_adv >= 0 && f_adv <= 1 && phi >= 0 && phi <= 1))
    throw std::invalid_argument("spoof_pass_prob: f_adv, phi must lie in [0,1]");
}

std::int64_t shape2_count(double Q, std::int64_t L, double f_adv, double phi) {
  double k = std::ceil(Q * phi + f_adv * double(L) - 1e-9);
  return std::clamp<std::int64_t>(std::int64_t(k), 0, L);
}

}  // namespace

double spoof_pass_prob(double Q, double chi, std::int64_t L, std::int64_t L_val, double f_adv, double phi,
                       Allocation alloc) {
  check_spoof_args(Q, chi, L, L_val, f_adv, phi);
  PmfTable pmf;
  if (alloc == Allocation::fixed_count) {
    pmf = hypergeom_table(L, shape2_count(Q, L, f_adv, phi), L_val);
  } else {
    double rate = std::min(1.0, (Q * phi + f_adv * double(L)) / double(L));
    pmf = binom_table(L_val, rate);
  }
  // sum of L_val unit-rate gammas with total shape L_val + i must reach L_val (1 + chi)
  const double threshold = double(L_val) * (1.0 + chi);
  double total = 0;
  for (std::size_t j = 0; j < pmf.p.size(); ++j) {
    double i = double(pmf.lo + std::int64_t(j));
    total += pmf.p[j] * gamma_q(double(L_val) + i, threshold);
  }
  return std::clamp(total, 0.0, 1.0);
}

double simulate_spoof_pass(double Q, double chi, std::int64_t L, std::int64_t L_val, double f_adv, double phi,
                           std::size_t trials, Rng& rng, Allocation alloc) {
  check_spoof_args(Q, chi, L, L_val, f_adv, phi);
  const std::int64_t K = shape2_count(Q, L, f_adv, phi);
  const double rate = std::min(1.0, (Q * phi + f_adv * double(L)) / double(L));
  std::size_t pass = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    // Selection sampling walks the L rounds and keeps L_val of them; the
    // shape-2 rounds are the first K (their placement is exchangeable).
    std::int64_t need = L_val;
    double sum = 0;
    for (std::int64_t r = 0; r < L && need > 0; ++r) {
      if (double(rng.below(std::uint64_t(L - r))) >= double(need)) continue;
      --need;
      bool shape2 = alloc == Allocation::fixed_count ? r < K : rng.bernoulli(rate);
      sum += shape2 ? rng.gamma2() : rng.exponential();
    }
    if (sum / double(L_val) - 1.0 >= chi) ++pass;
  }
  return double(pass) / double(trials);
}

}  // namespace certamp
