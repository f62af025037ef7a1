#include "certamp/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "certamp/entropy.hpp"
#include "certamp/errors.hpp"
#include "certamp/special.hpp"

namespace certamp {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double parse_double(const std::string& s) {
  std::size_t pos = 0;
  double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("bad number: " + s);
  return v;
}

}  // namespace

AdversaryConfig AdversaryConfig::parse(const std::string& text) {
  auto parts = split(text, ':');
  if (parts.empty()) throw std::invalid_argument("adversary: empty spec");
  AdversaryConfig c;
  try {
    const std::string& kind = parts[0];
    if (kind == "uniform" && parts.size() == 1) {
      c.kind = AdversaryKind::honest;
      c.phi = 0;
    } else if (kind == "honest" && parts.size() == 2) {
      c.kind = AdversaryKind::honest;
      c.phi = parse_double(parts[1]);
    } else if (kind == "frugal" && parts.size() >= 2 && parts.size() <= 4) {
      c.kind = AdversaryKind::frugal;
      c.phi = parse_double(parts[1]);
      if (parts.size() > 2) c.k_slice = std::stoi(parts[2]);
      if (parts.size() > 3) c.M_prime = std::stoull(parts[3]);
    } else if (kind == "top" && parts.size() >= 3 && parts.size() <= 4) {
      c.kind = AdversaryKind::top;
      c.phi = parse_double(parts[1]);
      c.k = std::stoi(parts[2]);
      if (parts.size() > 3) c.k_slice = std::stoi(parts[3]);
    } else {
      throw std::invalid_argument("adversary: unknown spec '" + text + "'");
    }
  } catch (const std::logic_error& e) {
    throw std::invalid_argument(std::string("adversary: cannot parse '") + text + "': " + e.what());
  }
  c.validate();
  return c;
}

std::string AdversaryConfig::to_string() const {
  std::ostringstream os;
  switch (kind) {
    case AdversaryKind::honest: os << "honest:" << phi; break;
    case AdversaryKind::frugal: os << "frugal:" << phi << ':' << k_slice << ':' << M_prime; break;
    case AdversaryKind::top: os << "top:" << phi << ':' << k << ':' << k_slice; break;
  }
  return os.str();
}

void AdversaryConfig::validate() const {
  if (!(phi >= 0 && phi <= 1)) throw std::invalid_argument("adversary: phi/f outside [0,1]");
  if (kind == AdversaryKind::frugal && phi == 0) throw std::invalid_argument("adversary: frugal needs f > 0");
  if (kind != AdversaryKind::honest && (k_slice < 1 || k_slice > 12))
    throw std::invalid_argument("adversary: k_slice outside 1..12");
  if (k < 0) throw std::invalid_argument("adversary: k < 0");
}

std::uint64_t honest_sample(const StateVector& ideal, double phi, Rng& rng, const Sigma& sigma) {
  if (!(phi >= 0 && phi <= 1)) throw std::invalid_argument("honest_sample: phi outside [0,1]");
  if (rng.bernoulli(phi)) return born_sample(ideal, rng, 1)[0];
  if (sigma) return sigma(rng, ideal.n);
  return rng.below(ideal.dim());
}

std::uint64_t honest_sample(const CircuitSpec& spec, const BasisMask& basis, double phi, Rng& rng,
                            const Sigma& sigma) {
  return honest_sample(evolve(spec, basis), phi, rng, sigma);
}

SlicedSampler::SlicedSampler(const CircuitSpec& spec, const BasisMask& basis, double f, int k_slice, Rng& rng)
    : n_(spec.n) {
  if (!(f > 0 && f <= 1)) throw std::invalid_argument("sliced sampler: f must lie in (0,1]");
  if (k_slice < 1 || k_slice > std::min(12, spec.n)) throw std::invalid_argument("sliced sampler: bad k_slice");
  auto picks = distinct_uniform(rng, std::uint64_t(spec.n), std::size_t(k_slice));
  std::vector<int> qubits(picks.begin(), picks.end());
  slice_ = random_slice(spec, qubits, f, rng);
  if (slice_.included.empty()) throw std::invalid_argument("sliced sampler: f rounds to an empty slice set");
  partial_ = partial_state_unnormalized(spec, basis, slice_);
  weight_ = partial_.norm_sq();
}

std::uint64_t SlicedSampler::frugal(std::uint64_t M_prime, Rng& rng) const {
  const std::uint64_t N = partial_.dim();
  if (M_prime == 0) M_prime = N;
  if (M_prime > N) throw std::invalid_argument("frugal: M' exceeds 2^n");
  auto cand = distinct_uniform(rng, N, std::size_t(M_prime));
  std::vector<double> w(cand.size());
  double env = 0;
  for (std::size_t i = 0; i < cand.size(); ++i) env = std::max(env, w[i] = partial_.prob(cand[i]));
  if (env <= 0) return cand[0];
  for (;;) {
    std::size_t i = rng.below(cand.size());
    if (rng.uniform() * env < w[i]) return cand[i];
  }
}

std::uint64_t SlicedSampler::top(int k, Rng& rng) const {
  if (k < 0 || k > n_ - 2) throw std::invalid_argument("top: need 0 <= k <= n - 2");
  auto cand = distinct_uniform(rng, partial_.dim(), std::size_t{1} << k);
  return *std::max_element(cand.begin(), cand.end(),
                           [&](std::uint64_t a, std::uint64_t b) { return partial_.prob(a) < partial_.prob(b); });
}

std::uint64_t frugal_sample(const CircuitSpec& spec, const BasisMask& basis, double f, int k_slice,
                            std::uint64_t M_prime, Rng& rng) {
  return SlicedSampler(spec, basis, f, k_slice, rng).frugal(M_prime, rng);
}

std::uint64_t top_sample(const CircuitSpec& spec, const BasisMask& basis, double f, int k, Rng& rng, int k_slice) {
  return SlicedSampler(spec, basis, f, k_slice, rng).top(k, rng);
}

std::uint64_t adversary_sample(const AdversaryConfig& cfg, const CircuitSpec& spec, const BasisMask& basis,
                               const StateVector& ideal, Rng& rng) {
  switch (cfg.kind) {
    case AdversaryKind::honest: return honest_sample(ideal, cfg.phi, rng);
    case AdversaryKind::frugal: return frugal_sample(spec, basis, cfg.phi, cfg.k_slice, cfg.M_prime, rng);
    case AdversaryKind::top: return top_sample(spec, basis, cfg.phi, cfg.k, rng, cfg.k_slice);
  }
  throw std::logic_error("adversary_sample: unreachable");
}

namespace {

double combine(double phi, double pS, double pP, Rng& rng) {
  double R = std::cos(2 * std::numbers::pi * rng.uniform());
  return phi * pS + (1 - phi) * pP + 2 * std::sqrt(phi * (1 - phi)) * R * std::sqrt(pS * pP);
}

}  // namespace

double frugal_mc_p(double phi, double N, Rng& rng) {
  if (!(phi >= 0 && phi <= 1)) throw std::invalid_argument("frugal_mc_p: phi outside [0,1]");
  double pS = rng.gamma2() / N, pP = rng.exponential() / N;
  return combine(phi, pS, pP, rng);
}

double top_mc_p(double phi, int k, double N, Rng& rng) {
  if (!(phi >= 0 && phi <= 1)) throw std::invalid_argument("top_mc_p: phi outside [0,1]");
  if (k < 0 || k > 62) throw std::invalid_argument("top_mc_p: k outside 0..62");
  // max of K unit exponentials: CDF (1 - e^{-t})^K, inverted
  const double K = std::ldexp(1.0, k);
  double t = -std::log(-std::expm1(std::log(rng.uniform_open()) / K));
  double pS = t / N, pP = rng.exponential() / N;
  return combine(phi, pS, pP, rng);
}

MeanVar top_moments(double phi, int k, double N) {
  const auto K = std::uint64_t{1} << k;
  const double H = harmonic(K);
  const double pi2_6 = std::numbers::pi * std::numbers::pi / 6;
  MeanVar r;
  r.mean = (phi * H + 1 - phi) / N;
  r.var = (pi2_6 * phi * phi - phi * phi * trigamma(double(K) + 1) + (1 - phi) * (1 - phi) + 2 * phi * (1 - phi) * H) /
          (N * N);
  return r;
}

double DominantCdf::operator()(double p) const {
  if (p <= p_min) return 0.0;
  if (p >= p_max) return 1.0;
  double y = N * rescale * p;
  return std::max(0.0, -std::expm1(-y) - Phi * y * std::exp(-y) - d);
}

PTMixture DominantCdf::effective() const {
  PTMixture m;
  m.phi = std::clamp(Phi, 0.0, 1.0);
  m.rescale = rescale;
  m.x_min = N * rescale * p_min;
  m.x_max = N * rescale * p_max;
  m.d = d;
  return m;
}

double DominantCdf::sample_effective(Rng& rng) const {
  if (rng.bernoulli(d)) return p_max;
  double y = rng.bernoulli(std::clamp(Phi, 0.0, 1.0)) ? rng.gamma2() : rng.exponential();
  return std::min(p_min + y / (N * rescale), p_max);
}

DominantCdf make_dominant(double Phi, double d, double p_max, int n) {
  if (n < 1 || n > 1000) throw std::invalid_argument("dominant: bad n");
  if (!(d >= 0 && d < 1)) throw std::invalid_argument("dominant: d outside [0,1)");
  if (!(Phi >= 0)) throw std::invalid_argument("dominant: Phi < 0");
  DominantCdf c;
  c.N = std::ldexp(1.0, n);
  c.Phi = Phi;
  c.d = d;
  c.p_max = p_max > 0 ? p_max : 2.0 / c.N;
  c.rescale = 1 - std::exp2(-n / 3.0);
  c.formal_only = n < 50 || Phi > 1;
  if (d == 0) return c;
  // 1 - (1 + Phi x) e^{-x} is increasing only while Phi <= 1; beyond that the
  // first crossing is still the root of interest.
  auto g = [&](double x) { return -std::expm1(-x) - Phi * x * std::exp(-x) - d; };
  const double xcap = c.N * c.p_max;
  if (g(xcap) < 0) throw Infeasible("dominant: no p_min root below p_max");
  double hi = xcap;
  if (Phi > 1) {
    // g dips below zero first when Phi > 1; find the first upward crossing
    const int steps = 2000;
    for (int i = 1; i <= steps; ++i) {
      double x = xcap * i / steps;
      if (g(x) >= 0) {
        hi = x;
        break;
      }
    }
  }
  c.p_min = bisect(g, 0.0, hi, 1e-15 * std::max(1.0, hi)) / c.N;
  return c;
}

DominantCdf dominant_cdf(const DominantInputs& in) {
  const double N = std::ldexp(1.0, in.n), kl = in.k + in.l, lnN = in.n * std::numbers::ln2;
  const double eps = in.improved ? eps_double_prime(in.n, in.k, in.l) : eps_prime(in.T, in.n, in.k, in.l);
  const double d_Q = std::exp2(-in.n / 3.0) + kl * kl / N + eps;
  const double d = in.m * std::max(d_Q, in.d_C);
  const double fs = 1.001 * 16 * (in.improved ? 1.0 : kl * kl) * lnN * lnN / N;
  const double C = in.improved
                       ? (std::log2(double(in.n)) + 3) / in.n + 4 * eps * (lnN + 3.5) + fs + 0.001
                       : (std::log2(double(in.n)) + std::log2(kl) + 3) / in.n + 4 * in.m * eps * (lnN + 3.5) + fs + 0.001;
  const double Phi = ((in.h + 2 * in.phi_adv) / (in.m * in.n) + in.phi_adv * C) / (1 - kl * kl / N) + in.Phi_C / in.m;
  if (d >= 1) throw Infeasible("dominant: deviation mass d >= 1");
  DominantCdf c = make_dominant(Phi, d, in.p_max, in.n);
  c.formal_only = c.formal_only || in.n < 50;
  return c;
}

void write_distribution_csv(std::ostream& os, const std::string& model, double param, int k,
                            const std::vector<double>& Np, bool header) {
  if (header) os << "model,param,k,Np\n";
  for (double v : Np) os << model << ',' << param << ',' << k << ',' << v << '\n';
}

}  // namespace certamp
