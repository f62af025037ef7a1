#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "certamp/qsim.hpp"
#include "certamp/rng.hpp"
#include "certamp/scoring.hpp"

namespace certamp {

enum class AdversaryKind { honest, frugal, top };

// Parsed from "honest:<phi>", "uniform" (= honest:0), "frugal:<f>[:<k_slice>[:<M'>]]"
// or "top:<f>:<k>[:<k_slice>]".
struct AdversaryConfig {
  AdversaryKind kind = AdversaryKind::honest;
  double phi = 1.0;         // honest fidelity, or slice fraction f
  int k_slice = 6;
  std::uint64_t M_prime = 0;  // 0 means all 2^n bitstrings
  int k = 0;                // top sampling picks the best of 2^k
  std::uint64_t seed = 0;

  static AdversaryConfig parse(const std::string& text);
  std::string to_string() const;
  void validate() const;
};

// Noise distribution sigma of a finite-fidelity device; empty means uniform.
using Sigma = std::function<std::uint64_t(Rng&, int n)>;

// With probability phi a Born sample of `ideal`, otherwise a draw from sigma.
std::uint64_t honest_sample(const StateVector& ideal, double phi, Rng& rng, const Sigma& sigma = {});
std::uint64_t honest_sample(const CircuitSpec& spec, const BasisMask& basis, double phi, Rng& rng,
                            const Sigma& sigma = {});

// Holds the sliced partial state of one circuit so repeated draws share the
// contraction. Slice qubits are a random k_slice-subset, cut at mid-depth.
class SlicedSampler {
 public:
  SlicedSampler(const CircuitSpec& spec, const BasisMask& basis, double f, int k_slice, Rng& rng);

  // Rejection sampling over M' distinct uniform candidates, envelope = exact max |A|^2.
  std::uint64_t frugal(std::uint64_t M_prime, Rng& rng) const;
  // Candidate with the largest |A| among 2^k distinct uniform ones.
  std::uint64_t top(int k, Rng& rng) const;

  const SliceSpec& slice() const { return slice_; }
  double weight() const { return weight_; }
  const StateVector& partial() const { return partial_; }  // unnormalized

 private:
  int n_ = 0;
  SliceSpec slice_;
  StateVector partial_;
  double weight_ = 0;
};

std::uint64_t frugal_sample(const CircuitSpec& spec, const BasisMask& basis, double f, int k_slice,
                            std::uint64_t M_prime, Rng& rng);
std::uint64_t top_sample(const CircuitSpec& spec, const BasisMask& basis, double f, int k, Rng& rng, int k_slice = 6);

// One sampled bitstring from a configured adversary.
std::uint64_t adversary_sample(const AdversaryConfig& cfg, const CircuitSpec& spec, const BasisMask& basis,
                               const StateVector& ideal, Rng& rng);

// Model draws of p: phi p_S + (1-phi) p_perp + 2 sqrt(phi (1-phi)) cos(theta) sqrt(p_S p_perp).
double frugal_mc_p(double phi, double N, Rng& rng);
// Same combination with p_S the largest of 2^k unit exponentials over N.
double top_mc_p(double phi, int k, double N, Rng& rng);

struct MeanVar {
  double mean = 0, var = 0;
};
// Exact mean and variance of top_mc_p.
MeanVar top_moments(double phi, int k, double N);

// CDF in p that dominates the adversary's capped bitstring probability:
// 0 up to p_min, 1 - (1 + Phi N r p) e^{-N r p} - d on (p_min, p_max), 1 beyond.
struct DominantCdf {
  double Phi = 0, d = 0, p_min = 0, p_max = 0, N = 0, rescale = 1;
  bool formal_only = false;

  double operator()(double p) const;
  // Effective honest form: shape-2 weight Phi over x = N r p with offset x_min.
  PTMixture effective() const;
  // Draw of p from the effective form.
  double sample_effective(Rng& rng) const;
};

// Builds the CDF directly from (Phi, d, p_max); p_min solves 1 - (1 + Phi N p) e^{-N p} = d.
DominantCdf make_dominant(double Phi, double d, double p_max, int n);

struct DominantInputs {
  double h = 0;  // per-round entropy bound
  double m = 1;
  int n = 64;
  double k = 1, l = 1, T = 1;
  double Phi_C = 0, d_C = 0, phi_adv = 1;
  double p_max = 0;  // 0 means 2/N
  bool improved = false;  // eps'' and the (1,1)-query C
};

DominantCdf dominant_cdf(const DominantInputs& in);

// CSV rows "model,param,k,Np" for external plotting.
void write_distribution_csv(std::ostream& os, const std::string& model, double param, int k,
                            const std::vector<double>& Np, bool header = true);

}  // namespace certamp
