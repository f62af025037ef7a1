#pragma once

#include <cstdint>
#include <optional>

#include <json.hpp>

#include "certamp/bitblock.hpp"

namespace certamp {

// ---- number theory ----------------------------------------------------------

bool is_prime(std::uint64_t d);
// 2 generates (Z/dZ)^* ; d must be prime.
bool has_primitive_root_2(std::uint64_t d);

// ---- circulant seeded extractor ----------------------------------------------

struct CirculantSpec {
  std::size_t n_in = 0;
  std::size_t d_seed = 0;  // n_in + 1
  std::size_t m = 0;
  double k = 0;            // declared source min-entropy
  double eps_seeded = 0;

  nlohmann::json to_json() const;
};

// m = floor(k - 2 log2(1/eps)); throws Infeasible when m <= 0 or d is not admissible.
CirculantSpec circulant_params(std::size_t n_in, double k, double eps_seeded);
// First m bits of seed * (source padded to d bits) modulo x^d - 1.
BitBlock circulant_extract(const BitBlock& source, const BitBlock& seed, std::size_t m);

// floor(input_len * alpha + 2 log2 eps)
std::int64_t seeded_output_len(double alpha, std::size_t input_len, double eps_seeded);

// ---- two-source extractor ----------------------------------------------------

struct RazSpec {
  std::int64_t n1 = 0, n2 = 0, m = 0;
  double k1_avail = 0, k2_avail = 0;  // source min-entropies k1', k2'
  double k1 = 0, k2 = 0;              // extractor parameters after the 1 + 2 log2(1/gamma) margin
  std::int64_t l = 0;
  double log2_p = 0;                  // p = 2^log2_p, even
  double log2_gamma = 0;              // gamma used for the error
  double log2_gamma_bound = 0;        // best achievable right-hand side at (l, p)
  double log2_eps_ts = 0;
  double eps_ts = 0;

  nlohmann::json to_json() const;
};

// Searches l and even p for the smallest eps_ts. Inputs k1, k2 are the
// available min-entropies. Empty when eps_ts cannot reach eps_target.
std::optional<RazSpec> raz_feasible(std::int64_t n1, double k1, std::int64_t n2, double k2, std::int64_t m,
                                    double eps_target);

struct RazLayout {
  std::int64_t quantum_bits = 0;  // L n, unpadded
  std::int64_t n1 = 0, n2 = 0, m = 4093;
  bool quantum_first = true;      // quantum output is the length-n1 input
  double eps_ts = 1e-8, eps_2 = 1e-8;
};

// Smallest weak-source rate alpha that makes the layout feasible at quantum
// smooth min-entropy rate beta (quantum entropy beta L n - log2(1/eps_2)).
// Returns nullopt if even alpha = 1 fails.
std::optional<double> required_alpha(double beta, const RazLayout& layout);
// Smallest beta for a given alpha.
std::optional<double> required_beta(double alpha, const RazLayout& layout);

// x1 = (a, b) halves of n1/2 bits, x2 zero-padded to n1/2 bits;
// output = first m bits of a * x2 + b in GF(2^{n1/2}) under the catalog trinomial.
BitBlock two_source_extract(const BitBlock& x1, const BitBlock& x2, std::size_t m);
BitBlock two_source_extract(const BitBlock& x1, const BitBlock& x2, const RazSpec& spec);

// ---- error budget ------------------------------------------------------------

// 6 eps_smooth + 2 eps_ts + 2 eps_2
double compose_two_source_error(double eps_smooth, double eps_ts, double eps_2);

struct SoundnessBudget {
  double eps_sou = 0, eps_accept = 0, eps_smooth = 0;
  double eps_2 = 0, eps_ts = 0, eps_seeded = 0;
  double M = 0;
  // computational branch
  double eps_source = 0, eps_ext = 0, eps_prf = 0;

  double eps_B() const { return eps_source + eps_ext; }
  // 6 eps_smooth + 2 eps_2 + 2 eps_ts + M eps_seeded
  double total() const;
  nlohmann::json to_json() const;
};

SoundnessBudget soundness_split(double eps_sou, double eps_2, double eps_ts, double eps_seeded, double M);

}  // namespace certamp
