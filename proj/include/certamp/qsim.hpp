#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "certamp/rng.hpp"

namespace certamp {

using cplx = std::complex<double>;

inline constexpr int kMaxQubits = 24;
inline constexpr std::uint8_t kNoGate = 0xFF;

// Single-qubit layers carry an exponent index t in 0..7 per qubit (p = (t-4)/4),
// or kNoGate. Layer l of two_q sits between one_q[l] and one_q[l+1].
struct CircuitSpec {
  int n = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<std::uint8_t>> one_q;
  std::vector<std::vector<std::pair<int, int>>> two_q;

  void validate() const;
  std::size_t two_qubit_gate_count() const;
  std::size_t one_qubit_gate_count() const;
  std::size_t depth() const { return two_q.size(); }
};

// X-basis qubits get a Hadamard before measurement.
struct BasisMask {
  int n = 0;
  std::uint64_t x_bits = 0;
  bool is_x(int q) const { return (x_bits >> q) & 1u; }
  static BasisMask all_z(int n) { return {n, 0}; }
  static BasisMask random(int n, Rng& rng);
};

struct StateVector {
  int n = 0;
  std::vector<cplx> amp;
  bool normalized = true;

  std::size_t dim() const { return amp.size(); }
  double norm_sq() const;
  double prob(std::uint64_t z) const { return std::norm(amp[z]); }
};

// Gate definitions
using Mat2 = std::array<cplx, 4>;  // row-major
Mat2 one_qubit_gate(std::uint8_t t);
Mat2 hadamard();
Mat2 dagger(const Mat2& m);

CircuitSpec gen_circuit(int n, int layer_count, int pairs_per_layer, std::uint64_t rng_seed, int final_pairs = 0);

StateVector zero_state(int n);
void apply_one_qubit_layer(StateVector& s, const std::vector<std::uint8_t>& layer, bool inverse = false);
void apply_two_qubit_layer(StateVector& s, const std::vector<std::pair<int, int>>& pairs, bool inverse = false);
void apply_basis(StateVector& s, const BasisMask& basis);

// Runs layers [0, cut) of the circuit: one_q[0], then (two_q[l], one_q[l+1]) for l < cut.
void run_prefix(StateVector& s, const CircuitSpec& spec, std::size_t cut);
// Runs the remaining layers l >= cut and the basis change.
void run_suffix(StateVector& s, const CircuitSpec& spec, const BasisMask& basis, std::size_t cut);

StateVector evolve(const CircuitSpec& spec, const BasisMask& basis);
// <z| U_basis U |0>, computed by propagating |z> backwards through the inverse circuit.
cplx amplitude(const CircuitSpec& spec, const BasisMask& basis, std::uint64_t z);

std::vector<std::uint64_t> born_sample(const StateVector& state, Rng& rng, std::size_t count,
                                       bool allow_unnormalized = false);

struct SliceSpec {
  std::vector<int> slice_qubits;
  std::size_t cut_layer = 0;
  std::vector<std::uint32_t> included;  // patterns j in S

  std::size_t n_slices() const { return std::size_t{1} << slice_qubits.size(); }
  double fraction() const { return double(included.size()) / double(n_slices()); }
};

// Middle-layer cut, the given qubits, and a uniformly random subset of
// round(f * 2^k) patterns.
SliceSpec random_slice(const CircuitSpec& spec, std::vector<int> qubits, double f, Rng& rng);

struct SlicedResult {
  std::vector<cplx> partial_amplitudes;  // A_i^S for each probe
  StateVector partial_state;             // normalized C2 P_S C1|0>
  double weight = 0;                     // || P_S C1|0> ||^2
  double fidelity = 0;                   // |<psi_S|psi>|^2
};

SlicedResult sliced_state(const CircuitSpec& spec, const BasisMask& basis, const SliceSpec& slice,
                          const std::vector<std::uint64_t>& probes);

// Unnormalized C2 P_S C1 |0>.
StateVector partial_state_unnormalized(const CircuitSpec& spec, const BasisMask& basis, const SliceSpec& slice);

// a_{i,j} = <z_i| C2 P_j C1 |0>, one row per probe, one column per pattern j.
std::vector<std::vector<cplx>> slice_amplitudes(const CircuitSpec& spec, const BasisMask& basis,
                                                const std::vector<int>& slice_qubits, std::size_t cut_layer,
                                                const std::vector<std::uint64_t>& probes);

// Bitstrings are hex, MSB first, ceil(n/4) digits; qubit q is bit q of the index.
std::string to_hex(std::uint64_t z, int n);
std::uint64_t from_hex(const std::string& hex, int n);

nlohmann::json to_json(const CircuitSpec& spec);
CircuitSpec circuit_from_json(const nlohmann::json& j);

// Distinct uniform draws from [0, N).
std::vector<std::uint64_t> distinct_uniform(Rng& rng, std::uint64_t N, std::size_t count);

}  // namespace certamp
