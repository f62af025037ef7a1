#include "certamp/qsim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "certamp/kernels.hpp"

namespace certamp {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440084436210485;

std::vector<std::uint32_t> shuffled_indices(std::uint32_t count, Rng& rng) {
  std::vector<std::uint32_t> v(count);
  std::iota(v.begin(), v.end(), 0u);
  for (std::uint32_t i = count; i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
  return v;
}

std::vector<std::pair<int, int>> random_pairs(int n, int pairs, Rng& rng) {
  auto perm = shuffled_indices(std::uint32_t(n), rng);
  std::vector<std::pair<int, int>> out;
  out.reserve(pairs);
  for (int p = 0; p < pairs; ++p) out.emplace_back(int(perm[2 * p]), int(perm[2 * p + 1]));
  return out;
}

void check_dim(int n) {
  if (n < 1 || n > kMaxQubits) throw std::length_error("qubit count exceeds the simulator cap");
}

std::uint32_t pattern_of(std::uint64_t x, const std::vector<int>& qubits) {
  std::uint32_t j = 0;
  for (std::size_t b = 0; b < qubits.size(); ++b) j |= std::uint32_t((x >> qubits[b]) & 1u) << b;
  return j;
}

}  // namespace

void CircuitSpec::validate() const {
  if (n < 1 || n > 64) throw std::invalid_argument("circuit: n out of range");
  if (one_q.size() != two_q.size() + 1) throw std::invalid_argument("circuit: layer shape mismatch");
  for (const auto& layer : one_q) {
    if (int(layer.size()) != n) throw std::invalid_argument("circuit: single-qubit layer length != n");
    for (auto t : layer)
      if (t != kNoGate && t > 7) throw std::invalid_argument("circuit: exponent index out of range");
  }
  for (const auto& layer : two_q) {
    std::uint64_t used = 0;
    for (auto [a, b] : layer) {
      if (a < 0 || b < 0 || a >= n || b >= n || a == b) throw std::invalid_argument("circuit: bad pair");
      std::uint64_t m = (std::uint64_t{1} << a) | (std::uint64_t{1} << b);
      if (used & m) throw std::invalid_argument("circuit: pairs in a layer must be disjoint");
      used |= m;
    }
  }
}

std::size_t CircuitSpec::two_qubit_gate_count() const {
  std::size_t c = 0;
  for (const auto& l : two_q) c += l.size();
  return c;
}

std::size_t CircuitSpec::one_qubit_gate_count() const {
  std::size_t c = 0;
  for (const auto& l : one_q) c += std::count_if(l.begin(), l.end(), [](auto t) { return t != kNoGate; });
  return c;
}

BasisMask BasisMask::random(int n, Rng& rng) {
  std::uint64_t mask = n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  return {n, rng.next() & mask};
}

double StateVector::norm_sq() const { return kernels::norm_sq(amp.data(), amp.size()); }

Mat2 one_qubit_gate(std::uint8_t t) {
  const double phi = (double(t) - 4.0) / 4.0 * std::numbers::pi;
  const cplx mi(0, -1);
  return {cplx(kInvSqrt2), mi * std::polar(kInvSqrt2, -phi), mi * std::polar(kInvSqrt2, phi), cplx(kInvSqrt2)};
}

Mat2 hadamard() { return {cplx(kInvSqrt2), cplx(kInvSqrt2), cplx(kInvSqrt2), cplx(-kInvSqrt2)}; }

Mat2 dagger(const Mat2& m) { return {std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])}; }

CircuitSpec gen_circuit(int n, int layer_count, int pairs_per_layer, std::uint64_t rng_seed, int final_pairs) {
  if (n < 2 || n % 2) throw std::invalid_argument("gen_circuit: n must be even and >= 2");
  if (layer_count < 0 || pairs_per_layer < 0 || pairs_per_layer > n / 2 || final_pairs < 0 || final_pairs > n / 2)
    throw std::invalid_argument("gen_circuit: pairs per layer exceed n/2");
  Rng rng(rng_seed, 0x63697263);
  CircuitSpec c;
  c.n = n;
  c.seed = rng_seed;
  auto full_layer = [&] {
    std::vector<std::uint8_t> l(n);
    for (auto& t : l) t = std::uint8_t(rng.below(8));
    return l;
  };
  c.one_q.push_back(full_layer());
  for (int i = 0; i < layer_count; ++i) {
    c.two_q.push_back(random_pairs(n, pairs_per_layer, rng));
    c.one_q.push_back(full_layer());
  }
  if (final_pairs > 0) {
    c.two_q.push_back(random_pairs(n, final_pairs, rng));
    std::vector<std::uint8_t> l(n, kNoGate);
    for (auto [a, b] : c.two_q.back()) {
      l[a] = std::uint8_t(rng.below(8));
      l[b] = std::uint8_t(rng.below(8));
    }
    c.one_q.push_back(std::move(l));
  }
  return c;
}

StateVector zero_state(int n) {
  check_dim(n);
  StateVector s;
  s.n = n;
  s.amp.assign(std::size_t{1} << n, cplx(0));
  s.amp[0] = 1.0;
  return s;
}

void apply_one_qubit_layer(StateVector& s, const std::vector<std::uint8_t>& layer, bool inverse) {
  for (int q = 0; q < s.n; ++q) {
    if (layer[q] == kNoGate) continue;
    Mat2 m = one_qubit_gate(layer[q]);
    if (inverse) m = dagger(m);
    kernels::apply_1q(s.amp.data(), s.n, q, m.data());
  }
}

// RZZ(pi/2) per pair: e^{-i pi/4} on equal bits, e^{+i pi/4} on differing bits.
// With D differing pairs out of P the phase is e^{i pi/4 (2D - P)}.
void apply_two_qubit_layer(StateVector& s, const std::vector<std::pair<int, int>>& pairs, bool inverse) {
  if (pairs.empty()) return;
  const int P = int(pairs.size());
  std::vector<cplx> table(P + 1);
  for (int d = 0; d <= P; ++d) {
    double ang = std::numbers::pi / 4 * (2 * d - P);
    table[d] = std::polar(1.0, inverse ? -ang : ang);
  }
  auto pt = kernels::make_parity_tables(s.n, pairs);
  kernels::apply_phase(s.amp.data(), s.n, pt, table.data());
}

void apply_basis(StateVector& s, const BasisMask& basis) {
  Mat2 h = hadamard();
  for (int q = 0; q < s.n; ++q)
    if (basis.is_x(q)) kernels::apply_1q(s.amp.data(), s.n, q, h.data());
}

void run_prefix(StateVector& s, const CircuitSpec& spec, std::size_t cut) {
  apply_one_qubit_layer(s, spec.one_q[0]);
  for (std::size_t l = 0; l < cut && l < spec.two_q.size(); ++l) {
    apply_two_qubit_layer(s, spec.two_q[l]);
    apply_one_qubit_layer(s, spec.one_q[l + 1]);
  }
}

void run_suffix(StateVector& s, const CircuitSpec& spec, const BasisMask& basis, std::size_t cut) {
  for (std::size_t l = cut; l < spec.two_q.size(); ++l) {
    apply_two_qubit_layer(s, spec.two_q[l]);
    apply_one_qubit_layer(s, spec.one_q[l + 1]);
  }
  apply_basis(s, basis);
}

StateVector evolve(const CircuitSpec& spec, const BasisMask& basis) {
  spec.validate();
  if (basis.n != spec.n) throw std::invalid_argument("evolve: basis length != n");
  StateVector s = zero_state(spec.n);
  run_prefix(s, spec, spec.two_q.size());
  apply_basis(s, basis);
  return s;
}

cplx amplitude(const CircuitSpec& spec, const BasisMask& basis, std::uint64_t z) {
  spec.validate();
  check_dim(spec.n);
  if (basis.n != spec.n) throw std::invalid_argument("amplitude: basis length != n");
  if (z >> spec.n) throw std::invalid_argument("amplitude: bitstring longer than n");
  StateVector s;
  s.n = spec.n;
  s.amp.assign(std::size_t{1} << spec.n, cplx(0));
  s.amp[z] = 1.0;
  apply_basis(s, basis);
  for (std::size_t l = spec.two_q.size(); l-- > 0;) {
    apply_one_qubit_layer(s, spec.one_q[l + 1], true);
    apply_two_qubit_layer(s, spec.two_q[l], true);
  }
  apply_one_qubit_layer(s, spec.one_q[0], true);
  return std::conj(s.amp[0]);
}

std::vector<std::uint64_t> born_sample(const StateVector& state, Rng& rng, std::size_t count,
                                       bool allow_unnormalized) {
  if (!allow_unnormalized && (!state.normalized || std::fabs(state.norm_sq() - 1.0) > 1e-8))
    throw std::invalid_argument("born_sample: state is not normalized");
  std::vector<double> cdf(state.dim());
  double acc = 0;
  for (std::size_t i = 0; i < state.dim(); ++i) cdf[i] = (acc += std::norm(state.amp[i]));
  std::vector<std::uint64_t> out(count);
  for (auto& z : out) {
    double u = rng.uniform() * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    z = std::min<std::uint64_t>(std::uint64_t(it - cdf.begin()), state.dim() - 1);
  }
  return out;
}

SliceSpec random_slice(const CircuitSpec& spec, std::vector<int> qubits, double f, Rng& rng) {
  if (qubits.empty() || qubits.size() > 12) throw std::invalid_argument("random_slice: need 1..12 slice qubits");
  SliceSpec s;
  s.slice_qubits = std::move(qubits);
  s.cut_layer = spec.two_q.size() / 2;
  auto total = std::uint32_t(s.n_slices());
  auto keep = std::uint32_t(std::lround(std::clamp(f, 0.0, 1.0) * total));
  auto perm = shuffled_indices(total, rng);
  s.included.assign(perm.begin(), perm.begin() + keep);
  std::sort(s.included.begin(), s.included.end());
  return s;
}

StateVector partial_state_unnormalized(const CircuitSpec& spec, const BasisMask& basis, const SliceSpec& slice) {
  spec.validate();
  if (slice.included.empty()) throw std::invalid_argument("sliced_state: empty slice set");
  if (slice.cut_layer > spec.two_q.size()) throw std::invalid_argument("sliced_state: cut outside circuit");
  for (int q : slice.slice_qubits)
    if (q < 0 || q >= spec.n) throw std::invalid_argument("sliced_state: slice qubit out of range");
  std::vector<char> in(slice.n_slices(), 0);
  for (auto j : slice.included) {
    if (j >= in.size()) throw std::invalid_argument("sliced_state: pattern index out of range");
    in[j] = 1;
  }
  StateVector s = zero_state(spec.n);
  run_prefix(s, spec, slice.cut_layer);
  for (std::size_t x = 0; x < s.dim(); ++x)
    if (!in[pattern_of(x, slice.slice_qubits)]) s.amp[x] = 0;
  run_suffix(s, spec, basis, slice.cut_layer);
  s.normalized = false;
  return s;
}

SlicedResult sliced_state(const CircuitSpec& spec, const BasisMask& basis, const SliceSpec& slice,
                          const std::vector<std::uint64_t>& probes) {
  SlicedResult r;
  StateVector part = partial_state_unnormalized(spec, basis, slice);
  for (auto z : probes) {
    if (z >= part.dim()) throw std::invalid_argument("sliced_state: probe out of range");
    r.partial_amplitudes.push_back(part.amp[z]);
  }
  r.weight = part.norm_sq();
  double inv = 1.0 / std::sqrt(r.weight);
  for (auto& a : part.amp) a *= inv;
  part.normalized = true;
  StateVector full = evolve(spec, basis);
  cplx overlap = 0;
  for (std::size_t i = 0; i < full.dim(); ++i) overlap += std::conj(part.amp[i]) * full.amp[i];
  r.fidelity = std::norm(overlap);
  r.partial_state = std::move(part);
  return r;
}

std::vector<std::vector<cplx>> slice_amplitudes(const CircuitSpec& spec, const BasisMask& basis,
                                                const std::vector<int>& slice_qubits, std::size_t cut_layer,
                                                const std::vector<std::uint64_t>& probes) {
  spec.validate();
  StateVector head = zero_state(spec.n);
  run_prefix(head, spec, cut_layer);
  const std::size_t ns = std::size_t{1} << slice_qubits.size();
  std::vector<std::vector<cplx>> out(probes.size(), std::vector<cplx>(ns));
  for (std::size_t j = 0; j < ns; ++j) {
    StateVector s = head;
    for (std::size_t x = 0; x < s.dim(); ++x)
      if (pattern_of(x, slice_qubits) != j) s.amp[x] = 0;
    run_suffix(s, spec, basis, cut_layer);
    for (std::size_t i = 0; i < probes.size(); ++i) out[i][j] = s.amp[probes[i]];
  }
  return out;
}

std::string to_hex(std::uint64_t z, int n) {
  static const char* digits = "0123456789abcdef";
  int nd = (n + 3) / 4;
  std::string s(nd, '0');
  for (int i = 0; i < nd; ++i) s[nd - 1 - i] = digits[(z >> (4 * i)) & 0xF];
  return s;
}

std::uint64_t from_hex(const std::string& hex, int n) {
  if (int(hex.size()) != (n + 3) / 4) throw std::invalid_argument("from_hex: wrong bitstring length");
  std::uint64_t z = 0;
  for (char c : hex) {
    int v;
    if (c >= '0' && c <= '9')
      v = c - '0';
    else if (c >= 'a' && c <= 'f')
      v = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F')
      v = c - 'A' + 10;
    else
      throw std::invalid_argument("from_hex: bad digit");
    z = (z << 4) | std::uint64_t(v);
  }
  if (n < 64 && (z >> n)) throw std::invalid_argument("from_hex: bits beyond n");
  return z;
}

nlohmann::json to_json(const CircuitSpec& spec) {
  nlohmann::json j;
  j["n"] = spec.n;
  j["seed"] = spec.seed;
  j["layers"] = spec.two_q.size();
  j["two_qubit_gates"] = spec.two_qubit_gate_count();
  j["one_qubit_gates"] = spec.one_qubit_gate_count();
  auto& oq = j["one_q"] = nlohmann::json::array();
  for (const auto& l : spec.one_q) {
    auto row = nlohmann::json::array();
    for (auto t : l) row.push_back(t == kNoGate ? -1 : int(t));
    oq.push_back(row);
  }
  auto& tq = j["two_q"] = nlohmann::json::array();
  for (const auto& l : spec.two_q) {
    auto row = nlohmann::json::array();
    for (auto [a, b] : l) row.push_back({a, b});
    tq.push_back(row);
  }
  return j;
}

CircuitSpec circuit_from_json(const nlohmann::json& j) {
  CircuitSpec c;
  c.n = j.at("n").get<int>();
  c.seed = j.value("seed", std::uint64_t{0});
  for (const auto& row : j.at("one_q")) {
    std::vector<std::uint8_t> l;
    for (const auto& t : row) {
      int v = t.get<int>();
      l.push_back(v < 0 ? kNoGate : std::uint8_t(v));
    }
    c.one_q.push_back(std::move(l));
  }
  for (const auto& row : j.at("two_q")) {
    std::vector<std::pair<int, int>> l;
    for (const auto& p : row) l.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
    c.two_q.push_back(std::move(l));
  }
  c.validate();
  return c;
}

std::vector<std::uint64_t> distinct_uniform(Rng& rng, std::uint64_t N, std::size_t count) {
  if (count > N) throw std::invalid_argument("distinct_uniform: count exceeds range");
  std::vector<std::uint64_t> out;
  out.reserve(count);
  if (2 * count > N) {
    std::vector<std::uint64_t> all(N);
    std::iota(all.begin(), all.end(), std::uint64_t{0});
    for (std::size_t i = 0; i < count; ++i) {
      std::swap(all[i], all[i + rng.below(N - i)]);
      out.push_back(all[i]);
    }
    return out;
  }
  std::unordered_set<std::uint64_t> seen;
  while (out.size() < count) {
    std::uint64_t z = rng.below(N);
    if (seen.insert(z).second) out.push_back(z);
  }
  return out;
}

}  // namespace certamp
