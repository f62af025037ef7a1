#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "certamp/adversary.hpp"
#include "certamp/bitblock.hpp"
#include "certamp/extract.hpp"
#include "certamp/qsim.hpp"
#include "certamp/rng.hpp"

namespace certamp {

// ---- latency ----------------------------------------------------------------

struct LatencyModel {
  double layer_mean = 1e-3, layer_jitter = 0;  // per streamed layer, seconds
  double tm_mean = 0.02, tm_jitter = 0;        // basis-to-bitstring latency T_M
  double tail_prob = 0, tail_extra = 0;        // occasional stall added to T_M
  double fail_prob = 0;                        // simulated connection failure

  void validate() const;
  nlohmann::json to_json() const;
};

struct RoundLatency {
  std::vector<double> layers;
  double T_M = 0;
  bool failed = false;
};

// Normal jitter clamped at zero; the tail stall is a Bernoulli add-on.
RoundLatency latency_model(const LatencyModel& lat, int layer_count, Rng& rng);

// ---- server -------------------------------------------------------------------

struct ServerResponse {
  std::uint64_t z = 0;
  RoundLatency latency;
};

class Server {
 public:
  virtual ~Server() = default;
  virtual ServerResponse respond(const CircuitSpec& spec, const BasisMask& basis, Rng& rng) = 0;
};

// In-process server: an adversary config for the bitstring and a latency model for T_M.
class SimulatedServer : public Server {
 public:
  SimulatedServer(AdversaryConfig adv, LatencyModel lat) : adv_(adv), lat_(lat) {}
  ServerResponse respond(const CircuitSpec& spec, const BasisMask& basis, Rng& rng) override;
  const AdversaryConfig& adversary() const { return adv_; }

 private:
  AdversaryConfig adv_;
  LatencyModel lat_;
};

// ---- expansion ----------------------------------------------------------------

// expected: divide by gamma L (round protocol); validated: divide by |V|.
enum class Normalization { expected, validated };

struct ProtocolConfig {
  int n = 12;
  int m = 1;  // circuits per round; one of them is validated when the round is tested
  std::int64_t L = 500;
  double gamma = 0.59;
  double p_max = 0;  // 0 means 2/N
  double s_star = 1.0;  // threshold on the mean of N min(p, p_max)
  double T_batch = 0.04;
  int layers = 10;
  int pairs = -1;  // -1 means n/2
  LatencyModel latency;
  Normalization norm = Normalization::expected;

  double N() const { return std::ldexp(1.0, n); }
  double cap() const { return p_max > 0 ? p_max : 2.0 / N(); }
  int pairs_per_layer() const { return pairs < 0 ? n / 2 : pairs; }
  void validate() const;
  nlohmann::json to_json() const;
};

struct RoundRecord {
  std::int64_t round = 0;
  int slot = 0;
  std::uint64_t circuit_seed = 0;
  std::uint64_t basis = 0;
  std::uint64_t z = 0;  // 0 on timeout
  bool timeout = false;
  double T_M = 0;
  bool tested = false;
  double p = 0;  // bitstring probability, tested records only
  double x = 0;  // N min(p, p_max), tested records only

  nlohmann::json to_json(int n) const;
  static RoundRecord from_json(const nlohmann::json& j, int n);
};

struct Transcript {
  int n = 0;
  std::vector<RoundRecord> records;
  Normalization norm = Normalization::expected;
  double denom = 1;
  double s = 0;
  double s_star = 0;
  bool accepted = false;
  std::int64_t rounds = 0, tested = 0, timeouts = 0;

  // Sums x over records in order and divides by denom.
  double recompute_score() const;
  nlohmann::json summary() const;
  void write_jsonl(std::ostream& os) const;
  static Transcript read_jsonl(std::istream& is, const nlohmann::json& summary);
};

Transcript run_expansion(const ProtocolConfig& config, Server& server, Rng& rng);

// ---- weak source ----------------------------------------------------------------

enum class WeakKind { uniform, iid_biased, block };

// block: each period starts with a fair bit; every later bit in the period
// repeats its predecessor with probability `bias`.
struct WeakSourceSpec {
  WeakKind kind = WeakKind::uniform;
  double p1 = 0.5;   // iid_biased: P[bit = 1]
  int period = 8;    // block
  double bias = 0.5; // block
  std::size_t discard = 0;  // bits skipped after every draw

  double alpha() const;  // min-entropy rate per bit
  void validate() const;
  nlohmann::json to_json() const;
  static WeakSourceSpec parse(const std::string& text);  // "uniform", "iid:<p1>", "block:<period>:<bias>"
};

class WeakSource {
 public:
  WeakSource(WeakSourceSpec spec, Rng rng);
  BitBlock draw(std::size_t count);
  std::size_t consumed() const { return consumed_; }
  const WeakSourceSpec& spec() const { return spec_; }

 private:
  bool next_bit();
  WeakSourceSpec spec_;
  Rng rng_;
  int pos_ = 0;
  bool prev_ = false;
  std::size_t consumed_ = 0;
};

BitBlock weak_bits(const WeakSourceSpec& spec, std::size_t count, Rng& rng);
// max over one period of the probability of a pattern, by enumeration (period <= 24)
double block_max_probability(const WeakSourceSpec& spec);

// ---- amplification ----------------------------------------------------------------

enum class BMode { direct, two_source };

struct AmplificationParams {
  double beta = 0.7;            // declared smooth min-entropy rate of the quantum output
  std::size_t seed_len = 293;   // d; each Y_j has d - 1 bits
  BMode b_mode = BMode::direct; // direct: weak bits assumed computationally uniform
  bool enforce_eps_ts = false;  // desk scale cannot reach the budget's eps_ts
};

struct AmplificationResult {
  Transcript transcript;
  bool accepted = false;
  std::vector<BitBlock> outputs;
  RazSpec raz;
  bool quantum_first = true;
  std::size_t out_len = 0;
  std::size_t weak_bits_used = 0;
  bool formal_only = false;

  nlohmann::json to_json() const;
};

// Desk degree layout: smallest degree >= min_deg with a catalog trinomial.
int trinomial_degree_at_least(int min_deg);

// Rejects infeasible extractor parameters before any round runs (throws Infeasible).
AmplificationResult run_amplification(const ProtocolConfig& config, Server& server, const WeakSourceSpec& weak,
                                      const SoundnessBudget& budget, const AmplificationParams& params, Rng& rng);

}  // namespace certamp
