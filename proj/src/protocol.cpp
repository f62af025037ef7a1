#include "certamp/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "certamp/errors.hpp"
#include "certamp/gf2.hpp"

namespace certamp {

// ---- latency ----------------------------------------------------------------

void LatencyModel::validate() const {
  if (layer_mean < 0 || layer_jitter < 0 || tm_mean < 0 || tm_jitter < 0 || tail_extra < 0)
    throw std::invalid_argument("latency: negative mean or jitter");
  if (!(tail_prob >= 0 && tail_prob <= 1) || !(fail_prob >= 0 && fail_prob <= 1))
    throw std::invalid_argument("latency: probabilities outside [0,1]");
}

nlohmann::json LatencyModel::to_json() const {
  return {{"layer_mean", layer_mean}, {"layer_jitter", layer_jitter}, {"tm_mean", tm_mean},
          {"tm_jitter", tm_jitter},   {"tail_prob", tail_prob},       {"tail_extra", tail_extra},
          {"fail_prob", fail_prob}};
}

RoundLatency latency_model(const LatencyModel& lat, int layer_count, Rng& rng) {
  lat.validate();
  RoundLatency r;
  r.layers.resize(std::size_t(std::max(layer_count, 0)));
  for (auto& t : r.layers) t = std::max(0.0, lat.layer_mean + lat.layer_jitter * rng.normal());
  r.T_M = std::max(0.0, lat.tm_mean + lat.tm_jitter * rng.normal());
  if (lat.tail_prob > 0 && rng.bernoulli(lat.tail_prob)) r.T_M += lat.tail_extra;
  r.failed = lat.fail_prob > 0 && rng.bernoulli(lat.fail_prob);
  return r;
}

ServerResponse SimulatedServer::respond(const CircuitSpec& spec, const BasisMask& basis, Rng& rng) {
  ServerResponse out;
  out.latency = latency_model(lat_, int(spec.depth()), rng);
  if (out.latency.failed) return out;
  if (adv_.kind == AdversaryKind::honest) {
    StateVector ideal = adv_.phi > 0 ? evolve(spec, basis) : StateVector{};
    out.z = adv_.phi > 0 ? honest_sample(ideal, adv_.phi, rng) : rng.below(std::uint64_t{1} << spec.n);
  } else {
    out.z = adversary_sample(adv_, spec, basis, StateVector{}, rng);
  }
  return out;
}

// ---- config / records -------------------------------------------------------------

void ProtocolConfig::validate() const {
  if (n < 2 || n > kMaxQubits || n % 2) throw std::invalid_argument("protocol: n must be even, 2..24");
  if (m < 1) throw std::invalid_argument("protocol: m >= 1");
  if (L < 1) throw std::invalid_argument("protocol: L >= 1");
  if (!(gamma > 0 && gamma <= 1)) throw std::invalid_argument("protocol: gamma outside (0,1]");
  if (!(T_batch > 0)) throw std::invalid_argument("protocol: T_batch must be positive");
  if (p_max != 0 && !(p_max > 1.0 / N())) throw std::invalid_argument("protocol: p_max must exceed 1/N");
  if (layers < 0) throw std::invalid_argument("protocol: negative layer count");
  latency.validate();
}

nlohmann::json ProtocolConfig::to_json() const {
  return {{"n", n},
          {"m", m},
          {"L", L},
          {"gamma", gamma},
          {"p_max", cap()},
          {"s_star", s_star},
          {"T_batch", T_batch},
          {"layers", layers},
          {"pairs", pairs_per_layer()},
          {"latency", latency.to_json()},
          {"normalization", norm == Normalization::expected ? "gamma_L" : "validated"}};
}

nlohmann::json RoundRecord::to_json(int n) const {
  nlohmann::json j = {{"round", round},
                      {"slot", slot},
                      {"circuit_seed", circuit_seed},
                      {"basis", to_hex(basis, n)},
                      {"z", timeout ? std::string("timeout") : to_hex(z, n)},
                      {"T_M", T_M},
                      {"tested", tested}};
  if (tested) {
    j["p"] = p;
    j["x"] = x;
  }
  return j;
}

RoundRecord RoundRecord::from_json(const nlohmann::json& j, int n) {
  RoundRecord r;
  r.round = j.at("round").get<std::int64_t>();
  r.slot = j.at("slot").get<int>();
  r.circuit_seed = j.at("circuit_seed").get<std::uint64_t>();
  r.basis = from_hex(j.at("basis").get<std::string>(), n);
  const auto zs = j.at("z").get<std::string>();
  r.timeout = zs == "timeout";
  r.z = r.timeout ? 0 : from_hex(zs, n);
  r.T_M = j.at("T_M").get<double>();
  r.tested = j.at("tested").get<bool>();
  if (r.tested) {
    r.p = j.at("p").get<double>();
    r.x = j.at("x").get<double>();
  }
  return r;
}

double Transcript::recompute_score() const {
  double sum = 0;
  for (const auto& r : records)
    if (r.tested) sum += r.x;
  return denom > 0 ? sum / denom : 0.0;
}

nlohmann::json Transcript::summary() const {
  return {{"n", n},
          {"s", s},
          {"s_star", s_star},
          {"accepted", accepted},
          {"normalization", norm == Normalization::expected ? "gamma_L" : "validated"},
          {"denom", denom},
          {"rounds", rounds},
          {"tested", tested},
          {"timeouts", timeouts}};
}

void Transcript::write_jsonl(std::ostream& os) const {
  for (const auto& r : records) os << r.to_json(n).dump() << '\n';
}

Transcript Transcript::read_jsonl(std::istream& is, const nlohmann::json& summary) {
  Transcript t;
  t.n = summary.at("n").get<int>();
  t.s = summary.at("s").get<double>();
  t.s_star = summary.at("s_star").get<double>();
  t.accepted = summary.at("accepted").get<bool>();
  t.norm = summary.at("normalization").get<std::string>() == "gamma_L" ? Normalization::expected
                                                                       : Normalization::validated;
  t.denom = summary.at("denom").get<double>();
  t.rounds = summary.at("rounds").get<std::int64_t>();
  t.tested = summary.at("tested").get<std::int64_t>();
  t.timeouts = summary.at("timeouts").get<std::int64_t>();
  std::string line;
  while (std::getline(is, line))
    if (!line.empty()) t.records.push_back(RoundRecord::from_json(nlohmann::json::parse(line), t.n));
  return t;
}

// ---- round engine -----------------------------------------------------------------

namespace {

// Supplies the verifier's per-round choices. Expansion draws them from an
// Rng; amplification takes them from B and the weak source.
struct RoundSource {
  virtual ~RoundSource() = default;
  virtual CircuitSpec circuit(const ProtocolConfig& c, std::uint64_t& seed_out) = 0;
  virtual BasisMask basis(int n) = 0;
  virtual bool tested(double gamma) = 0;
  virtual int slot(int m) = 0;
};

struct RngRoundSource : RoundSource {
  explicit RngRoundSource(Rng& r) : rng(r) {}
  CircuitSpec circuit(const ProtocolConfig& c, std::uint64_t& seed_out) override {
    seed_out = rng.next();
    return gen_circuit(c.n, c.layers, c.pairs_per_layer(), seed_out);
  }
  BasisMask basis(int n) override { return BasisMask::random(n, rng); }
  bool tested(double gamma) override { return rng.bernoulli(gamma); }
  int slot(int m) override { return int(rng.below(std::uint64_t(m))); }
  Rng& rng;
};

Transcript run_rounds(const ProtocolConfig& c, Server& server, RoundSource& src, Rng& server_rng) {
  c.validate();
  Transcript t;
  t.n = c.n;
  t.norm = c.norm;
  t.s_star = c.s_star;
  t.rounds = c.L;
  const double N = c.N(), cap = c.cap();
  for (std::int64_t i = 0; i < c.L; ++i) {
    const bool tested = src.tested(c.gamma);
    const int chosen = c.m > 1 ? src.slot(c.m) : 0;
    for (int j = 0; j < c.m; ++j) {
      RoundRecord r;
      r.round = i;
      r.slot = j;
      CircuitSpec spec = src.circuit(c, r.circuit_seed);
      BasisMask basis = src.basis(c.n);
      r.basis = basis.x_bits;
      ServerResponse resp = server.respond(spec, basis, server_rng);
      r.T_M = resp.latency.T_M;
      r.timeout = resp.latency.failed || resp.latency.T_M > c.T_batch;
      r.z = r.timeout ? 0 : resp.z;
      if (r.timeout) ++t.timeouts;
      if (tested && j == chosen) {
        r.tested = true;
        ++t.tested;
        r.p = r.timeout ? 0.0 : std::norm(amplitude(spec, basis, r.z));
        r.x = N * std::min(r.p, cap);
      }
      t.records.push_back(r);
    }
  }
  t.denom = c.norm == Normalization::expected ? c.gamma * double(c.L) : double(t.tested);
  t.s = t.recompute_score();
  t.accepted = t.tested > 0 && t.s >= c.s_star;
  return t;
}

}  // namespace

Transcript run_expansion(const ProtocolConfig& config, Server& server, Rng& rng) {
  Rng verifier = rng.fork(1), server_rng = rng.fork(2);
  RngRoundSource src(verifier);
  return run_rounds(config, server, src, server_rng);
}

// ---- weak source --------------------------------------------------------------------

double WeakSourceSpec::alpha() const {
  switch (kind) {
    case WeakKind::uniform: return 1.0;
    case WeakKind::iid_biased: return -std::log2(std::max(p1, 1 - p1));
    case WeakKind::block:
      return (1.0 + double(period - 1) * -std::log2(std::max(bias, 1 - bias))) / double(period);
  }
  return 0;
}

void WeakSourceSpec::validate() const {
  if (kind == WeakKind::iid_biased && !(p1 > 0 && p1 < 1)) throw std::invalid_argument("weak: p1 outside (0,1)");
  if (kind == WeakKind::block) {
    if (period < 1) throw std::invalid_argument("weak: period >= 1");
    if (!(bias > 0 && bias < 1)) throw std::invalid_argument("weak: bias outside (0,1)");
  }
}

nlohmann::json WeakSourceSpec::to_json() const {
  nlohmann::json j = {{"alpha", alpha()}, {"discard", discard}};
  switch (kind) {
    case WeakKind::uniform: j["kind"] = "uniform"; break;
    case WeakKind::iid_biased:
      j["kind"] = "iid";
      j["p1"] = p1;
      break;
    case WeakKind::block:
      j["kind"] = "block";
      j["period"] = period;
      j["bias"] = bias;
      break;
  }
  return j;
}

WeakSourceSpec WeakSourceSpec::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  WeakSourceSpec s;
  if (parts.empty()) throw std::invalid_argument("weak: empty spec");
  if (parts[0] == "uniform" && parts.size() == 1) {
    s.kind = WeakKind::uniform;
  } else if (parts[0] == "iid" && parts.size() == 2) {
    s.kind = WeakKind::iid_biased;
    s.p1 = std::stod(parts[1]);
  } else if (parts[0] == "block" && parts.size() == 3) {
    s.kind = WeakKind::block;
    s.period = std::stoi(parts[1]);
    s.bias = std::stod(parts[2]);
  } else {
    throw std::invalid_argument("weak: expected uniform, iid:<p1> or block:<period>:<bias>, got " + text);
  }
  s.validate();
  return s;
}

WeakSource::WeakSource(WeakSourceSpec spec, Rng rng) : spec_(spec), rng_(rng) { spec_.validate(); }

bool WeakSource::next_bit() {
  bool b = false;
  switch (spec_.kind) {
    case WeakKind::uniform: b = rng_.next() >> 63; break;
    case WeakKind::iid_biased: b = rng_.bernoulli(spec_.p1); break;
    case WeakKind::block:
      b = pos_ == 0 ? bool(rng_.next() >> 63) : (rng_.bernoulli(spec_.bias) ? prev_ : !prev_);
      pos_ = (pos_ + 1) % spec_.period;
      prev_ = b;
      break;
  }
  ++consumed_;
  return b;
}

BitBlock WeakSource::draw(std::size_t count) {
  BitBlock out(count, Provenance::weak_source);
  for (std::size_t i = 0; i < count; ++i) out.set(i, next_bit());
  for (std::size_t i = 0; i < spec_.discard; ++i) next_bit();
  return out;
}

BitBlock weak_bits(const WeakSourceSpec& spec, std::size_t count, Rng& rng) {
  if (count == 0) throw std::invalid_argument("weak_bits: count >= 1");
  WeakSource src(spec, rng.fork(0x7765616b));
  rng.next();  // advance the caller's stream so repeated calls differ
  return src.draw(count);
}

double block_max_probability(const WeakSourceSpec& spec) {
  if (spec.kind != WeakKind::block) throw std::invalid_argument("block_max_probability: not a block source");
  if (spec.period > 24) throw std::invalid_argument("block_max_probability: period > 24");
  double best = 0;
  for (std::uint32_t pat = 0; pat < (1u << spec.period); ++pat) {
    double pr = 0.5;
    for (int i = 1; i < spec.period; ++i) {
      bool same = ((pat >> i) & 1u) == ((pat >> (i - 1)) & 1u);
      pr *= same ? spec.bias : 1 - spec.bias;
    }
    best = std::max(best, pr);
  }
  return best;
}

// ---- amplification ----------------------------------------------------------------

int trinomial_degree_at_least(int min_deg) {
  for (int d = std::max(min_deg, 2); d <= gf2::kCatalogMaxDegree; ++d)
    if (gf2::catalog_trinomial(d) > 0) return d;
  throw Infeasible("no catalog trinomial of degree >= " + std::to_string(min_deg));
}

nlohmann::json AmplificationResult::to_json() const {
  return {{"accepted", accepted},
          {"transcript", transcript.summary()},
          {"raz", raz.to_json()},
          {"quantum_first", quantum_first},
          {"blocks", outputs.size()},
          {"out_len", out_len},
          {"weak_bits_used", weak_bits_used},
          {"formal_only", formal_only}};
}

namespace {

// The private bit string B, produced on demand from the weak source.
class BStream {
 public:
  BStream(WeakSource& w, BMode mode) : weak_(w), mode_(mode) {
    if (mode_ == BMode::two_source) {
      deg_ = trinomial_degree_at_least(1279);
    }
  }
  std::uint64_t bits(unsigned count) {
    std::uint64_t v = 0;
    for (unsigned i = 0; i < count; ++i) v |= std::uint64_t(next()) << i;
    return v;
  }

 private:
  bool next() {
    if (pos_ == buf_.size()) refill();
    return buf_.get(pos_++);
  }
  void refill() {
    pos_ = 0;
    if (mode_ == BMode::direct) {
      buf_ = weak_.draw(4096);
      return;
    }
    // W1, a gap of the same length as W2, then W2
    BitBlock w1 = weak_.draw(2 * std::size_t(deg_));
    weak_.draw(std::size_t(deg_));
    BitBlock w2 = weak_.draw(std::size_t(deg_));
    buf_ = two_source_extract(w1, w2, std::size_t(deg_));
  }
  WeakSource& weak_;
  BMode mode_;
  int deg_ = 0;
  BitBlock buf_;
  std::size_t pos_ = 0;
};

struct AmpRoundSource : RoundSource {
  AmpRoundSource(WeakSource& w, BStream& b) : weak(w), B(b) {}
  CircuitSpec circuit(const ProtocolConfig& c, std::uint64_t& seed_out) override {
    // layout from B; every single-qubit gate from three weak-source key bits
    seed_out = B.bits(64);
    CircuitSpec spec = gen_circuit(c.n, c.layers, c.pairs_per_layer(), seed_out);
    BitBlock key = weak.draw(3 * spec.one_qubit_gate_count());
    std::size_t k = 0;
    for (auto& layer : spec.one_q)
      for (auto& t : layer)
        if (t != kNoGate) {
          t = std::uint8_t(key.get(k) | key.get(k + 1) << 1 | key.get(k + 2) << 2);
          k += 3;
        }
    return spec;
  }
  BasisMask basis(int n) override { return {n, B.bits(unsigned(n))}; }
  bool tested(double gamma) override { return double(B.bits(53)) * 0x1.0p-53 < gamma; }
  int slot(int m) override { return int(B.bits(32) % std::uint64_t(m)); }
  WeakSource& weak;
  BStream& B;
};

BitBlock padded(const BitBlock& b, std::size_t len) {
  BitBlock out = b;
  out.resize(len);
  return out;
}

}  // namespace

AmplificationResult run_amplification(const ProtocolConfig& config, Server& server, const WeakSourceSpec& weak_spec,
                                      const SoundnessBudget& budget, const AmplificationParams& params, Rng& rng) {
  config.validate();
  weak_spec.validate();
  if (budget.M < 1) throw std::invalid_argument("amplification: M >= 1");
  if (!(params.beta > 0 && params.beta <= 1)) throw std::invalid_argument("amplification: beta outside (0,1]");
  const double alpha = weak_spec.alpha();
  const std::size_t d = params.seed_len, n_y = d - 1;
  const auto Ln = std::size_t(config.L) * std::size_t(config.m) * std::size_t(config.n);

  // Extractor layout, checked before any round runs.
  AmplificationResult res;
  res.quantum_first = params.beta > 0.5;
  const double eps_target = params.enforce_eps_ts ? budget.eps_ts : std::numeric_limits<double>::infinity();
  const double kq = params.beta * double(Ln) - std::log2(1 / budget.eps_2);
  std::int64_t n1, n2;
  if (res.quantum_first) {
    n1 = 2 * std::int64_t(trinomial_degree_at_least(int((Ln + 1) / 2)));
    n2 = n1 / 2;
  } else {
    n1 = 2 * std::int64_t(trinomial_degree_at_least(int(Ln)));
    n2 = std::int64_t(Ln);
  }
  const double k1 = res.quantum_first ? kq : alpha * double(n1);
  const double k2 = res.quantum_first ? alpha * double(n2) : kq;
  auto raz = raz_feasible(n1, k1, n2, k2, std::int64_t(d), eps_target);
  if (!raz) throw Infeasible("amplification: two-source parameters infeasible for the declared alpha, beta");
  res.raz = *raz;
  res.formal_only = !params.enforce_eps_ts || config.n < 50;
  const CirculantSpec circ = circulant_params(n_y, alpha * double(n_y), budget.eps_seeded);
  res.out_len = circ.m;

  WeakSource weak(weak_spec, rng.fork(3));
  BStream B(weak, params.b_mode);
  AmpRoundSource src(weak, B);
  Rng server_rng = rng.fork(2);
  ProtocolConfig c = config;
  c.norm = Normalization::validated;
  res.transcript = run_rounds(c, server, src, server_rng);
  res.accepted = res.transcript.accepted;
  if (!res.accepted) {
    res.weak_bits_used = weak.consumed();
    return res;
  }

  BitBlock Z(0, Provenance::quantum);
  for (const auto& r : res.transcript.records) Z.push_bits(r.z, unsigned(config.n));
  BitBlock X = weak.draw(std::size_t(res.quantum_first ? n2 : n1));
  BitBlock S = res.quantum_first ? two_source_extract(padded(Z, std::size_t(n1)), X, d)
                                 : two_source_extract(X, padded(Z, std::size_t(n2)), d);
  for (std::size_t j = 0; j < std::size_t(budget.M); ++j) {
    BitBlock Y = weak.draw(n_y);
    res.outputs.push_back(circulant_extract(Y, S, circ.m));
  }
  res.weak_bits_used = weak.consumed();
  return res;
}

}  // namespace certamp
