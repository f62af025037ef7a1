#include "certamp/presets.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "certamp/analysis.hpp"

namespace certamp {

namespace {

std::string trim_ws(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
void take(const KeyValues& kv, const std::string& key, T& out) {
  auto it = kv.find(key);
  if (it == kv.end()) return;
  std::istringstream is(it->second);
  T v{};
  is >> v;
  if (!is || !(is >> std::ws).eof()) throw std::invalid_argument("config: bad value for " + key + ": " + it->second);
  out = v;
}

}  // namespace

KeyValues parse_config(const std::string& text) {
  KeyValues kv;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim_ws(line);
    if (line.empty() || line.front() == '[') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim_ws(line.substr(0, eq)), val = trim_ws(line.substr(eq + 1));
    if (val.size() >= 2 && val.front() == '"' && val.back() == '"') val = val.substr(1, val.size() - 2);
    kv[key] = val;
  }
  return kv;
}

KeyValues read_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

// ---- full scale ------------------------------------------------------------------------

double FullScalePreset::distance_factor() const { return geography(T_M, distance).factor; }

double FullScalePreset::Phi_C() const { return classical_fidelity(X, T_M, T_PVC, distance_factor()); }

SoundnessBudget FullScalePreset::budget() const { return soundness_split(eps_sou, eps_2, eps_ts, eps_seeded, M); }

double FullScalePreset::s_star() const {
  return honest_truncated_mean(xeb, 2 * (1 - std::pow(std::ldexp(1.0, n), -1.0 / 3)));
}

RestrictedParams FullScalePreset::restricted() const {
  RestrictedParams r;
  r.n = n;
  r.L = L;
  r.L_val = L_val;
  r.chi = xeb;
  r.f_adv = Phi_C();
  r.phi = 1;
  r.eps_accept = eps_sou;
  r.eps_smooth = budget().eps_smooth;
  r.alloc = alloc;
  return r;
}

OracleParams FullScalePreset::oracle() const {
  OracleParams p;
  p.n = n;
  p.L = L;
  p.gamma = gamma;
  p.phi_adv = phi_adv;
  p.Phi_C = Phi_C();
  p.d_C = d_C;
  p.eps_smooth = budget().eps_smooth;
  p.eps_accept = eps_sou;
  p.s_star = s_star();
  return p;
}

AdHocParams FullScalePreset::adhoc() const {
  AdHocParams a;
  a.L = L;
  a.L_val = L_val;
  a.n = n;
  a.k = a.l = std::ldexp(1.0, 24);
  a.Phi_C = Phi_C();
  a.d_C = d_C;
  a.eps_smooth = budget().eps_smooth;
  a.eps_accept = eps_sou;
  a.eps1 = a.eps2 = eps_sou / 4;
  a.s_star = s_star();
  a.phi_adv = phi_adv;
  return a;
}

LatencyModel FullScalePreset::latency() const {
  LatencyModel lat;
  lat.tm_mean = 0.025;
  lat.tm_jitter = 0.002;
  lat.tail_prob = 53.0 / 23'651.0;
  lat.tail_extra = 0.5;
  return lat;
}

void FullScalePreset::apply(const KeyValues& kv) {
  take(kv, "n", n);
  take(kv, "L", L);
  take(kv, "L_val", L_val);
  take(kv, "gamma", gamma);
  take(kv, "xeb", xeb);
  take(kv, "phi_adv", phi_adv);
  take(kv, "X", X);
  take(kv, "T_M", T_M);
  take(kv, "T_batch", T_batch);
  take(kv, "T_PVC", T_PVC);
  take(kv, "distance", distance);
  take(kv, "d_C", d_C);
  take(kv, "eps_sou", eps_sou);
  take(kv, "eps_2", eps_2);
  take(kv, "eps_ts", eps_ts);
  take(kv, "eps_seeded", eps_seeded);
  take(kv, "M", M);
  if (auto it = kv.find("allocation"); it != kv.end()) {
    if (it->second == "fixed-count")
      alloc = Allocation::fixed_count;
    else if (it->second == "per-round")
      alloc = Allocation::per_round;
    else
      throw std::invalid_argument("config: allocation must be fixed-count or per-round");
  }
}

nlohmann::json FullScalePreset::to_json() const {
  return {{"n", n},
          {"L", L},
          {"L_val", L_val},
          {"gamma", gamma},
          {"xeb", xeb},
          {"phi_adv", phi_adv},
          {"X", X},
          {"T_M", T_M},
          {"T_batch", T_batch},
          {"T_PVC", T_PVC},
          {"distance", distance},
          {"distance_factor", distance_factor()},
          {"Phi_C", Phi_C()},
          {"d_C", d_C},
          {"s_star", s_star()},
          {"budget", budget().to_json()},
          {"allocation", alloc == Allocation::fixed_count ? "fixed-count" : "per-round"}};
}

// ---- desk ---------------------------------------------------------------------------

ProtocolConfig DeskPreset::protocol() const {
  ProtocolConfig c;
  c.n = n;
  c.L = L;
  c.layers = layers;
  c.gamma = gamma;
  c.s_star = s_star;
  return c;
}

SoundnessBudget DeskPreset::budget() const { return soundness_split(eps_sou, eps_2, eps_ts, eps_seeded, M); }

AmplificationParams DeskPreset::amplification() const {
  AmplificationParams a;
  a.beta = beta;
  a.seed_len = seed_len;
  return a;
}

void DeskPreset::apply(const KeyValues& kv) {
  take(kv, "n", n);
  take(kv, "L", L);
  take(kv, "layers", layers);
  take(kv, "gamma", gamma);
  take(kv, "s_star", s_star);
  take(kv, "phi", phi);
  take(kv, "M", M);
  take(kv, "beta", beta);
  take(kv, "seed_len", seed_len);
  take(kv, "eps_sou", eps_sou);
  take(kv, "eps_2", eps_2);
  take(kv, "eps_ts", eps_ts);
  take(kv, "eps_seeded", eps_seeded);
}

nlohmann::json DeskPreset::to_json() const {
  return {{"n", n},           {"L", L},           {"layers", layers},       {"gamma", gamma},
          {"s_star", s_star}, {"phi", phi},       {"M", M},                 {"beta", beta},
          {"seed_len", seed_len}, {"budget", budget().to_json()}};
}

}  // namespace certamp
