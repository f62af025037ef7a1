#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "certamp/entropy.hpp"
#include "certamp/extract.hpp"
#include "certamp/protocol.hpp"

namespace certamp {

// Key/value config: one "key = value" per line, '#' starts a comment,
// optional [section] headers are ignored. Values may be quoted.
using KeyValues = std::map<std::string, std::string>;
KeyValues read_config(const std::string& path);
KeyValues parse_config(const std::string& text);

// The n = 64 full-scale instantiation.
struct FullScalePreset {
  int n = 64;
  std::int64_t L = 23'651, L_val = 11'961;
  double gamma = 0.59;
  double xeb = 0.586;
  double phi_adv = 0.65;
  double X = 5;             // adversary size, multiples of Aurora
  double T_M = 0.03;        // seconds
  double T_batch = 0.04;    // seconds
  double T_PVC = 4.9e5;     // seconds per circuit per GPU
  double distance = 3.0e6;  // meters
  double d_C = 1e-4;
  double eps_sou = 1e-3, eps_2 = 1e-8, eps_ts = 1e-8, eps_seeded = 1e-16, M = 1e8;
  Allocation alloc = Allocation::fixed_count;

  double distance_factor() const;
  double Phi_C() const;  // classical fidelity after the distance factor
  SoundnessBudget budget() const;
  // s* on the mean-of-N-min(p, p_max) scale for an honest device at xeb
  double s_star() const;
  RestrictedParams restricted() const;
  OracleParams oracle() const;
  AdHocParams adhoc() const;
  // T_batch = 40 ms; stall mass tuned to 53 timeouts in 23,651 rounds
  LatencyModel latency() const;

  void apply(const KeyValues& kv);
  nlohmann::json to_json() const;
};

// Desk-scale amplification: n = 12, L = 500, M = 10.
struct DeskPreset {
  int n = 12;
  std::int64_t L = 500;
  int layers = 10;
  double gamma = 0.59;
  double s_star = 1.0;  // between uniform (1 - e^-2) and honest phi = 0.9
  double phi = 0.9;
  double M = 10;
  double beta = 0.7;
  std::size_t seed_len = 293;
  double eps_sou = 1e-3, eps_2 = 1e-8, eps_ts = 1e-8, eps_seeded = 0x1p-20;

  ProtocolConfig protocol() const;
  SoundnessBudget budget() const;
  AmplificationParams amplification() const;

  void apply(const KeyValues& kv);
  nlohmann::json to_json() const;
};

}  // namespace certamp
