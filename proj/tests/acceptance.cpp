// Acceptance runner: one PASS/FAIL line per criterion. Exit status is 1 if any
// criterion fails. `acceptance 3 9` runs only criteria 3 and 9.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "certamp/adversary.hpp"
#include "certamp/analysis.hpp"
#include "certamp/entropy.hpp"
#include "certamp/errors.hpp"
#include "certamp/extract.hpp"
#include "certamp/presets.hpp"
#include "certamp/protocol.hpp"
#include "certamp/qsim.hpp"
#include "certamp/scoring.hpp"
#include "certamp/special.hpp"
#include "certamp/stats.hpp"
#include "oracles.hpp"

using namespace certamp;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

BitBlock random_bits(std::size_t n, Rng& rng) {
  BitBlock b(n);
  for (auto& w : b.words()) w = rng.next();
  b.clear_tail();
  return b;
}

double var_se(const std::vector<double>& v, const MeanSe& ms) {
  double m4 = 0;
  for (double x : v) m4 += std::pow(x - ms.mean, 4);
  m4 /= double(v.size());
  return std::sqrt(std::max(m4 - ms.var * ms.var, 0.0) / double(v.size()));
}

// 1. Porter-Thomas statistics
Outcome porter_thomas() {
  const int n = 12, C = 200, per = 500;
  const double N = 4096;
  Rng rng(101);
  std::vector<double> u, b;
  for (int c = 0; c < C; ++c) {
    auto st = evolve(gen_circuit(n, 10, n / 2, 10'000 + c), BasisMask::random(n, rng));
    for (int i = 0; i < per; ++i) u.push_back(N * st.prob(rng.below(4096)));
    for (auto z : born_sample(st, rng, per)) b.push_back(N * st.prob(z));
  }
  double du = ks_one_sample(u, [](double x) { return 1 - std::exp(-x); }).statistic;
  double db = ks_one_sample(b, [](double x) { return 1 - (1 + x) * std::exp(-x); }).statistic;
  return {du < 0.02 && db < 0.02, fmt::format("KS Exp(1) {:.4f}, KS Gamma(2,1) {:.4f} (< 0.02)", du, db)};
}

// 2. XEB of honest servers through the round protocol
Outcome xeb_calibration() {
  bool ok = true;
  std::string d;
  for (double phi : {0.0, 0.6, 1.0}) {
    ProtocolConfig c;
    c.n = 12;
    c.L = 10'000;
    c.gamma = 1.0;
    c.s_star = 0;
    AdversaryConfig a;
    a.phi = phi;
    SimulatedServer srv(a, LatencyModel{});
    Rng rng(200 + std::uint64_t(phi * 10));
    Transcript t = run_expansion(c, srv, rng);
    std::vector<double> ps;
    for (const auto& r : t.records)
      if (r.tested) ps.push_back(r.p);
    double x = xeb_score(ps, c.n), se = mixture_xeb_stderr(phi, ps.size());
    ok &= std::fabs(x - phi) <= 3 * se;
    d += fmt::format("phi {}: {:.4f} (|dev| {:.1f} SE)  ", phi, x, std::fabs(x - phi) / se);
  }
  return {ok, d};
}

// 3. Partial contraction fidelity tracks the slice fraction
Outcome slicing_fidelity() {
  const int n = 16, C = 20;
  Rng rng(301);
  bool ok = true;
  std::string d;
  for (double f : {0.25, 0.5, 0.75}) {
    double sum = 0;
    for (int c = 0; c < C; ++c) {
      auto spec = gen_circuit(n, 12, n / 2, 20'000 + c);
      auto basis = BasisMask::random(n, rng);
      std::vector<int> q;
      for (auto v : distinct_uniform(rng, n, 6)) q.push_back(int(v));
      sum += sliced_state(spec, basis, random_slice(spec, q, f, rng), {}).fidelity;
    }
    double mean = sum / C;
    ok &= std::fabs(mean - f) <= 0.05;
    d += fmt::format("f {}: {:.4f}  ", f, mean);
  }
  return {ok, d + "(64 slices, |dev| <= 0.05)"};
}

// 4. Frugal and top-k samplers against their Monte-Carlo models
Outcome sampler_concordance() {
  const int n = 14, C = 200, per = 4;
  const double N = 1 << n, f = 0.5;
  Rng rng(401);
  std::vector<double> fr;
  std::vector<std::vector<double>> tops(3);
  for (int c = 0; c < C; ++c) {
    auto spec = gen_circuit(n, 12, n / 2, 30'000 + c);
    auto basis = BasisMask::random(n, rng);
    auto st = evolve(spec, basis);
    SlicedSampler s(spec, basis, f, 6, rng);
    for (int i = 0; i < per; ++i) fr.push_back(N * st.prob(s.frugal(4096, rng)));
    for (int idx = 0; idx < 3; ++idx)
      for (int i = 0; i < per; ++i) tops[std::size_t(idx)].push_back(N * st.prob(s.top(2 + 2 * idx, rng)));
  }
  bool ok = true;
  std::vector<double> mc;
  for (std::size_t i = 0; i < 20'000; ++i) mc.push_back(N * frugal_mc_p(f, N, rng));
  double pf = ks_two_sample(fr, mc).p_value;
  ok &= pf > 0.01;
  std::string d = fmt::format("frugal KS p {:.3f}", pf);
  for (int idx = 0; idx < 3; ++idx) {
    const int k = 2 + 2 * idx;
    const auto& v = tops[std::size_t(idx)];
    std::vector<double> model;
    for (std::size_t i = 0; i < 20'000; ++i) model.push_back(N * top_mc_p(f, k, N, rng));
    double pk = ks_two_sample(v, model).p_value;
    auto ms = mean_se(v);
    auto tm = top_moments(f, k, 1.0);
    double zm = std::fabs(ms.mean - tm.mean) / ms.se, zv = std::fabs(ms.var - tm.var) / var_se(v, ms);
    ok &= pk > 0.01 && zm <= 3 && zv <= 3;
    d += fmt::format("; top k={} KS p {:.3f} mean {:.1f} SE var {:.1f} SE", k, pk, zm, zv);
  }
  return {ok, d};
}

// 5. Entropy rates of the full-scale instantiation
Outcome entropy_rates() {
  FullScalePreset p;
  auto r = restricted_min_entropy(p.restricted());
  auto o = eat_optimize_kl(p.oracle());
  bool a = std::fabs(r.report.beta - 0.528) <= 0.03, b = std::fabs(o.beta - 0.137) <= 0.03;

  // monotonicity of the oracle bound in s*, Phi_C and the adversary fidelity
  bool mono = true;
  auto base = p.oracle();
  base.k = o.constants["k"].get<double>();
  base.l = o.constants["l"].get<double>();
  double prev = -1e300;
  for (double s : {base.s_star - 0.1, base.s_star, base.s_star + 0.1}) {
    auto q = base;
    q.s_star = s;
    double H = eat_min_entropy(q).H;
    mono &= H >= prev;
    prev = H;
  }
  prev = 1e300;
  for (double pc : {0.0, base.Phi_C, 2 * base.Phi_C}) {
    auto q = base;
    q.Phi_C = pc;
    double H = eat_min_entropy(q).H;
    mono &= H <= prev;
    prev = H;
  }
  prev = 1e300;
  for (double pa : {0.5, base.phi_adv, 0.8}) {
    auto q = base;
    q.phi_adv = pa;
    double H = eat_min_entropy(q).H;
    mono &= H <= prev;
    prev = H;
  }
  auto spec_tpvc = p;
  spec_tpvc.T_PVC = 9.8e5;
  double beta_alt = eat_optimize_kl(spec_tpvc.oracle()).beta;
  return {a && b && mono,
          fmt::format("(a) restricted beta {:.4f} vs 0.528 {}; (b) oracle beta {:.4f} vs 0.137 {}; monotone {}; "
                      "trace: X {} T_M {} s T_PVC {:.3g} s factor {:.4f} Phi_C {:.5f} s* {:.4f} k 2^{:.0f} l 2^{:.0f}"
                      " (T_PVC 9.8e5 gives {:.4f})",
                      r.report.beta, a ? "ok" : "MISS", o.beta, b ? "ok" : "MISS", mono ? "yes" : "NO", p.X, p.T_M,
                      p.T_PVC, p.distance_factor(), p.Phi_C(), base.s_star, std::log2(o.constants["k"].get<double>()),
                      std::log2(o.constants["l"].get<double>()), beta_alt)};
}

// 6. Zero-entropy threshold
Outcome zero_entropy() {
  auto p = FullScalePreset{}.oracle();
  p.k = p.l = std::exp2(24);  // the optimizer's choice for this preset
  double phi0 = zero_entropy_fidelity(p);
  Tradeoff f(p);
  const double X = p.N() * p.cap();
  bool mono = true;
  double prev = -1e300;
  for (int i = 0; i <= 40; ++i) {
    double h = f.h(honest_truncated_mean(0.02 * i + 0.1, X));
    mono &= h >= prev - 1e-12;
    prev = h;
  }
  bool ok = phi0 > 0 && phi0 < 0.586 && mono;
  return {ok, fmt::format("h crosses zero at honest XEB {:.4f} (s = {:.4f}), in (0, 0.586); monotone {}", phi0,
                          honest_truncated_mean(phi0, X), mono ? "yes" : "NO")};
}

// 7. EAT constants against 50-digit evaluation
Outcome eat_constants_check() {
  Rng rng(701);
  double worst = 0;
  bool alpha_ok = true;
  for (int i = 0; i < 100; ++i) {
    double var = std::exp(rng.uniform() * 12 - 2);
    double w = 3 + rng.uniform() * 200;
    int n = 12 + int(rng.below(60));
    double m = 1 + double(rng.below(3));
    std::int64_t L = 1000 + std::int64_t(rng.below(100'000));
    double es = std::exp(-1 - rng.uniform() * 20), ea = std::exp(-1 - rng.uniform() * 20);
    auto k = eat_constants(1.0, var, w, n, m, L, es, ea);
    auto o = oracle::eat_constants_mp(var, w, n, m, L, es, ea);
    for (auto [x, y] : {std::pair{k.V, o.V}, {k.c, o.c}, {k.K, o.K}, {k.c_prime, o.c_prime}})
      worst = std::max(worst, std::fabs(x - y) / std::fabs(y));
    alpha_ok &= k.H_alpha >= k.H_fixed - 1e-9 * std::fabs(k.H_fixed);
  }
  return {worst <= 1e-10 && alpha_ok,
          fmt::format("max relative error {:.2e} (<= 1e-10); alpha-optimized >= fixed {}", worst,
                      alpha_ok ? "everywhere" : "VIOLATED")};
}

// 8. Ad-hoc bound dominates the simulated shape-mixture adversary
Outcome adhoc_dominance() {
  AdHocParams p;
  p.n = 64;
  p.L = 2000;
  p.L_val = 200;
  p.k = p.l = std::exp2(24);
  p.d_C = 1e-4;
  p.eps1 = p.eps2 = 1e-3;
  Rng rng(801);
  bool ok = true;
  std::string d;
  for (auto [Phi, s] : {std::pair{0.3, 1.1}, std::pair{0.5, 1.2}, std::pair{0.7, 1.3}}) {
    p.s_star = s;
    double bound = std::min(1.0, adhoc_terms_for_phi(p, Phi).eps3 + p.eps1 + p.eps2);
    const std::size_t T = 10'000;
    double freq = simulate_shape_mixture(p, Phi, T, rng);
    double se = std::sqrt(std::max(freq * (1 - freq), 1.0 / T) / T);
    ok &= freq <= bound + 3 * se;
    d += fmt::format("(Phi {}, chi {}): sim {:.4f} bound {:.4f}  ", Phi, s, freq, bound);
  }
  return {ok, d};
}

// 9. Extractors
Outcome extractors() {
  Rng rng(901);
  bool lin = true;
  for (int t = 0; t < 1000; ++t) {
    BitBlock s = random_bits(293, rng), x = random_bits(292, rng), y = random_bits(292, rng);
    lin &= circulant_extract(x ^ y, s, 150) == (circulant_extract(x, s, 150) ^ circulant_extract(y, s, 150));
    BitBlock a = random_bits(2 * 607, rng), b = random_bits(2 * 607, rng), z = random_bits(607, rng);
    lin &= two_source_extract(a ^ b, z, 300) == (two_source_extract(a, z, 300) ^ two_source_extract(b, z, 300));
  }
  const bool len = circulant_params(292, 200, std::exp2(-50.0)).m == 100 &&
                   circulant_params(4092, 4092 * 0.41, 1e-16).m == 1571 &&
                   seeded_output_len(1.0, 4092, 1e-16) == 3985;

  RazLayout weak_first;
  weak_first.quantum_bits = oracle::kQuantumBits;
  weak_first.n1 = oracle::kWeakFirstN1;
  weak_first.n2 = oracle::kQuantumPadded;
  weak_first.quantum_first = false;
  bool mono = true;
  double prev = 2;
  for (double beta : {0.1, 0.2, 0.3, 0.4, 0.5}) {
    auto a = required_alpha(beta, weak_first);
    mono &= a.has_value() && *a <= prev + 1e-12;
    if (a) prev = *a;
  }
  RazLayout qf;
  qf.quantum_bits = oracle::kQuantumBits;
  qf.n1 = oracle::kQuantumPadded;
  qf.n2 = oracle::kQuantumPadded / 2;
  qf.quantum_first = true;
  auto row = required_alpha(oracle::kQuantumFirstRow.beta, qf);
  const bool row_ok = row && std::fabs(*row - oracle::kQuantumFirstRow.alpha) <= 0.02;

  auto b = soundness_split(1e-3, 1e-8, 1e-8, 1e-16, 1e8);
  const bool budget = b.eps_smooth == (1e-3 - 2e-8 - 2e-8 - 1e8 * 1e-16) / 6 && std::fabs(b.total() - 1e-3) <= 1e-18;

  return {lin && len && mono && row_ok && budget,
          fmt::format("linearity {}; circulant lengths {}; trade-off monotone {}; beta 0.528 -> alpha {} vs 0.409 "
                      "+/- 0.02 {}; budget eps_smooth {:.7e} total {}",
                      lin ? "exact" : "BROKEN", len ? "ok" : "WRONG", mono ? "yes" : "NO",
                      row ? fmt::format("{:.4f}", *row) : std::string("infeasible"), row_ok ? "ok" : "MISS",
                      b.eps_smooth, budget ? "exact" : "OFF")};
}

// 10. Slice-verification game
Outcome slice_game_check() {
  Rng rng(1001);
  const std::size_t samples = 200;
  auto raw = circuit_slices(12, 10, samples, 6, rng);
  auto t = slice_prepare(raw, samples, 64, amax_percentile(raw), 12, std::int64_t(samples));
  auto plan = slice_plan(t, 0.01);
  const std::size_t T = 10'000;

  Cheat table_cells;
  for (std::size_t j = 0; j < 8; ++j) table_cells.cells.push_back({j * 7, j * 5});
  auto g = slice_game(t, plan, table_cells, rng, T);
  bool ok = std::fabs(g.escape - g.predicted) <= 3 * g.se;

  const double Delta = 0.7 / plan.c;
  Cheat one, ten;
  one.cells = {{3, 3}};
  one.delta = {Delta};
  for (std::size_t j = 0; j < 10; ++j) {
    ten.cells.push_back({5, j});
    ten.delta.push_back(Delta / 10);
  }
  auto g1 = slice_game(t, plan, one, rng, T), g10 = slice_game(t, plan, ten, rng, T);
  const double se_diff = std::sqrt(g1.se * g1.se + g10.se * g10.se);
  bool split = std::fabs(g1.predicted - g10.predicted) <= 1e-12 && std::fabs(g1.escape - g10.escape) <= 3 * se_diff &&
               std::fabs(g1.escape - g1.predicted) <= 3 * g1.se;
  ok &= split;

  auto pts = slice_scaling(t, 2, 0.01, 0.05);
  bool mono = true;
  std::string esc;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i + 1 < pts.size()) mono &= pts[i].escape <= pts[i + 1].escape + 1e-12;
    esc += fmt::format("{}:{:.3f} ", pts[i].slices, pts[i].escape);
  }
  ok &= mono;
  return {ok, fmt::format("escape {:.4f} vs {:.4f} +/- {:.4f}; split 1 vs 10: {:.4f} / {:.4f} (pred {:.4f}); "
                          "scaling [{}] monotone {}",
                          g.escape, g.predicted, g.se, g1.escape, g10.escape, g1.predicted, esc, mono ? "yes" : "NO")};
}

// 11. Geography
Outcome geography_check() {
  auto g = geography(0.03, 3.0e6);
  bool ok = std::fabs(g.factor - 1.0 / 3.0) <= 0.005 && std::fabs(g.uncertainty_m / 1e3 - 4495) <= 10;
  return {ok, fmt::format("factor {:.4f}, uncertainty {:.1f} km", g.factor, g.uncertainty_m / 1e3)};
}

// 12. Desk-scale amplification end to end
Outcome desk_amplification() {
  DeskPreset d;
  AdversaryConfig a;
  a.phi = d.phi;
  SimulatedServer honest(a, LatencyModel{});
  Rng rng(1201);
  auto res = run_amplification(d.protocol(), honest, WeakSourceSpec::parse("uniform"), d.budget(),
                               d.amplification(), rng);
  BitBlock all;
  bool lengths = res.outputs.size() == std::size_t(d.M);
  for (const auto& o : res.outputs) {
    lengths &= o.size() == res.out_len;
    all.append(o);
  }
  const bool battery = res.accepted && battery_passes(all);
  SimulatedServer uniform(AdversaryConfig::parse("uniform"), LatencyModel{});
  Rng rng2(1202);
  auto bad = run_amplification(d.protocol(), uniform, WeakSourceSpec::parse("uniform"), d.budget(),
                               d.amplification(), rng2);
  bool ok = res.accepted && lengths && battery && !bad.accepted && bad.outputs.empty();
  return {ok, fmt::format("honest: accepted {} score {:.4f}, {} blocks x {} bits, battery {}; uniform: score {:.4f} "
                          "{}",
                          res.accepted, res.transcript.s, res.outputs.size(), res.out_len, battery ? "pass" : "FAIL",
                          bad.transcript.s, bad.accepted ? "ACCEPTED" : "aborted")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, porter_thomas},      {2, xeb_calibration},     {3, slicing_fidelity}, {4, sampler_concordance},
      {5, entropy_rates},      {6, zero_entropy},        {7, eat_constants_check}, {8, adhoc_dominance},
      {9, extractors},         {10, slice_game_check},   {11, geography_check}, {12, desk_amplification},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  for (const auto& [id, fn] : criteria) {
    if (!only.empty() && !only.count(id)) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2d %s  %s [%.1f s]\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
