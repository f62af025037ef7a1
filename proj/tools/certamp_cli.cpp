// certamp: command-line front end.
//
//   certamp [--config F] [--seed S] [--threads T] [--out DIR] <verb> [options]
//
// Exit codes: 0 success, 1 protocol abort or infeasible parameters, 2 usage error.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "certamp/adversary.hpp"
#include "certamp/analysis.hpp"
#include "certamp/entropy.hpp"
#include "certamp/errors.hpp"
#include "certamp/extract.hpp"
#include "certamp/presets.hpp"
#include "certamp/protocol.hpp"
#include "certamp/qsim.hpp"
#include "certamp/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace certamp;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string config;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string out = "out";
  KeyValues kv;
};

std::string utc_now() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

fs::path out_path(const Globals& g, const std::string& name) {
  fs::create_directories(g.out);
  return fs::path(g.out) / name;
}

void write_json(const Globals& g, const std::string& name, const json& j) {
  std::ofstream os(out_path(g, name));
  os << j.dump(2) << '\n';
}

// Timestamps live only under "metadata" so artifacts compare equal across runs.
json metadata(const Globals& g, const std::string& verb) {
  return {{"verb", verb}, {"seed", g.seed}, {"threads", g.threads}, {"created", utc_now()}};
}

// ---- simulate ----------------------------------------------------------------------

struct SimulateOpts {
  std::optional<int> n, layers, m;
  std::optional<std::int64_t> L;
  std::optional<double> gamma, s_star, T_batch, tm_mean, tm_jitter;
  std::string server = "honest:0.9";
  std::string norm = "expected";
};

int cmd_simulate(const Globals& g, const SimulateOpts& o) {
  DeskPreset desk;
  desk.apply(g.kv);
  ProtocolConfig c = desk.protocol();
  std::string server = o.server;
  if (auto it = g.kv.find("server"); it != g.kv.end() && server == "honest:0.9") server = it->second;
  if (o.n) c.n = *o.n;
  if (o.L) c.L = *o.L;
  if (o.layers) c.layers = *o.layers;
  if (o.m) c.m = *o.m;
  if (o.gamma) c.gamma = *o.gamma;
  if (o.s_star) c.s_star = *o.s_star;
  if (o.T_batch) c.T_batch = *o.T_batch;
  if (o.tm_mean) c.latency.tm_mean = *o.tm_mean;
  if (o.tm_jitter) c.latency.tm_jitter = *o.tm_jitter;
  if (o.norm == "validated")
    c.norm = Normalization::validated;
  else if (o.norm != "expected")
    throw UsageError("--norm must be expected or validated");
  c.validate();

  SimulatedServer srv(AdversaryConfig::parse(server), c.latency);
  Rng rng(g.seed);
  Transcript t = run_expansion(c, srv, rng);
  {
    std::ofstream os(out_path(g, "transcript.jsonl"));
    t.write_jsonl(os);
  }
  json summary = t.summary();
  summary["config"] = c.to_json();
  summary["server"] = server;
  summary["metadata"] = metadata(g, "simulate");
  write_json(g, "summary.json", summary);
  std::printf("simulate: %s s=%.6f s*=%.4f tested=%lld timeouts=%lld\n", t.accepted ? "ACCEPT" : "ABORT", t.s,
              t.s_star, static_cast<long long>(t.tested), static_cast<long long>(t.timeouts));
  return t.accepted ? 0 : 1;
}

// ---- entropy -------------------------------------------------------------------------

struct EntropyOpts {
  std::string preset = "n64";
  std::string model = "oracle-improved";
  std::optional<double> s_star, Phi_C, phi_adv, xeb, X, T_PVC, distance;
  std::optional<int> k_exp, l_exp;
};

EatVariant parse_variant(const std::string& model) {
  if (model == "oracle-vanilla") return EatVariant::vanilla;
  if (model == "oracle-improved-h") return EatVariant::improved_h;
  if (model == "oracle-improved-var") return EatVariant::improved_var;
  if (model == "oracle-improved") return EatVariant::full;
  throw UsageError("unknown model " + model);
}

int cmd_entropy(const Globals& g, const EntropyOpts& o) {
  if (o.preset != "n64") throw UsageError("entropy: only the n64 preset is defined");
  FullScalePreset pp;
  pp.apply(g.kv);
  if (o.xeb) pp.xeb = *o.xeb;
  if (o.phi_adv) pp.phi_adv = *o.phi_adv;
  if (o.X) pp.X = *o.X;
  if (o.T_PVC) pp.T_PVC = *o.T_PVC;
  if (o.distance) pp.distance = *o.distance;

  EntropyReport rep;
  json extra;
  if (o.model == "restricted") {
    RestrictedParams rp = pp.restricted();
    if (o.Phi_C) rp.f_adv = *o.Phi_C;
    auto r = restricted_min_entropy(rp);
    rep = r.report;
    extra["Q_min"] = r.Q_min;
  } else if (o.model == "adhoc") {
    AdHocParams ap = pp.adhoc();
    if (o.Phi_C) ap.Phi_C = *o.Phi_C;
    if (o.s_star) ap.s_star = *o.s_star;
    if (o.k_exp) ap.k = std::ldexp(1.0, *o.k_exp);
    if (o.l_exp) ap.l = std::ldexp(1.0, *o.l_exp);
    rep = adhoc_min_entropy(ap);
  } else {
    OracleParams op = pp.oracle();
    if (o.Phi_C) op.Phi_C = *o.Phi_C;
    if (o.s_star) op.s_star = *o.s_star;
    std::vector<int> ks, ls;
    if (o.k_exp) ks = {*o.k_exp};
    if (o.l_exp) ls = {*o.l_exp};
    rep = eat_optimize_kl(op, parse_variant(o.model), ks, ls);
  }
  json j = rep.to_json();
  j["preset"] = pp.to_json();
  j["extra"] = extra;
  j["metadata"] = metadata(g, "entropy");
  write_json(g, "entropy.json", j);
  std::printf("entropy: model=%s beta=%.6f H=%.6g bits%s\n", o.model.c_str(), rep.beta, rep.H,
              rep.formal_only ? " (formal only)" : "");
  if (rep.H <= 0) return 1;
  return 0;
}

// ---- cost -------------------------------------------------------------------------------

struct CostOpts {
  ResourceProfile r;
  double L_val = 11'961;
  bool optimize = false;
  double phi = 0.586, eps = 1e-6;
  std::optional<double> rate;
  std::int64_t L = 23'651;
  int n = 64;
};

int cmd_cost(const Globals& g, CostOpts o) {
  o.r.validate();
  Advantage adv = verification_advantage(o.r, o.L_val);
  Geography geo = geography(o.r.T_M, o.r.d);
  json j = {{"xi", adv.xi},
            {"f_adv", adv.f_adv},
            {"L_val", o.L_val},
            {"distance_factor", geo.factor},
            {"uncertainty_m", geo.uncertainty_m},
            {"Phi_C", classical_fidelity(o.r.X, o.r.T_M, o.r.T_PVC, geo.factor)},
            {"validation_gpu_hours", validation_gpu_hours(o.L_val, o.r.T_PVC)}};
  if (o.optimize) {
    BudgetQuery q;
    q.n = o.n;
    q.L = o.L;
    q.phi = o.phi;
    q.eps = o.eps;
    if (o.rate) {
      q.target = BudgetTarget::min_eps;
      q.rate = *o.rate;
    }
    BudgetResult b = optimize_budget(o.r, q);
    j["budget"] = b.to_json();
    std::ofstream os(out_path(g, "cost_scan.csv"));
    os << "L_val,f_adv,chi,eps,beta\n";
    auto cell = [](const json& row, const char* key) {
      return row.contains(key) && row[key].is_number() ? row[key].dump() : std::string();
    };
    for (const auto& row : b.scan)
      os << cell(row, "L_val") << ',' << cell(row, "f_adv") << ',' << cell(row, "chi") << ',' << cell(row, "eps")
         << ',' << cell(row, "beta") << '\n';
  }
  j["metadata"] = metadata(g, "cost");
  write_json(g, "cost.json", j);
  std::printf("cost: xi=%.6g f_adv=%.6g factor=%.4f uncertainty=%.1f km\n", adv.xi, adv.f_adv, geo.factor,
              geo.uncertainty_m / 1e3);
  return 0;
}

// ---- extract -------------------------------------------------------------------------------

struct ExtractOpts {
  std::string mode = "raz";
  std::int64_t n1 = 0, n2 = 0, m = 4093, quantum_bits = 0;
  double k1 = 0, k2 = 0, eps = 1e-8, beta = 0.5, alpha = 0.5;
  bool weak_first = false;
  std::string source, seed_file, x1, x2;
  double k = 0, eps_seeded = 0x1p-20;
  std::size_t out_bits = 0;
  double eps_sou = 1e-3, eps_2 = 1e-8, eps_ts = 1e-8, M = 1e8;
};

int cmd_extract(const Globals& g, const ExtractOpts& o) {
  json j;
  if (o.mode == "raz") {
    auto spec = raz_feasible(o.n1, o.k1, o.n2, o.k2, o.m, o.eps);
    if (!spec) throw Infeasible("no (l, p) reaches eps_ts <= " + std::to_string(o.eps));
    j = spec->to_json();
    std::printf("extract: raz log2_eps_ts=%.3f l=%lld p=2^%.3f\n", spec->log2_eps_ts,
                static_cast<long long>(spec->l), spec->log2_p);
  } else if (o.mode == "alpha" || o.mode == "beta") {
    RazLayout lay;
    lay.quantum_bits = o.quantum_bits;
    lay.n1 = o.n1;
    lay.n2 = o.n2;
    lay.m = o.m;
    lay.quantum_first = !o.weak_first;
    lay.eps_ts = o.eps;
    lay.eps_2 = o.eps_2;
    auto r = o.mode == "alpha" ? required_alpha(o.beta, lay) : required_beta(o.alpha, lay);
    if (!r) throw Infeasible("layout infeasible even at rate 1");
    j = {{o.mode, *r}, {"quantum_first", lay.quantum_first}, {"n1", lay.n1}, {"n2", lay.n2}, {"m", lay.m}};
    std::printf("extract: required %s = %.4f\n", o.mode.c_str(), *r);
  } else if (o.mode == "budget") {
    SoundnessBudget b = soundness_split(o.eps_sou, o.eps_2, o.eps_ts, o.eps_seeded, o.M);
    j = b.to_json();
    std::printf("extract: eps_smooth=%.9g total=%.9g\n", b.eps_smooth, b.total());
  } else if (o.mode == "circulant") {
    if (o.source.empty() || o.seed_file.empty()) throw UsageError("circulant needs --source and --seed-file");
    BitBlock src = BitBlock::read_file(o.source), seed = BitBlock::read_file(o.seed_file);
    CirculantSpec cs = circulant_params(src.size(), o.k > 0 ? o.k : double(src.size()), o.eps_seeded);
    std::size_t m = o.out_bits ? std::min(o.out_bits, cs.m) : cs.m;
    BitBlock out = circulant_extract(src, seed, m);
    out.write_file(out_path(g, "extracted.bin").string());
    j = cs.to_json();
    j["written"] = m;
    std::printf("extract: circulant %zu -> %zu bits\n", src.size(), m);
  } else if (o.mode == "two-source") {
    if (o.x1.empty() || o.x2.empty()) throw UsageError("two-source needs --x1 and --x2");
    BitBlock a = BitBlock::read_file(o.x1), b = BitBlock::read_file(o.x2);
    std::size_t m = o.out_bits ? o.out_bits : a.size() / 2;
    BitBlock out = two_source_extract(a, b, m);
    out.write_file(out_path(g, "extracted.bin").string());
    j = {{"n1", a.size()}, {"n2", b.size()}, {"m", m}};
    std::printf("extract: two-source -> %zu bits\n", m);
  } else {
    throw UsageError("unknown extract mode " + o.mode);
  }
  j["metadata"] = metadata(g, "extract");
  write_json(g, "extract.json", j);
  return 0;
}

// ---- slice-verify ------------------------------------------------------------------------------

struct SliceOpts {
  std::string table;
  int n = 12, layers = 10, k_slice = 4;
  std::size_t samples = 200;
  double f = 0.1, Delta = 0.05;
  std::size_t cheat_cells = 1, trials = 10'000, group = 0;
  double quantile = 0.999;
  bool synthetic = false;
  std::string save_table;
};

int cmd_slice_verify(const Globals& g, const SliceOpts& o) {
  Rng rng(g.seed);
  SliceFile sf;
  if (!o.table.empty()) {
    sf = read_slice_table(o.table);
  } else {
    sf.n = o.n;
    sf.samples = o.samples;
    sf.slices = std::size_t{1} << o.k_slice;
    sf.L_val = static_cast<std::int64_t>(o.samples);
    Rng gen = rng.fork(1);
    sf.raw = o.synthetic ? synthetic_slices(sf.samples, sf.slices, sf.n, gen)
                         : circuit_slices(o.n, o.layers, o.samples, o.k_slice, gen);
  }
  if (!o.save_table.empty())
    write_slice_table(o.save_table, sf.raw, sf.samples, sf.slices, sf.n, sf.L_val, amax_percentile(sf.raw, o.quantile));

  double a_max = amax_percentile(sf.raw, o.quantile);
  SliceTable t = slice_prepare(sf.raw, sf.samples, sf.slices, a_max, sf.n, sf.L_val);
  SliceVerifyPlan plan = slice_plan(t, o.f);

  Cheat cheat;
  Rng pick = rng.fork(2);
  auto cells = distinct_uniform(pick, sf.samples * sf.slices, std::min(o.cheat_cells, sf.samples * sf.slices));
  for (auto c : cells) {
    cheat.cells.emplace_back(c / sf.slices, c % sf.slices);
    cheat.delta.push_back(o.Delta / double(cells.size()));
  }
  Rng mc = rng.fork(3);
  GameResult game = slice_game(t, plan, cheat, mc, o.trials);

  json j = {{"n", sf.n},
            {"samples", sf.samples},
            {"slices", sf.slices},
            {"L_val", sf.L_val},
            {"a_max", a_max},
            {"f", o.f},
            {"c", plan.c},
            {"budget", plan.budget},
            {"Delta", o.Delta},
            {"cheat_cells", cells.size()},
            {"escape", game.escape},
            {"escape_se", game.se},
            {"predicted", game.predicted},
            {"trials", game.trials}};
  if (o.group > 1) {
    auto pts = slice_scaling(t, o.group, o.f, o.Delta, o.quantile);
    std::ofstream os(out_path(g, "slice_scaling.csv"));
    os << "slices,a_max,c,escape,predicted\n";
    for (const auto& p : pts) os << p.slices << ',' << p.a_max << ',' << p.c << ',' << p.escape << ',' << p.predicted << '\n';
    j["scaling_levels"] = pts.size();
  }
  j["metadata"] = metadata(g, "slice-verify");
  write_json(g, "slice_verify.json", j);
  std::printf("slice-verify: c=%.6g escape=%.4f +- %.4f predicted=%.4f\n", plan.c, game.escape, game.se,
              game.predicted);
  return 0;
}

// ---- adversary-dist ----------------------------------------------------------------------------

struct DistOpts {
  std::string model = "honest:1";
  int n = 12, layers = 10;
  std::size_t circuits = 50, per_circuit = 20;
  std::size_t samples = 10'000;  // model draws for frugal-mc / top-mc
  double phi = 0.5;
  int k = 2;
};

int cmd_adversary_dist(const Globals& g, const DistOpts& o) {
  const double N = std::ldexp(1.0, o.n);
  std::vector<double> Np;
  std::string label = o.model;
  double param = o.phi;
  int k = 0;
  Rng root(g.seed);

  if (o.model == "frugal-mc" || o.model == "top-mc") {
    Rng rng = root.fork(0);
    Np.reserve(o.samples);
    for (std::size_t i = 0; i < o.samples; ++i)
      Np.push_back(N * (o.model == "frugal-mc" ? frugal_mc_p(o.phi, N, rng) : top_mc_p(o.phi, o.k, N, rng)));
    k = o.model == "top-mc" ? o.k : 0;
  } else {
    AdversaryConfig cfg = AdversaryConfig::parse(o.model);
    label = cfg.to_string();
    param = cfg.phi;
    k = cfg.k;
    // Circuit i draws from root.fork(i + 1), so the output does not depend on --threads.
    std::vector<std::vector<double>> per(o.circuits);
    auto work = [&](std::size_t i) {
      Rng rng = root.fork(i + 1);
      CircuitSpec spec = gen_circuit(o.n, o.layers, o.n / 2, rng.next());
      BasisMask basis = BasisMask::random(o.n, rng);
      StateVector ideal = evolve(spec, basis);
      std::optional<SlicedSampler> sliced;
      if (cfg.kind != AdversaryKind::honest) sliced.emplace(spec, basis, cfg.phi, cfg.k_slice, rng);
      for (std::size_t s = 0; s < o.per_circuit; ++s) {
        std::uint64_t z;
        if (cfg.kind == AdversaryKind::honest)
          z = honest_sample(ideal, cfg.phi, rng);
        else if (cfg.kind == AdversaryKind::frugal)
          z = sliced->frugal(cfg.M_prime ? cfg.M_prime : std::uint64_t(N), rng);
        else
          z = sliced->top(cfg.k, rng);
        per[i].push_back(N * ideal.prob(z));
      }
    };
    unsigned T = std::max(1u, g.threads);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < T; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < o.circuits; i += T) work(i);
      });
    for (auto& th : pool) th.join();
    for (auto& v : per) Np.insert(Np.end(), v.begin(), v.end());
  }

  {
    std::ofstream os(out_path(g, "distribution.csv"));
    write_distribution_csv(os, label, param, k, Np, true);
  }
  MeanSe ms = mean_se(Np);
  json j = {{"model", label}, {"param", param}, {"k", k}, {"count", Np.size()}, {"mean_Np", ms.mean},
            {"se_Np", ms.se}, {"var_Np", ms.var}, {"metadata", metadata(g, "adversary-dist")}};
  write_json(g, "distribution.json", j);
  std::printf("adversary-dist: %s count=%zu mean(Np)=%.4f +- %.4f\n", label.c_str(), Np.size(), ms.mean, ms.se);
  return 0;
}

// ---- amplify -------------------------------------------------------------------------------------

struct AmplifyOpts {
  std::string server = "honest:0.9";
  std::string weak = "uniform";
  std::optional<double> M, beta;
  std::optional<std::int64_t> L;
  std::string b_mode = "direct";
  bool enforce_eps_ts = false;
  std::size_t discard = 0;
};

int cmd_amplify(const Globals& g, const AmplifyOpts& o) {
  DeskPreset desk;
  desk.apply(g.kv);
  if (o.M) desk.M = *o.M;
  if (o.beta) desk.beta = *o.beta;
  if (o.L) desk.L = *o.L;
  ProtocolConfig c = desk.protocol();
  AmplificationParams ap = desk.amplification();
  ap.enforce_eps_ts = o.enforce_eps_ts;
  if (o.b_mode == "two-source")
    ap.b_mode = BMode::two_source;
  else if (o.b_mode != "direct")
    throw UsageError("--b-mode must be direct or two-source");
  WeakSourceSpec weak = WeakSourceSpec::parse(o.weak);
  weak.discard = o.discard;

  SimulatedServer srv(AdversaryConfig::parse(o.server), c.latency);
  Rng rng(g.seed);
  AmplificationResult res = run_amplification(c, srv, weak, desk.budget(), ap, rng);
  {
    std::ofstream os(out_path(g, "transcript.jsonl"));
    res.transcript.write_jsonl(os);
  }
  json j = res.to_json();
  j["preset"] = desk.to_json();
  j["weak"] = weak.to_json();
  j["server"] = o.server;
  if (!res.outputs.empty()) {
    BitBlock all;
    for (const auto& b : res.outputs) all.append(b);
    all.set_tag(Provenance::extracted);
    all.write_file(out_path(g, "outputs.bin").string());
    j["battery_pass"] = battery_passes(all);
  }
  j["metadata"] = metadata(g, "amplify");
  write_json(g, "summary.json", j);
  std::printf("amplify: %s blocks=%zu x %zu bits%s\n", res.accepted ? "ACCEPT" : "ABORT", res.outputs.size(),
              res.out_len, res.formal_only ? " (formal only)" : "");
  return res.accepted ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certamp: certified randomness amplification toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "key = value config file");
  app.add_option("--seed", g.seed, "RNG seed");
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "output directory");

  SimulateOpts so;
  auto* sim = app.add_subcommand("simulate", "run the expansion protocol against a simulated server");
  sim->add_option("--n", so.n);
  sim->add_option("--L", so.L);
  sim->add_option("--layers", so.layers);
  sim->add_option("--m", so.m, "circuits per round");
  sim->add_option("--gamma", so.gamma);
  sim->add_option("--s-star", so.s_star);
  sim->add_option("--T-batch", so.T_batch);
  sim->add_option("--tm-mean", so.tm_mean);
  sim->add_option("--tm-jitter", so.tm_jitter);
  sim->add_option("--server", so.server, "honest:<phi> | uniform | frugal:<f>[:k[:M']] | top:<f>:<k>[:k_slice]");
  sim->add_option("--norm", so.norm, "expected | validated");

  EntropyOpts eo;
  auto* ent = app.add_subcommand("entropy", "min-entropy bounds");
  ent->add_option("--preset", eo.preset);
  ent->add_option("--model", eo.model,
                  "restricted | adhoc | oracle-vanilla | oracle-improved-h | oracle-improved-var | oracle-improved");
  ent->add_option("--s-star", eo.s_star);
  ent->add_option("--Phi-C", eo.Phi_C);
  ent->add_option("--phi-adv", eo.phi_adv);
  ent->add_option("--xeb", eo.xeb);
  ent->add_option("--X", eo.X);
  ent->add_option("--T-PVC", eo.T_PVC);
  ent->add_option("--distance", eo.distance);
  ent->add_option("--k-exp", eo.k_exp, "fix k = 2^k_exp");
  ent->add_option("--l-exp", eo.l_exp, "fix l = 2^l_exp");

  CostOpts co;
  auto* cost = app.add_subcommand("cost", "verification advantage, classical fidelity, geography");
  cost->add_option("--C-val", co.r.C_val);
  cost->add_option("--C-adv", co.r.C_adv);
  cost->add_option("--T-val", co.r.T_val);
  cost->add_option("--T-M", co.r.T_M);
  cost->add_option("--n-parallel", co.r.n_parallel);
  cost->add_option("--X", co.r.X);
  cost->add_option("--T-PVC", co.r.T_PVC);
  cost->add_option("--distance", co.r.d);
  cost->add_option("--L-val", co.L_val);
  cost->add_flag("--optimize", co.optimize, "scan L_val with the restricted bound");
  cost->add_option("--phi", co.phi);
  cost->add_option("--eps", co.eps);
  cost->add_option("--rate", co.rate, "minimize eps at this rate instead");
  cost->add_option("--L", co.L);
  cost->add_option("--n", co.n);

  ExtractOpts xo;
  auto* ext = app.add_subcommand("extract", "extractor parameters and runs");
  ext->add_option("--mode", xo.mode, "raz | alpha | beta | budget | circulant | two-source");
  ext->add_option("--n1", xo.n1);
  ext->add_option("--n2", xo.n2);
  ext->add_option("--k1", xo.k1);
  ext->add_option("--k2", xo.k2);
  ext->add_option("--m", xo.m);
  ext->add_option("--eps", xo.eps, "two-source error target");
  ext->add_option("--quantum-bits", xo.quantum_bits);
  ext->add_option("--beta", xo.beta);
  ext->add_option("--alpha", xo.alpha);
  ext->add_flag("--weak-first", xo.weak_first, "weak source is the length-n1 input");
  ext->add_option("--source", xo.source);
  ext->add_option("--seed-file", xo.seed_file);
  ext->add_option("--x1", xo.x1);
  ext->add_option("--x2", xo.x2);
  ext->add_option("--k", xo.k, "circulant source min-entropy");
  ext->add_option("--eps-seeded", xo.eps_seeded);
  ext->add_option("--out-bits", xo.out_bits);
  ext->add_option("--eps-sou", xo.eps_sou);
  ext->add_option("--eps-2", xo.eps_2);
  ext->add_option("--eps-ts", xo.eps_ts);
  ext->add_option("--M", xo.M);

  SliceOpts lo;
  auto* sl = app.add_subcommand("slice-verify", "low-budget slice verification game");
  sl->add_option("--table", lo.table, "CASL slice table; generated from circuits when absent");
  sl->add_option("--save-table", lo.save_table);
  sl->add_option("--n", lo.n);
  sl->add_option("--layers", lo.layers);
  sl->add_option("--k-slice", lo.k_slice);
  sl->add_option("--samples", lo.samples);
  sl->add_flag("--synthetic", lo.synthetic, "complex Gaussian slices instead of circuits");
  sl->add_option("--f", lo.f);
  sl->add_option("--Delta", lo.Delta);
  sl->add_option("--cheat-cells", lo.cheat_cells);
  sl->add_option("--trials", lo.trials);
  sl->add_option("--group", lo.group, "regroup factor for the scaling study");
  sl->add_option("--quantile", lo.quantile, "a_max quantile");

  DistOpts dq;
  auto* dist = app.add_subcommand("adversary-dist", "N p samples from a sampler or a model");
  dist->add_option("--model", dq.model, "adversary config, frugal-mc or top-mc");
  dist->add_option("--n", dq.n);
  dist->add_option("--layers", dq.layers);
  dist->add_option("--circuits", dq.circuits);
  dist->add_option("--per-circuit", dq.per_circuit);
  dist->add_option("--samples", dq.samples);
  dist->add_option("--phi", dq.phi);
  dist->add_option("--k", dq.k);

  AmplifyOpts ao;
  auto* amp = app.add_subcommand("amplify", "desk-scale amplification pipeline");
  amp->add_option("--server", ao.server);
  amp->add_option("--weak", ao.weak, "uniform | iid:<p1> | block:<period>:<bias>");
  amp->add_option("--discard", ao.discard, "weak bits skipped after each draw");
  amp->add_option("--M", ao.M);
  amp->add_option("--L", ao.L);
  amp->add_option("--beta", ao.beta);
  amp->add_option("--b-mode", ao.b_mode, "direct | two-source");
  amp->add_flag("--enforce-eps-ts", ao.enforce_eps_ts);

  if (argc < 2) {
    std::cerr << app.help();
    return 2;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (!g.config.empty()) g.kv = read_config(g.config);
  } catch (const std::exception& e) {
    std::cerr << "certamp: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*sim) return cmd_simulate(g, so);
    if (*ent) return cmd_entropy(g, eo);
    if (*cost) return cmd_cost(g, co);
    if (*ext) return cmd_extract(g, xo);
    if (*sl) return cmd_slice_verify(g, lo);
    if (*dist) return cmd_adversary_dist(g, dq);
    if (*amp) return cmd_amplify(g, ao);
  } catch (const UsageError& e) {
    std::cerr << "certamp: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "certamp: " << e.what() << '\n';
    return 2;
  } catch (const Infeasible& e) {
    std::cerr << "certamp: infeasible: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "certamp: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
