#include "certamp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "certamp/errors.hpp"
#include "certamp/qsim.hpp"
#include "certamp/scoring.hpp"
#include "certamp/special.hpp"

namespace certamp {

void ResourceProfile::validate() const {
  if (!(C_val > 0 && C_adv > 0 && T_val > 0 && T_M > 0 && n_parallel > 0 && X > 0 && T_PVC > 0 && d >= 0))
    throw std::invalid_argument("ResourceProfile: all fields must be positive");
}

Advantage verification_advantage(const ResourceProfile& r, double L_val) {
  r.validate();
  if (!(L_val > 0)) throw std::invalid_argument("verification_advantage: L_val must be positive");
  Advantage a;
  a.xi = r.C_val * r.T_val * r.n_parallel / (r.C_adv * r.T_M);
  a.f_adv = L_val / a.xi;
  return a;
}

double classical_fidelity(double X, double T_M, double T_PVC, double distance_factor) {
  if (!(X >= 0 && T_M >= 0 && T_PVC > 0 && distance_factor >= 0))
    throw std::invalid_argument("classical_fidelity: bad inputs");
  return X * kAuroraGpus * T_M / T_PVC * distance_factor;
}

double validation_gpu_hours(double L_val, double T_PVC) { return L_val * T_PVC / 3600.0; }

Geography geography(double T_M, double d) {
  if (!(T_M > 0)) throw std::invalid_argument("geography: T_M must be positive");
  if (!(d >= 0)) throw std::invalid_argument("geography: d must be nonnegative");
  return {std::max(0.0, 1.0 - 2.0 * d / (kSpeedOfLight * T_M)), kSpeedOfLight * T_M / 2.0};
}

double honest_chi(double phi, std::int64_t L_val, double completeness) {
  if (!(completeness > 0 && completeness < 0.5)) throw std::invalid_argument("honest_chi: completeness");
  double z = bisect([&](double t) { return normal_sf(t) - completeness; }, 0.0, 40.0);
  return phi - z * mixture_xeb_stderr(phi, std::size_t(L_val));
}

nlohmann::json BudgetResult::to_json() const {
  return {{"L_val", L_val}, {"xi", xi},   {"f_adv", f_adv},           {"chi", chi},
          {"eps", eps},     {"beta", beta}, {"report", report.to_json()}, {"scan", scan}};
}

BudgetResult optimize_budget(double xi, const BudgetQuery& q) {
  if (!(xi > 0)) throw std::invalid_argument("optimize_budget: xi must be positive");
  if (!(q.phi > 0 && q.phi <= 1)) throw std::invalid_argument("optimize_budget: phi outside (0,1]");
  std::vector<std::int64_t> grid = q.L_val_grid;
  if (grid.empty()) {
    const double lo = std::log(100.0), hi = std::log(double(q.L));
    for (int i = 0; i < 24; ++i) {
      auto v = std::int64_t(std::llround(std::exp(lo + (hi - lo) * i / 23.0)));
      if (grid.empty() || v != grid.back()) grid.push_back(std::min(v, q.L));
    }
  }
  BudgetResult best;
  bool found = false;
  best.scan = nlohmann::json::array();
  for (std::int64_t L_val : grid) {
    if (L_val < 1 || L_val > q.L) continue;
    const double f_adv = double(L_val) / xi;
    const double chi = honest_chi(q.phi, L_val, q.completeness);
    nlohmann::json row = {{"L_val", L_val}, {"f_adv", f_adv}, {"chi", chi}};
    auto run = [&](double eps) -> std::optional<RestrictedResult> {
      if (chi <= 0 || f_adv >= 1) return std::nullopt;
      RestrictedParams rp;
      rp.n = q.n;
      rp.L = q.L;
      rp.L_val = L_val;
      rp.chi = chi;
      rp.f_adv = f_adv;
      rp.phi = q.phi;
      rp.eps_accept = eps;
      rp.eps_smooth = eps;
      try {
        return restricted_min_entropy(rp);
      } catch (const Infeasible&) {
        return std::nullopt;
      }
    };
    std::optional<RestrictedResult> r;
    double eps = q.eps;
    if (q.target == BudgetTarget::max_rate) {
      r = run(eps);
      if (r && !(r->report.beta > 0)) r.reset();
    } else {
      auto ok = [&](double le) {
        auto x = run(std::exp(le));
        return x && x->report.beta_raw >= q.rate;
      };
      double hi = std::log(0.5);
      if (ok(hi)) {
        double lo = std::log(1e-300);
        if (ok(lo)) {
          hi = lo;
        } else {
          for (int it = 0; it < 60; ++it) {
            double mid = 0.5 * (lo + hi);
            (ok(mid) ? hi : lo) = mid;
          }
        }
        eps = std::exp(hi);
        r = run(eps);
      }
    }
    if (r) {
      row["beta"] = r->report.beta;
      row["eps"] = eps;
      const bool better = !found || (q.target == BudgetTarget::max_rate ? r->report.beta > best.beta : eps < best.eps);
      if (better) {
        found = true;
        best.L_val = L_val;
        best.f_adv = f_adv;
        best.chi = chi;
        best.eps = eps;
        best.beta = r->report.beta;
        best.report = r->report;
      }
    } else {
      row["beta"] = nullptr;
    }
    best.scan.push_back(row);
  }
  best.xi = xi;
  if (!found) throw Infeasible("optimize_budget: no L_val on the grid reaches the target");
  return best;
}

BudgetResult optimize_budget(const ResourceProfile& r, const BudgetQuery& q) {
  return optimize_budget(verification_advantage(r, 1.0).xi, q);
}

// ---- slices -----------------------------------------------------------------------

double amax_percentile(const std::vector<c64>& raw, double q) {
  if (raw.empty()) throw std::invalid_argument("amax_percentile: empty table");
  if (!(q > 0 && q <= 1)) throw std::invalid_argument("amax_percentile: q outside (0,1]");
  std::vector<double> mags(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) mags[i] = std::abs(raw[i]);
  std::size_t k = std::min(mags.size() - 1, std::size_t(std::ceil(q * double(mags.size()))) - 1);
  std::nth_element(mags.begin(), mags.begin() + std::ptrdiff_t(k), mags.end());
  return mags[k];
}

SliceTable slice_prepare(const std::vector<c64>& raw, std::size_t samples, std::size_t slices, double a_max, int n,
                         std::int64_t L_val) {
  if (samples == 0 || slices == 0 || raw.size() != samples * slices)
    throw std::invalid_argument("slice_prepare: table shape mismatch or empty");
  if (!(a_max > 0)) throw std::invalid_argument("slice_prepare: a_max must be positive");
  if (L_val < 1) throw std::invalid_argument("slice_prepare: L_val >= 1");
  SliceTable t;
  t.n = n;
  t.L_val = L_val;
  t.samples = samples;
  t.slices = slices;
  t.a_max = a_max;
  t.raw = raw;
  t.a = raw;
  for (auto& v : t.a) {
    double m = std::abs(v);
    if (m <= a_max) continue;
    v *= a_max / m;
    // rounding can leave |v| an ulp above a_max, which would make capping non-idempotent
    while (std::abs(v) > a_max) v *= 1 - 0x1p-52;
  }
  t.A.assign(samples, 0);
  t.p.assign(samples, 0);
  t.delta.assign(raw.size(), 0);
  const double scale = std::ldexp(1.0, n) / double(L_val);
  for (std::size_t i = 0; i < samples; ++i) {
    c64 A = 0;
    for (std::size_t j = 0; j < slices; ++j) A += t.a[i * slices + j];
    t.A[i] = A;
    t.p[i] = std::norm(A);
    const double absA = std::abs(A);
    const c64 rot = absA > 0 ? std::conj(A) / absA : c64(1);
    for (std::size_t j = 0; j < slices; ++j) {
      double re = (t.a[i * slices + j] * rot).real();
      t.delta[i * slices + j] = std::max(0.0, scale * 2 * std::sqrt(t.p[i]) * (re + a_max));
    }
  }
  return t;
}

SliceVerifyPlan slice_plan(const SliceTable& t, double f) {
  if (!(f > 0 && f <= 1)) throw std::invalid_argument("slice_plan: f outside (0,1]");
  SliceVerifyPlan plan;
  plan.f = f;
  plan.budget = f * double(t.samples) * double(t.slices);
  std::size_t nonzero = 0;
  for (double d : t.delta) nonzero += d > 0;
  if (plan.budget >= double(nonzero)) throw Infeasible("slice_plan: budget saturates the nonzero-delta slices");
  auto g = [&](double c) {
    double s = 0;
    for (double d : t.delta) s += -std::expm1(-c * d);
    return s - plan.budget;
  };
  double hi = 1;
  while (g(hi) < 0) hi *= 2;
  double lo = 0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    (g(mid) < 0 ? lo : hi) = mid;
  }
  plan.c = 0.5 * (lo + hi);
  plan.p.resize(t.delta.size());
  for (std::size_t i = 0; i < t.delta.size(); ++i) plan.p[i] = -std::expm1(-plan.c * t.delta[i]);
  return plan;
}

GameResult slice_game(const SliceTable& t, const SliceVerifyPlan& plan, const Cheat& cheat, Rng& rng,
                      std::size_t trials) {
  if (!cheat.delta.empty() && cheat.delta.size() != cheat.cells.size())
    throw std::invalid_argument("slice_game: one injected delta per cheated cell");
  std::vector<double> probs;
  GameResult g;
  for (std::size_t k = 0; k < cheat.cells.size(); ++k) {
    auto [i, j] = cheat.cells[k];
    if (i >= t.samples || j >= t.slices) throw std::invalid_argument("slice_game: cell outside the table");
    double d = cheat.delta.empty() ? t.delta_at(i, j) : cheat.delta[k];
    g.delta_total += d;
    probs.push_back(-std::expm1(-plan.c * d));
  }
  g.predicted = std::exp(-plan.c * g.delta_total);
  g.trials = trials;
  std::size_t escaped = 0;
  for (std::size_t tr = 0; tr < trials; ++tr) {
    bool caught = false;
    for (double p : probs) caught |= rng.bernoulli(p);  // every slice is drawn, caught or not
    escaped += !caught;
  }
  g.escape = trials ? double(escaped) / double(trials) : 1.0;
  g.se = trials ? std::sqrt(std::max(g.predicted * (1 - g.predicted), 1e-300) / double(trials)) : 0.0;
  return g;
}

std::vector<c64> regroup(const std::vector<c64>& raw, std::size_t samples, std::size_t slices, std::size_t F) {
  if (F == 0 || slices % F) throw std::invalid_argument("regroup: slices not divisible by F");
  const std::size_t out_slices = slices / F;
  std::vector<c64> out(samples * out_slices, 0);
  for (std::size_t i = 0; i < samples; ++i)
    for (std::size_t j = 0; j < slices; ++j) out[i * out_slices + j / F] += raw[i * slices + j];
  return out;
}

std::vector<ScalingPoint> slice_scaling(const SliceTable& t, std::size_t F, double f, double Delta, double q) {
  if (F < 1 || t.slices % F) throw std::invalid_argument("slice_scaling: slices must be divisible by F >= 1");
  std::vector<ScalingPoint> pts;
  std::vector<c64> raw = t.raw;
  std::size_t slices = t.slices;
  while (true) {
    double a_max = amax_percentile(raw, q);
    SliceTable tt = slice_prepare(raw, t.samples, slices, a_max, t.n, t.L_val);
    ScalingPoint pt;
    pt.slices = slices;
    pt.a_max = a_max;
    try {
      pt.c = slice_plan(tt, f).c;
      pt.escape = std::exp(-pt.c * Delta);
    } catch (const Infeasible&) {
      pt.c = INFINITY;
      pt.escape = 0;
    }
    pts.push_back(pt);
    if (F == 1 || slices % F || slices == 1) break;
    raw = regroup(raw, t.samples, slices, F);
    slices /= F;
  }
  const ScalingPoint& coarse = pts.back();
  for (auto& pt : pts) pt.predicted = std::pow(coarse.escape, std::sqrt(double(pt.slices) / double(coarse.slices)));
  return pts;
}

std::vector<c64> synthetic_slices(std::size_t samples, std::size_t slices, int n, Rng& rng) {
  const double sd = std::sqrt(0.5 / (std::ldexp(1.0, n) * double(slices)));
  std::vector<c64> out(samples * slices);
  for (auto& v : out) {
    double re = rng.normal(), im = rng.normal();
    v = c64(sd * re, sd * im);
  }
  return out;
}

std::vector<c64> circuit_slices(int n, int layers, std::size_t samples, int k_slice, Rng& rng) {
  if (k_slice < 1 || k_slice > n) throw std::invalid_argument("circuit_slices: k_slice outside 1..n");
  std::vector<c64> out;
  out.reserve(samples << k_slice);
  for (std::size_t s = 0; s < samples; ++s) {
    CircuitSpec spec = gen_circuit(n, layers, n / 2, rng.next());
    BasisMask basis = BasisMask::random(n, rng);
    StateVector psi = evolve(spec, basis);
    std::uint64_t z = born_sample(psi, rng, 1)[0];
    std::vector<int> qubits;
    for (std::uint64_t q : distinct_uniform(rng, std::uint64_t(n), std::size_t(k_slice))) qubits.push_back(int(q));
    auto rows = slice_amplitudes(spec, basis, qubits, spec.depth() / 2, {z});
    out.insert(out.end(), rows[0].begin(), rows[0].end());
  }
  return out;
}

// ---- binary I/O ----------------------------------------------------------------------

namespace {

template <class T>
void put(std::ofstream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::ifstream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!is) throw std::runtime_error("slice table: truncated file");
  return v;
}

}  // namespace

void write_slice_table(const std::string& path, const std::vector<c64>& raw, std::size_t samples,
                       std::size_t slices, int n, std::int64_t L_val, double a_max) {
  if (raw.size() != samples * slices) throw std::invalid_argument("write_slice_table: shape mismatch");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_slice_table: cannot open " + path);
  os.write("CASL", 4);
  put<std::uint32_t>(os, 1);
  put<std::uint32_t>(os, std::uint32_t(n));
  put<std::uint64_t>(os, std::uint64_t(L_val));
  put<std::uint64_t>(os, samples);
  put<std::uint64_t>(os, slices);
  put<double>(os, a_max);
  for (const auto& v : raw) {
    put<float>(os, float(v.real()));
    put<float>(os, float(v.imag()));
  }
}

SliceFile read_slice_table(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_slice_table: cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "CASL", 4) != 0) throw std::runtime_error("read_slice_table: bad magic");
  if (get<std::uint32_t>(is) != 1) throw std::runtime_error("read_slice_table: unsupported version");
  SliceFile f;
  f.n = int(get<std::uint32_t>(is));
  f.L_val = std::int64_t(get<std::uint64_t>(is));
  f.samples = get<std::uint64_t>(is);
  f.slices = get<std::uint64_t>(is);
  f.a_max = get<double>(is);
  f.raw.resize(f.samples * f.slices);
  for (auto& v : f.raw) {
    float re = get<float>(is), im = get<float>(is);
    v = c64(re, im);
  }
  return f;
}

}  // namespace certamp
