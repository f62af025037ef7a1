#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "certamp/entropy.hpp"
#include "certamp/rng.hpp"

namespace certamp {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s
inline constexpr double kAuroraGpus = 10'624.0 * 6.0;   // nodes x GPUs per node

// ---- validation cost -----------------------------------------------------------

struct ResourceProfile {
  double C_val = 1, C_adv = 1;  // compute power, arbitrary common unit
  double T_val = 1, T_M = 1;    // seconds
  double n_parallel = 1;
  double X = 1;        // adversary size in multiples of Aurora
  double T_PVC = 4.9e5;  // seconds per circuit per GPU
  double d = 0;        // adversary distance, meters

  void validate() const;
};

struct Advantage {
  double xi = 0;
  double f_adv = 0;
};

// xi = C_val T_val n_parallel / (C_adv T_M); f_adv = L_val / xi.
Advantage verification_advantage(const ResourceProfile& r, double L_val);

// X * 10,624 * 6 * T_M / T_PVC, times the distance factor.
double classical_fidelity(double X, double T_M, double T_PVC, double distance_factor = 1.0);
// GPU hours to validate L_val circuits at T_PVC seconds each.
double validation_gpu_hours(double L_val, double T_PVC);

struct Geography {
  double factor = 1;         // max(0, 1 - 2d/(c T_M))
  double uncertainty_m = 0;  // c T_M / 2
};
Geography geography(double T_M, double d);

enum class BudgetTarget {
  max_rate,  // maximize beta at fixed eps
  min_eps,   // minimize eps reaching a fixed beta
};

struct BudgetQuery {
  int n = 64;
  std::int64_t L = 23'651;
  double phi = 0.586;
  BudgetTarget target = BudgetTarget::max_rate;
  double eps = 1e-6;    // max_rate: eps_accept = eps_smooth = eps
  double rate = 0.04;   // min_eps: required beta
  double completeness = 1e-4;  // honest abort probability used to place chi
  std::vector<std::int64_t> L_val_grid;  // empty: 24 log-spaced points in [100, L]
};

struct BudgetResult {
  std::int64_t L_val = 0;
  double xi = 0, f_adv = 0, chi = 0, eps = 0, beta = 0;
  EntropyReport report;
  nlohmann::json scan;  // one entry per grid point

  nlohmann::json to_json() const;
};

// chi = phi - z sigma(phi, L_val) with z the (1 - completeness) normal quantile.
double honest_chi(double phi, std::int64_t L_val, double completeness);
// Throws Infeasible when no grid point reaches the target.
BudgetResult optimize_budget(double xi, const BudgetQuery& q);
BudgetResult optimize_budget(const ResourceProfile& r, const BudgetQuery& q);

// ---- slice verification ----------------------------------------------------------

using c64 = std::complex<double>;

struct SliceTable {
  int n = 0;
  std::int64_t L_val = 0;  // validated-sample count used in the delta normalization
  std::size_t samples = 0, slices = 0;
  double a_max = 0;
  std::vector<c64> raw;    // row-major samples x slices, before capping
  std::vector<c64> a;      // capped
  std::vector<c64> A;      // per-sample sum of capped slices
  std::vector<double> p;   // |A|^2
  std::vector<double> delta;  // delta XEB per slice

  c64 at(std::size_t i, std::size_t j) const { return a[i * slices + j]; }
  double delta_at(std::size_t i, std::size_t j) const { return delta[i * slices + j]; }
};

// q-quantile of |a| over the table.
double amax_percentile(const std::vector<c64>& raw, double q = 0.999);

// Caps |a| at a_max, sums rows, and sets
// delta_ij = (2^n / L_val) 2 sqrt(p_i) (Re[a_ij e^{-i arg A_i}] + a_max),
// the real part taken in the frame where A_i is real and nonnegative.
SliceTable slice_prepare(const std::vector<c64>& raw, std::size_t samples, std::size_t slices, double a_max, int n,
                         std::int64_t L_val);

struct SliceVerifyPlan {
  double f = 0;
  double c = 0;
  double budget = 0;       // f * samples * slices
  std::vector<double> p;   // 1 - exp(-c delta), row-major
};

// Bisection on c for sum (1 - e^{-c delta}) = f * samples * slices.
SliceVerifyPlan slice_plan(const SliceTable& t, double f);

struct Cheat {
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  std::vector<double> delta;  // injected delta XEB per cell; empty uses the table's values
};

struct GameResult {
  double escape = 0, se = 0;  // empirical frequency and its standard error
  double predicted = 0;       // exp(-c sum delta)
  double delta_total = 0;
  std::size_t trials = 0;
};

GameResult slice_game(const SliceTable& t, const SliceVerifyPlan& plan, const Cheat& cheat, Rng& rng,
                      std::size_t trials);

struct ScalingPoint {
  std::size_t slices = 0;
  double a_max = 0, c = 0;
  double escape = 0;     // exp(-c Delta)
  double predicted = 0;  // coarsest escape ^ sqrt(slices / coarsest slices)
};

// Regroups raw slices by factors of F (finest first) until fewer than F remain,
// recomputing a_max (quantile q), c and the escape probability at each level.
// F = 1 yields the single finest level.
std::vector<ScalingPoint> slice_scaling(const SliceTable& t, std::size_t F, double f, double Delta,
                                        double q = 0.999);

// Sums every F consecutive slices of each row.
std::vector<c64> regroup(const std::vector<c64>& raw, std::size_t samples, std::size_t slices, std::size_t F);

// Complex Gaussian slices with variance 1 / (2^n slices), so E|A|^2 = 2^-n.
std::vector<c64> synthetic_slices(std::size_t samples, std::size_t slices, int n, Rng& rng);

// One Born sample per random circuit; row i holds its slice amplitudes over
// k_slice qubits cut at mid-depth.
std::vector<c64> circuit_slices(int n, int layers, std::size_t samples, int k_slice, Rng& rng);

// Header: "CASL", u32 version 1, u32 n, u64 L_val, u64 samples, u64 slices, f64 a_max;
// then samples x slices complex64 (float re, float im), little-endian.
void write_slice_table(const std::string& path, const std::vector<c64>& raw, std::size_t samples,
                       std::size_t slices, int n, std::int64_t L_val, double a_max);
struct SliceFile {
  int n = 0;
  std::int64_t L_val = 0;
  std::size_t samples = 0, slices = 0;
  double a_max = 0;
  std::vector<c64> raw;
};
SliceFile read_slice_table(const std::string& path);

}  // namespace certamp
