#include <complex>
#include <vector>

#include <gtest/gtest.h>

#include "certamp/gf2.hpp"
#include "certamp/kernels.hpp"
#include "certamp/qsim.hpp"
#include "certamp/rng.hpp"

using namespace certamp;
using kernels::cplx;

namespace {

std::vector<cplx> random_state(int n, Rng& rng) {
  std::vector<cplx> a(std::size_t{1} << n);
  for (auto& x : a) x = {rng.normal(), rng.normal()};
  return a;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

bool have_avx2() { return kernels::detected_isa() == kernels::Isa::avx2; }

}  // namespace

TEST(Kernels, OneQubitAvx2MatchesScalar) {
  if (!have_avx2()) GTEST_SKIP() << "no AVX2";
  Rng rng(1);
  for (int n : {1, 2, 3, 7, 12})
    for (int q = 0; q < n; ++q) {
      auto a = random_state(n, rng), b = a;
      Mat2 m = one_qubit_gate(std::uint8_t(rng.below(8)));
      kernels::apply_1q_scalar(a.data(), n, q, m.data());
      kernels::apply_1q_avx2(b.data(), n, q, m.data());
      EXPECT_LT(max_diff(a, b), 1e-13) << n << ' ' << q;
    }
}

TEST(Kernels, PhaseLayerAvx2MatchesScalar) {
  if (!have_avx2()) GTEST_SKIP() << "no AVX2";
  Rng rng(2);
  for (int n : {2, 5, 10, 13}) {
    std::vector<std::pair<int, int>> pairs;
    auto perm = distinct_uniform(rng, std::uint64_t(n), std::size_t(n));
    for (int i = 0; i + 1 < n; i += 2) pairs.emplace_back(int(perm[i]), int(perm[i + 1]));
    auto pt = kernels::make_parity_tables(n, pairs);
    std::vector<cplx> table(pairs.size() + 1);
    for (std::size_t k = 0; k < table.size(); ++k) table[k] = std::polar(1.0, 0.37 * double(k) - 0.5);
    auto a = random_state(n, rng), b = a;
    kernels::apply_phase_scalar(a.data(), n, pt, table.data());
    kernels::apply_phase_avx2(b.data(), n, pt, table.data());
    EXPECT_LT(max_diff(a, b), 1e-13) << n;
  }
}

TEST(Kernels, NormAvx2MatchesScalar) {
  if (!have_avx2()) GTEST_SKIP() << "no AVX2";
  Rng rng(3);
  for (int n : {0, 1, 2, 9, 14}) {
    auto a = random_state(n, rng);
    double s = kernels::norm_sq_scalar(a.data(), a.size()), v = kernels::norm_sq_avx2(a.data(), a.size());
    EXPECT_NEAR(s, v, 1e-12 * s);
  }
}

TEST(Kernels, DispatchedCircuitIsIsaIndependent) {
  if (!have_avx2()) GTEST_SKIP() << "no AVX2";
  auto spec = gen_circuit(12, 8, 6, 99);
  auto basis = BasisMask{12, 0xA5A};
  kernels::set_isa(kernels::Isa::scalar);
  auto s = evolve(spec, basis);
  kernels::set_isa(kernels::Isa::avx2);
  auto v = evolve(spec, basis);
  kernels::set_isa(kernels::detected_isa());
  EXPECT_LT(max_diff(s.amp, v.amp), 1e-12);
}

TEST(Gf2, PclmulMatchesScalarClmul) {
  if (!gf2::pclmul_available()) GTEST_SKIP() << "no PCLMUL";
  Rng rng(4);
  for (int i = 0; i < 10'000; ++i) {
    std::uint64_t a = rng.next(), b = rng.next();
    EXPECT_EQ(gf2::clmul64_scalar(a, b), gf2::clmul64_pclmul(a, b));
  }
  EXPECT_EQ(gf2::clmul64_scalar(~0ULL, ~0ULL), gf2::clmul64_pclmul(~0ULL, ~0ULL));
}

TEST(Gf2, WordProductMatchesNaiveOnBothPaths) {
  Rng rng(5);
  for (std::size_t words : {1u, 3u, 17u, 64u, 65u, 130u}) {
    gf2::Poly a(words), b(words + 3);
    for (auto& w : a) w = rng.next();
    for (auto& w : b) w = rng.next();
    auto ref = gf2::mul_naive(a, b);
    gf2::trim(ref);
    for (bool on : {false, true}) {
      gf2::set_pclmul(on);
      auto got = gf2::mul(a, b);
      gf2::trim(got);
      EXPECT_EQ(got, ref) << words << " pclmul=" << on;
    }
  }
  gf2::set_pclmul(true);
}

TEST(Gf2, TrinomialReductionAndCatalog) {
  // x^7 + x + 1 is irreducible; x^8 + x^k + 1 never is.
  EXPECT_TRUE(gf2::trinomial_irreducible(7, 1));
  EXPECT_FALSE(gf2::trinomial_irreducible(8, 3));
  EXPECT_EQ(gf2::catalog_trinomial(8), -1);
  for (int n : {127, 521, 607, 1279, 3001}) {
    int k = gf2::catalog_trinomial(n);
    ASSERT_GT(k, 0) << n;
    EXPECT_TRUE(gf2::trinomial_irreducible(n, k)) << n;
  }
  // Generic reduction equals reduction modulo the explicit trinomial.
  Rng rng(6);
  const int n = 521, k = gf2::catalog_trinomial(521);
  gf2::Poly a(9), b(9);
  for (auto& w : a) w = rng.next();
  for (auto& w : b) w = rng.next();
  a[8] &= 0x1FF;
  b[8] &= 0x1FF;
  gf2::Poly m;
  gf2::set_bit(m, n);
  gf2::set_bit(m, std::size_t(k));
  gf2::set_bit(m, 0);
  auto want = gf2::mod(gf2::mul_naive(a, b), m);
  auto got = gf2::mulmod_trinomial(a, b, n, k);
  gf2::trim(want);
  gf2::trim(got);
  EXPECT_EQ(got, want);
  auto sq = gf2::sqrmod_trinomial(a, n, k), sq_ref = gf2::mulmod_trinomial(a, a, n, k);
  gf2::trim(sq);
  gf2::trim(sq_ref);
  EXPECT_EQ(sq, sq_ref);
}

TEST(Gf2, CyclicProductWrapsAround) {
  gf2::Poly a{0}, b{0};
  gf2::set_bit(a, 4);
  gf2::set_bit(b, 3);
  auto c = gf2::cyclic_mul(a, b, 5);  // x^7 mod (x^5 - 1) = x^2
  gf2::trim(c);
  EXPECT_EQ(gf2::degree(c), 2);
  EXPECT_TRUE(gf2::get_bit(c, 2));
}
