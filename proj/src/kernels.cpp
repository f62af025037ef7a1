#include "certamp/kernels.hpp"

#include <atomic>
#include <bit>

namespace certamp::kernels {

namespace {

Isa probe() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Isa::avx2;
#endif
  return Isa::scalar;
}

std::atomic<int>& active_slot() {
  static std::atomic<int> slot{static_cast<int>(detected_isa())};
  return slot;
}

}  // namespace

Isa detected_isa() {
  static const Isa isa = probe();
  return isa;
}

Isa active_isa() { return static_cast<Isa>(active_slot().load(std::memory_order_relaxed)); }

void set_isa(Isa isa) {
  if (isa == Isa::avx2 && detected_isa() != Isa::avx2) isa = Isa::scalar;
  active_slot().store(static_cast<int>(isa), std::memory_order_relaxed);
}

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

ParityTables make_parity_tables(int n, const std::vector<std::pair<int, int>>& pairs) {
  ParityTables pt;
  pt.low_bits = n / 2;
  int high_bits = n - pt.low_bits;
  auto build = [&](int offset, int bits) {
    std::vector<std::uint32_t> t(std::size_t{1} << bits, 0);
    for (std::size_t x = 0; x < t.size(); ++x) {
      std::uint64_t full = std::uint64_t(x) << offset;
      std::uint32_t m = 0;
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        auto [a, b] = pairs[p];
        m |= std::uint32_t(((full >> a) ^ (full >> b)) & 1u) << p;
      }
      t[x] = m;
    }
    return t;
  };
  pt.lo = build(0, pt.low_bits);
  pt.hi = build(pt.low_bits, high_bits);
  return pt;
}

void apply_1q_scalar(cplx* a, int n, int q, const cplx* m) {
  const std::size_t dim = std::size_t{1} << n, stride = std::size_t{1} << q;
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      cplx a0 = a[i], a1 = a[i + stride];
      a[i] = m[0] * a0 + m[1] * a1;
      a[i + stride] = m[2] * a0 + m[3] * a1;
    }
  }
}

void apply_phase_scalar(cplx* a, int n, const ParityTables& pt, const cplx* table) {
  const std::size_t dim = std::size_t{1} << n;
  for (std::size_t x = 0; x < dim; ++x) a[x] *= table[std::popcount(pt.mask(x))];
}

double norm_sq_scalar(const cplx* a, std::size_t len) {
  double s = 0;
  for (std::size_t i = 0; i < len; ++i) s += std::norm(a[i]);
  return s;
}

void apply_1q(cplx* a, int n, int q, const cplx* m) {
  if (active_isa() == Isa::avx2)
    apply_1q_avx2(a, n, q, m);
  else
    apply_1q_scalar(a, n, q, m);
}

void apply_phase(cplx* a, int n, const ParityTables& pt, const cplx* table) {
  if (active_isa() == Isa::avx2)
    apply_phase_avx2(a, n, pt, table);
  else
    apply_phase_scalar(a, n, pt, table);
}

double norm_sq(const cplx* a, std::size_t len) {
  return active_isa() == Isa::avx2 ? norm_sq_avx2(a, len) : norm_sq_scalar(a, len);
}

}  // namespace certamp::kernels
