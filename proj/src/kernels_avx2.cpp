// Built with -mavx2 -mfma; only reached after the runtime CPU check.
#include <immintrin.h>

#include <bit>

#include "certamp/kernels.hpp"

namespace certamp::kernels {

namespace {

// Two complex numbers per register: (re0, im0, re1, im1).
inline __m256d cmul(__m256d v, __m256d re, __m256d im) {
  __m256d swapped = _mm256_permute_pd(v, 0b0101);
  return _mm256_fmaddsub_pd(v, re, _mm256_mul_pd(swapped, im));
}

inline __m256d bcast_re(cplx c) { return _mm256_set1_pd(c.real()); }
inline __m256d bcast_im(cplx c) { return _mm256_set1_pd(c.imag()); }

}  // namespace

void apply_1q_avx2(cplx* a, int n, int q, const cplx* m) {
  const std::size_t dim = std::size_t{1} << n;
  auto* d = reinterpret_cast<double*>(a);
  if (q == 0) {
    const __m256d c0re = _mm256_setr_pd(m[0].real(), m[0].real(), m[2].real(), m[2].real());
    const __m256d c0im = _mm256_setr_pd(m[0].imag(), m[0].imag(), m[2].imag(), m[2].imag());
    const __m256d c1re = _mm256_setr_pd(m[1].real(), m[1].real(), m[3].real(), m[3].real());
    const __m256d c1im = _mm256_setr_pd(m[1].imag(), m[1].imag(), m[3].imag(), m[3].imag());
    for (std::size_t i = 0; i < dim; i += 2) {
      __m256d v = _mm256_loadu_pd(d + 2 * i);
      __m256d lo = _mm256_permute2f128_pd(v, v, 0x00);
      __m256d hi = _mm256_permute2f128_pd(v, v, 0x11);
      _mm256_storeu_pd(d + 2 * i, _mm256_add_pd(cmul(lo, c0re, c0im), cmul(hi, c1re, c1im)));
    }
    return;
  }
  const __m256d m0r = bcast_re(m[0]), m0i = bcast_im(m[0]), m1r = bcast_re(m[1]), m1i = bcast_im(m[1]);
  const __m256d m2r = bcast_re(m[2]), m2i = bcast_im(m[2]), m3r = bcast_re(m[3]), m3i = bcast_im(m[3]);
  const std::size_t stride = std::size_t{1} << q;
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; i += 2) {
      double* p0 = d + 2 * i;
      double* p1 = d + 2 * (i + stride);
      __m256d a0 = _mm256_loadu_pd(p0), a1 = _mm256_loadu_pd(p1);
      __m256d r0 = _mm256_add_pd(cmul(a0, m0r, m0i), cmul(a1, m1r, m1i));
      __m256d r1 = _mm256_add_pd(cmul(a0, m2r, m2i), cmul(a1, m3r, m3i));
      _mm256_storeu_pd(p0, r0);
      _mm256_storeu_pd(p1, r1);
    }
  }
}

void apply_phase_avx2(cplx* a, int n, const ParityTables& pt, const cplx* table) {
  const std::size_t dim = std::size_t{1} << n;
  auto* d = reinterpret_cast<double*>(a);
  if (dim < 2) {
    apply_phase_scalar(a, n, pt, table);
    return;
  }
  for (std::size_t x = 0; x < dim; x += 2) {
    cplx t0 = table[std::popcount(pt.mask(x))], t1 = table[std::popcount(pt.mask(x + 1))];
    __m256d re = _mm256_setr_pd(t0.real(), t0.real(), t1.real(), t1.real());
    __m256d im = _mm256_setr_pd(t0.imag(), t0.imag(), t1.imag(), t1.imag());
    __m256d v = _mm256_loadu_pd(d + 2 * x);
    _mm256_storeu_pd(d + 2 * x, cmul(v, re, im));
  }
}

double norm_sq_avx2(const cplx* a, std::size_t len) {
  const double* d = reinterpret_cast<const double*>(a);
  std::size_t total = 2 * len, i = 0;
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  for (; i + 8 <= total; i += 8) {
    __m256d v0 = _mm256_loadu_pd(d + i), v1 = _mm256_loadu_pd(d + i + 4);
    acc0 = _mm256_fmadd_pd(v0, v0, acc0);
    acc1 = _mm256_fmadd_pd(v1, v1, acc1);
  }
  alignas(32) double buf[4];
  _mm256_store_pd(buf, _mm256_add_pd(acc0, acc1));
  double s = buf[0] + buf[1] + buf[2] + buf[3];
  for (; i < total; ++i) s += d[i] * d[i];
  return s;
}

}  // namespace certamp::kernels
