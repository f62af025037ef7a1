#include <immintrin.h>

#include "certamp/gf2.hpp"

namespace certamp::gf2 {

bool pclmul_available() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("pclmul") && __builtin_cpu_supports("sse4.1");
}

std::pair<std::uint64_t, std::uint64_t> clmul64_pclmul(std::uint64_t a, std::uint64_t b) {
  __m128i va = _mm_cvtsi64_si128(static_cast<long long>(a));
  __m128i vb = _mm_cvtsi64_si128(static_cast<long long>(b));
  __m128i r = _mm_clmulepi64_si128(va, vb, 0x00);
  return {static_cast<std::uint64_t>(_mm_cvtsi128_si64(r)), static_cast<std::uint64_t>(_mm_extract_epi64(r, 1))};
}

}  // namespace certamp::gf2
