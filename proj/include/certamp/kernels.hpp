#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace certamp::kernels {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2 };

// Best ISA this CPU supports.
Isa detected_isa();
// ISA used by the dispatching entry points; defaults to detected_isa().
Isa active_isa();
// Forces an ISA (tests use this to compare variants). Requests above the
// detected level are clamped.
void set_isa(Isa isa);
const char* isa_name(Isa isa);

// Precomputed pair-parity lookup for a diagonal RZZ layer. The parity vector
// of an index is linear over GF(2), so it splits into a low-half and a
// high-half table.
struct ParityTables {
  int low_bits = 0;
  std::vector<std::uint32_t> lo, hi;
  std::uint32_t mask(std::uint64_t x) const {
    return lo[x & ((std::uint64_t{1} << low_bits) - 1)] ^ hi[x >> low_bits];
  }
};
ParityTables make_parity_tables(int n, const std::vector<std::pair<int, int>>& pairs);

// m is a row-major 2x2 matrix acting on qubit q.
void apply_1q_scalar(cplx* a, int n, int q, const cplx* m);
void apply_1q_avx2(cplx* a, int n, int q, const cplx* m);
void apply_1q(cplx* a, int n, int q, const cplx* m);

// a[x] *= table[popcount(parity mask of x)]
void apply_phase_scalar(cplx* a, int n, const ParityTables& pt, const cplx* table);
void apply_phase_avx2(cplx* a, int n, const ParityTables& pt, const cplx* table);
void apply_phase(cplx* a, int n, const ParityTables& pt, const cplx* table);

double norm_sq_scalar(const cplx* a, std::size_t len);
double norm_sq_avx2(const cplx* a, std::size_t len);
double norm_sq(const cplx* a, std::size_t len);

}  // namespace certamp::kernels
