#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace certamp::gf2 {

// Polynomial over GF(2); bit i of the packed words is the coefficient of x^i.
using Poly = std::vector<std::uint64_t>;

// 64x64 -> 128 carryless product as (lo, hi).
std::pair<std::uint64_t, std::uint64_t> clmul64_scalar(std::uint64_t a, std::uint64_t b);
std::pair<std::uint64_t, std::uint64_t> clmul64_pclmul(std::uint64_t a, std::uint64_t b);

bool pclmul_available();
// Enables the PCLMUL path if the CPU has it; returns whether it is now active.
bool set_pclmul(bool on);
bool pclmul_active();

// Word-level product with the active clmul64, Karatsuba above kKaratsubaWords.
inline constexpr std::size_t kKaratsubaWords = 64;  // 4096 bits
Poly mul(const Poly& a, const Poly& b);
// Quadratic bit-by-bit product. Reference only.
Poly mul_naive(const Poly& a, const Poly& b);

int degree(const Poly& a);  // -1 for zero
void trim(Poly& a);
Poly shl(const Poly& a, std::size_t bits);
Poly shr(const Poly& a, std::size_t bits);
void xor_into(Poly& dst, const Poly& src);
bool get_bit(const Poly& a, std::size_t i);
void set_bit(Poly& a, std::size_t i);

// c mod (x^n + x^k + 1), 0 < k < n.
Poly mod_trinomial(Poly c, int n, int k);
Poly mulmod_trinomial(const Poly& a, const Poly& b, int n, int k);
Poly sqrmod_trinomial(const Poly& a, int n, int k);
// a * b mod (x^d - 1)
Poly cyclic_mul(const Poly& a, const Poly& b, std::size_t d);

Poly mod(Poly a, const Poly& m);
Poly gcd(Poly a, Poly b);

bool trinomial_irreducible(int n, int k);
// Smallest k <= n/2 with x^n + x^k + 1 irreducible from the shipped catalog
// (degrees 2..4096), or -1 when the catalog has no entry for n.
int catalog_trinomial(int n);
inline constexpr int kCatalogMaxDegree = 4096;
// Catalog lookup, falling back to a direct search above the catalog range.
int find_trinomial(int n);

}  // namespace certamp::gf2
