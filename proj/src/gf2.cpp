#include "certamp/gf2.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace certamp::gf2 {

std::pair<std::uint64_t, std::uint64_t> clmul64_scalar(std::uint64_t a, std::uint64_t b) {
  // 4-bit window: table of a * t for t < 16, as 68-bit values split lo/hi
  std::array<std::uint64_t, 16> tl{}, th{};
  for (unsigned t = 1; t < 16; ++t) {
    std::uint64_t lo = 0, hi = 0;
    for (unsigned bit = 0; bit < 4; ++bit) {
      if (t & (1u << bit)) {
        lo ^= a << bit;
        hi ^= bit ? a >> (64 - bit) : 0;
      }
    }
    tl[t] = lo;
    th[t] = hi;
  }
  std::uint64_t lo = 0, hi = 0;
  for (int s = 60; s >= 0; s -= 4) {
    unsigned t = (b >> s) & 15u;
    hi = (hi << 4) | (lo >> 60);
    lo <<= 4;
    lo ^= tl[t];
    hi ^= th[t];
  }
  return {lo, hi};
}

namespace {

bool& pclmul_flag() {
  static bool on = pclmul_available();
  return on;
}

using Clmul = std::pair<std::uint64_t, std::uint64_t> (*)(std::uint64_t, std::uint64_t);

Clmul active_clmul() { return pclmul_flag() ? clmul64_pclmul : clmul64_scalar; }

void school(const std::uint64_t* a, std::size_t na, const std::uint64_t* b, std::size_t nb, std::uint64_t* out,
            Clmul f) {
  for (std::size_t i = 0; i < na; ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < nb; ++j) {
      auto [lo, hi] = f(a[i], b[j]);
      out[i + j] ^= lo;
      out[i + j + 1] ^= hi;
    }
  }
}

// out (2n words, zeroed) = a * b, both n words
void karatsuba(const std::uint64_t* a, const std::uint64_t* b, std::size_t n, std::uint64_t* out, Clmul f) {
  if (n <= kKaratsubaWords) {
    school(a, n, b, n, out, f);
    return;
  }
  const std::size_t h = n / 2, r = n - h;  // low half h words, high half r >= h words
  std::vector<std::uint64_t> z0(2 * h, 0), z2(2 * r, 0), z1(2 * r, 0), sa(r, 0), sb(r, 0);
  karatsuba(a, b, h, z0.data(), f);
  karatsuba(a + h, b + h, r, z2.data(), f);
  for (std::size_t i = 0; i < r; ++i) {
    sa[i] = a[h + i] ^ (i < h ? a[i] : 0);
    sb[i] = b[h + i] ^ (i < h ? b[i] : 0);
  }
  karatsuba(sa.data(), sb.data(), r, z1.data(), f);
  for (std::size_t i = 0; i < 2 * h; ++i) z1[i] ^= z0[i];
  for (std::size_t i = 0; i < 2 * r; ++i) z1[i] ^= z2[i];
  for (std::size_t i = 0; i < 2 * h; ++i) out[i] ^= z0[i];
  for (std::size_t i = 0; i < 2 * r; ++i) out[2 * h + i] ^= z2[i];
  for (std::size_t i = 0; i < 2 * r; ++i) out[h + i] ^= z1[i];
}

}  // namespace

bool set_pclmul(bool on) {
  pclmul_flag() = on && pclmul_available();
  return pclmul_flag();
}

bool pclmul_active() { return pclmul_flag(); }

int degree(const Poly& a) {
  for (std::size_t i = a.size(); i-- > 0;)
    if (a[i]) return int(i * 64 + 63 - std::size_t(__builtin_clzll(a[i])));
  return -1;
}

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

bool get_bit(const Poly& a, std::size_t i) { return i / 64 < a.size() && ((a[i / 64] >> (i % 64)) & 1u); }

void set_bit(Poly& a, std::size_t i) {
  if (a.size() <= i / 64) a.resize(i / 64 + 1, 0);
  a[i / 64] |= std::uint64_t{1} << (i % 64);
}

void xor_into(Poly& dst, const Poly& src) {
  if (dst.size() < src.size()) dst.resize(src.size(), 0);
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] ^= src[i];
}

Poly shl(const Poly& a, std::size_t bits) {
  if (a.empty()) return {};
  const std::size_t w = bits / 64, s = bits % 64;
  Poly out(a.size() + w + 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i + w] ^= a[i] << s;
    if (s) out[i + w + 1] ^= a[i] >> (64 - s);
  }
  trim(out);
  return out;
}

Poly shr(const Poly& a, std::size_t bits) {
  const std::size_t w = bits / 64, s = bits % 64;
  if (w >= a.size()) return {};
  Poly out(a.size() - w, 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = a[i + w] >> s;
    if (s && i + w + 1 < a.size()) out[i] |= a[i + w + 1] << (64 - s);
  }
  trim(out);
  return out;
}

Poly mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Clmul f = active_clmul();
  const std::size_t n = std::max(a.size(), b.size());
  Poly out;
  if (n > kKaratsubaWords && std::min(a.size(), b.size()) * 2 > n) {
    Poly pa(a), pb(b);
    pa.resize(n, 0);
    pb.resize(n, 0);
    out.assign(2 * n, 0);
    karatsuba(pa.data(), pb.data(), n, out.data(), f);
  } else {
    out.assign(a.size() + b.size(), 0);
    school(a.data(), a.size(), b.data(), b.size(), out.data(), f);
  }
  trim(out);
  return out;
}

Poly mul_naive(const Poly& a, const Poly& b) {
  const int da = degree(a), db = degree(b);
  if (da < 0 || db < 0) return {};
  Poly out(std::size_t(da + db) / 64 + 1, 0);
  for (int i = 0; i <= da; ++i) {
    if (!get_bit(a, std::size_t(i))) continue;
    for (int j = 0; j <= db; ++j)
      if (get_bit(b, std::size_t(j))) out[std::size_t(i + j) / 64] ^= std::uint64_t{1} << ((i + j) % 64);
  }
  trim(out);
  return out;
}

Poly mod_trinomial(Poly c, int n, int k) {
  if (!(0 < k && k < n)) throw std::invalid_argument("mod_trinomial: need 0 < k < n");
  trim(c);
  const std::size_t nw = std::size_t(n) / 64, nb = std::size_t(n) % 64;
  while (degree(c) >= n) {
    Poly hi = shr(c, std::size_t(n));
    // keep the low n bits
    c.resize(nw + 1, 0);
    c[nw] &= nb ? (std::uint64_t{1} << nb) - 1 : 0;
    xor_into(c, hi);
    xor_into(c, shl(hi, std::size_t(k)));
    trim(c);
  }
  return c;
}

Poly mulmod_trinomial(const Poly& a, const Poly& b, int n, int k) { return mod_trinomial(mul(a, b), n, k); }

Poly sqrmod_trinomial(const Poly& a, int n, int k) {
  // squaring spreads bits: coefficient i moves to 2i
  static const auto spread = [] {
    std::array<std::uint16_t, 256> t{};
    for (unsigned v = 0; v < 256; ++v) {
      std::uint16_t s = 0;
      for (unsigned b = 0; b < 8; ++b)
        if (v & (1u << b)) s |= std::uint16_t(1u << (2 * b));
      t[v] = s;
    }
    return t;
  }();
  Poly sq(2 * a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::uint64_t w = a[i], lo = 0, hi = 0;
    for (unsigned byte = 0; byte < 4; ++byte) {
      lo |= std::uint64_t(spread[(w >> (8 * byte)) & 0xFF]) << (16 * byte);
      hi |= std::uint64_t(spread[(w >> (32 + 8 * byte)) & 0xFF]) << (16 * byte);
    }
    sq[2 * i] = lo;
    sq[2 * i + 1] = hi;
  }
  return mod_trinomial(std::move(sq), n, k);
}

Poly cyclic_mul(const Poly& a, const Poly& b, std::size_t d) {
  if (d == 0) throw std::invalid_argument("cyclic_mul: d = 0");
  Poly c = mul(a, b);
  // fold x^{d+i} onto x^i until the degree is below d
  while (degree(c) >= int(d)) {
    Poly hi = shr(c, d);
    c.resize(d / 64 + 1, 0);
    c[d / 64] &= (d % 64) ? (std::uint64_t{1} << (d % 64)) - 1 : 0;
    xor_into(c, hi);
    trim(c);
  }
  return c;
}

Poly mod(Poly a, const Poly& m) {
  const int dm = degree(m);
  if (dm < 0) throw std::invalid_argument("gf2::mod: zero modulus");
  trim(a);
  for (int da = degree(a); da >= dm; da = degree(a)) xor_into(a, shl(m, std::size_t(da - dm)));
  trim(a);
  return a;
}

Poly gcd(Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    a = mod(std::move(a), b);
    std::swap(a, b);
  }
  return a;
}

namespace {

Poly trinomial(int n, int k) {
  Poly f;
  set_bit(f, std::size_t(n));
  set_bit(f, std::size_t(k));
  set_bit(f, 0);
  return f;
}

// x^e mod (x^D + x) for D >= 2: x^D = x, so exponents >= 1 fold with period D - 1.
std::size_t fold_exponent(std::size_t e, std::size_t D) { return e == 0 ? 0 : (e - 1) % (D - 1) + 1; }

bool is_one(const Poly& p) { return p.size() == 1 && p[0] == 1; }

}  // namespace

bool trinomial_irreducible(int n, int k) {
  if (n < 2 || k <= 0 || k >= n) return false;
  const Poly f = trinomial(n, k);
  // Cheap sieve: a factor of degree dividing d shows up in gcd(f, x^{2^d} + x).
  // Reducing f modulo x^{2^d} + x only folds its three exponents.
  for (int d = 1; d <= 12 && 2 * d <= n; ++d) {
    const std::size_t D = std::size_t{1} << d;
    if (D >= std::size_t(n)) break;
    Poly r;
    for (std::size_t e : {std::size_t(n), std::size_t(k), std::size_t{0}}) {
      std::size_t fe = fold_exponent(e, D);
      Poly t;
      set_bit(t, fe);
      xor_into(r, t);
    }
    Poly m;
    set_bit(m, D);
    set_bit(m, 1);
    if (!is_one(gcd(m, r))) return false;
  }
  // Rabin: x^{2^n} = x mod f, and gcd(x^{2^{n/q}} - x, f) = 1 for primes q | n.
  std::vector<int> qs;
  for (int m = n, q = 2; m > 1; ++q) {
    if (q * q > m) q = m;
    if (m % q == 0) {
      qs.push_back(q);
      while (m % q == 0) m /= q;
    }
  }
  std::vector<int> checkpoints;
  for (int q : qs) checkpoints.push_back(n / q);
  Poly x;
  set_bit(x, 1);
  Poly cur = x;
  for (int i = 1; i <= n; ++i) {
    cur = sqrmod_trinomial(cur, n, k);
    if (std::find(checkpoints.begin(), checkpoints.end(), i) != checkpoints.end()) {
      Poly diff = cur;
      xor_into(diff, x);
      trim(diff);
      if (diff.empty() || !is_one(gcd(f, diff))) return false;
    }
  }
  return cur == x;
}

int find_trinomial(int n) {
  if (n <= kCatalogMaxDegree) return catalog_trinomial(n);
  if (n % 8 == 0) return -1;  // Swan: no irreducible trinomial of degree divisible by 8
  for (int k = 1; k <= n / 2; ++k)
    if (trinomial_irreducible(n, k)) return k;
  return -1;
}

}  // namespace certamp::gf2
