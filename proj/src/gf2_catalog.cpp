#include "certamp/gf2.hpp"

namespace certamp::gf2 {

namespace {
// Generated by tools/gen_trinomials: smallest k with x^n + x^k + 1 irreducible, -1 if none.
#include "trinomials.inc"
}  // namespace

int catalog_trinomial(int n) {
  if (n < 0 || n > kCatalogMaxDegree) return -1;
  return kTrinomialK[n];
}

}  // namespace certamp::gf2
