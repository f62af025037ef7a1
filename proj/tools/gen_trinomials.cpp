// Writes the trinomial catalog include: for every degree n <= 4096 the
// smallest k <= n/2 with x^n + x^k + 1 irreducible over GF(2), or -1.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "certamp/gf2.hpp"

int main(int argc, char** argv) {
  int max_deg = certamp::gf2::kCatalogMaxDegree;
  std::string out = argc > 1 ? argv[1] : "trinomials.inc";
  if (argc > 2) max_deg = std::stoi(argv[2]);
  std::ofstream os(out);
  if (!os) {
    std::cerr << "cannot open " << out << "\n";
    return 2;
  }
  os << "constexpr short kTrinomialK[" << certamp::gf2::kCatalogMaxDegree + 1 << "] = {\n";
  int found = 0;
  for (int n = 0; n <= certamp::gf2::kCatalogMaxDegree; ++n) {
    int k = -1;
    if (n >= 2 && n <= max_deg && n % 8 != 0) {
      for (int c = 1; c <= n / 2 && k < 0; ++c)
        if (certamp::gf2::trinomial_irreducible(n, c)) k = c;
    }
    if (k > 0) ++found;
    os << k << (n < certamp::gf2::kCatalogMaxDegree ? "," : "") << ((n % 16 == 15) ? "\n" : "");
    if (n % 256 == 0) std::fprintf(stderr, "degree %d, %d found\n", n, found);
  }
  os << "};\n";
  std::fprintf(stderr, "%d degrees with a trinomial\n", found);
  return 0;
}
