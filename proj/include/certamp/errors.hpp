#pragma once

#include <stdexcept>
#include <string>

namespace certamp {

// Parameters are well-formed but admit no solution (no feasible extractor,
// no certifiable entropy, no root). The CLI maps this to exit code 1.
class Infeasible : public std::runtime_error {
 public:
  explicit Infeasible(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace certamp
