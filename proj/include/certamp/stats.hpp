#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "certamp/bitblock.hpp"

namespace certamp {

struct TestResult {
  double statistic = 0;
  double p_value = 1;
};

// Sample mean and standard error of the mean.
struct MeanSe {
  double mean = 0;
  double se = 0;
  double var = 0;
};
MeanSe mean_se(const std::vector<double>& xs);

TestResult ks_one_sample(std::vector<double> xs, const std::function<double(double)>& cdf);
TestResult ks_two_sample(std::vector<double> a, std::vector<double> b);
TestResult chi_square_uniform(const std::vector<std::uint64_t>& counts);

// Frequency (monobit) test.
TestResult monobit(const BitBlock& bits);
// Serial test with overlapping m-bit patterns; returns both p-values (nabla psi^2, nabla^2 psi^2).
std::pair<TestResult, TestResult> serial(const BitBlock& bits, int m = 2);

// Monobit + serial(m=2) at the given level.
bool battery_passes(const BitBlock& bits, double alpha = 0.01);

}  // namespace certamp
