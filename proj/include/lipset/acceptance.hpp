#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lipset::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0;
  /// Zero means no time limit.
  double limit_seconds = 0;
  std::string detail;
};

struct Options {
  std::uint64_t seed = 42;
  /// Criterion ids to run; empty runs all of them.
  std::vector<int> only;
};

inline constexpr int kCriterionCount = 11;

std::vector<CriterionResult> run(const Options& opts);

/// "PASS  3  d_{n+1} > d_n/3 for n < 20  (0.01 s / 1 s)  detail".
std::string format_line(const CriterionResult& r);

}  // namespace lipset::acceptance
