#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sumoss {

struct SuiteReport {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Self-checks against independent routes:
///  - delta_gain vs differences of log-determinant MI (|err| <= 1e-8)
///  - greedy chain vs exhaustive best subset (>= (1 - 1/e) of optimum)
///  - landing sampler moments vs Sigma_dev (10% relative, 0.02 absolute floor)
///  - expected-gain submodularity on nested chosen sets (1e-6 slack)
/// `small` shrinks instance counts for a quick run.
std::vector<SuiteReport> run_verification(bool small, std::uint64_t seed);

}  // namespace sumoss
