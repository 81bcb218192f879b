#pragma once

#include "smartflow/solver.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace smartflow {

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::size_t samples = 0;
  std::size_t failures = 0;
  double worst = 0.0; ///< largest violation measure seen
  std::string detail;
};

struct SelftestOptions {
  std::uint64_t seed = 0;
  std::size_t samples = 1000;
  bool inject_sign_flip = false; ///< replace s by -s in the monotonicity suite
};

[[nodiscard]] SuiteResult suite_monotonicity(const SelftestOptions &opts);
[[nodiscard]] SuiteResult suite_potential_gradient(const SelftestOptions &opts);
[[nodiscard]] SuiteResult suite_convexity(const SelftestOptions &opts);
[[nodiscard]] SuiteResult suite_coercivity_growth(const SelftestOptions &opts);
[[nodiscard]] SuiteResult suite_potential_bounds(const SelftestOptions &opts);
[[nodiscard]] SuiteResult suite_young(const SelftestOptions &opts);
[[nodiscard]] SuiteResult suite_luxembourg(const SelftestOptions &opts);
[[nodiscard]] SuiteResult suite_discrete_ibp(const SelftestOptions &opts);
[[nodiscard]] SuiteResult suite_chi_normalization(const SelftestOptions &opts);
[[nodiscard]] SuiteResult suite_flux_defect(const SelftestOptions &opts);
[[nodiscard]] SuiteResult suite_linear_oracle(const SelftestOptions &opts);

[[nodiscard]] std::vector<SuiteResult> run_selftest(const SelftestOptions &opts);
void print_selftest(std::ostream &os, const std::vector<SuiteResult> &results);

/// Monolithic solve of the p = 2 periodic flow-rate system: all slabs and
/// pressure drops at once with v_0 = v_M. Returns slab states 1..M (as
/// coefficient vectors) followed by the Gamma values in `gamma`.
struct DenseLinearSolution {
  std::vector<std::vector<double>> states;
  std::vector<double> gamma;
};
[[nodiscard]] DenseLinearSolution dense_periodic_linear(const FlowRateProblem &problem);

} // namespace smartflow
