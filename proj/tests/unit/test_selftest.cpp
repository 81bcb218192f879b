#include "smartflow/selftest.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace smartflow;

TEST_CASE("property suites pass at the default seed") {
  SelftestOptions opts;
  opts.samples = 200;
  const auto results = run_selftest(opts);
  CHECK(results.size() >= 10);
  for (const SuiteResult &r : results) {
    CAPTURE(r.name);
    CAPTURE(r.detail);
    CHECK(r.passed);
    CHECK(r.failures == 0);
    CHECK(r.samples >= 1);
  }
  std::ostringstream os;
  print_selftest(os, results);
  CHECK(os.str().find("monotonicity") != std::string::npos);
}

TEST_CASE("injected sign flip is detected") {
  SelftestOptions opts;
  opts.samples = 50;
  opts.inject_sign_flip = true;
  bool caught = false;
  for (const SuiteResult &r : run_selftest(opts))
    if (r.name.find("monotonicity") != std::string::npos)
      caught = !r.passed && r.failures > 0;
  CHECK(caught);
}

TEST_CASE("dense oracle agrees with the periodic solver") {
  const Interval dom{-1.0, 1.0};
  auto space = FeSpace::make(uniform_mesh(dom, 10), 1);
  const TimeGrid grid(1.0, 8);
  const FlowRateProblem pr{
      StressModel(ExponentField::constant(2.0), 0.0), space, grid,
      discretize_alpha([](double t) { return 0.2 + std::cos(2 * std::numbers::pi * t); }, grid,
                       AlphaDiscretization::Nodal),
      build_chi_h(space, default_chi(dom))};
  const DenseLinearSolution dense = dense_periodic_linear(pr);
  const auto rep = picard_periodic(pr);
  REQUIRE(rep.converged);
  for (std::size_t m = 1; m <= 8; ++m) {
    for (std::size_t i = 0; i < space->num_dofs(); ++i)
      CHECK(std::abs(dense.states[m - 1][i] -
                     rep.trajectory[m].coefficients()[i]) <= 1e-10);
    CHECK(std::abs(dense.gamma[m - 1] - rep.gamma[m]) <= 1e-10);
  }
}
