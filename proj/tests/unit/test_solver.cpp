#include "smartflow/bench.hpp"
#include "smartflow/error.hpp"
#include "smartflow/solver.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace smartflow;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;

FlowRateProblem flow_problem(double p, std::size_t n, std::size_t M,
                             const std::function<double(double)> &alpha,
                             double period = 1.0, double delta = 0.0) {
  const Interval dom{-1.0, 1.0};
  auto space = FeSpace::make(uniform_mesh(dom, n), 1);
  const TimeGrid grid(period, M);
  return FlowRateProblem{StressModel(ExponentField::constant(p), delta), space, grid,
                         discretize_alpha(alpha, grid, AlphaDiscretization::Nodal),
                         build_chi_h(space, default_chi(dom))};
}

PressureProblem pressure_problem(double p, std::size_t n, std::size_t M,
                                 const std::function<double(double)> &gamma,
                                 double period = 1.0) {
  auto space = FeSpace::make(uniform_mesh({-1.0, 1.0}, n), 1);
  const TimeGrid grid(period, M);
  std::vector<double> g;
  for (std::size_t m = 1; m <= M; ++m)
    g.push_back(gamma(grid.node(m)));
  return PressureProblem{StressModel(ExponentField::constant(p), 0.0), space, grid,
                         TimeSeries(grid, g, false)};
}

double max_abs(const std::vector<double> &v) {
  double m = 0.0;
  for (double x : v)
    m = std::max(m, std::abs(x));
  return m;
}
} // namespace

TEST_CASE("linear step satisfies the constrained backward Euler equation") {
  const auto pr = flow_problem(2.0, 12, 8, [](double t) { return 0.3 + std::sin(2 * kPi * t); });
  FeFunction prev(pr.space);
  for (std::size_t i = 0; i < prev.coefficients().size(); ++i)
    prev.coefficients()[i] = std::sin(0.7 * static_cast<double>(i));
  const StepResult r = inner_solve_step(pr, prev, 3);
  REQUIRE(r.converged);
  REQUIRE(r.multiplier.has_value());
  const auto M = assemble_mass(*pr.space);
  const auto K = assemble_stiffness(*pr.space);
  const auto b = assemble_flux_vector(*pr.space);
  const double tau = pr.grid.tau();
  std::vector<double> res(b.size());
  const auto mv = M.multiply(r.v.coefficients());
  const auto mp = M.multiply(prev.coefficients());
  const auto kv = K.multiply(r.v.coefficients());
  for (std::size_t i = 0; i < b.size(); ++i)
    res[i] = (mv[i] - mp[i]) / tau + kv[i];
  const double proj = dot(res, b) / dot(b, b);
  for (std::size_t i = 0; i < b.size(); ++i)
    CHECK(std::abs(res[i] - proj * b[i]) <= 1e-10);
  CHECK(dot(b, r.v.coefficients()) == Approx(pr.alpha[3]).epsilon(1e-13));
}

TEST_CASE("zero flow rate gives the zero trajectory") {
  const auto pr = flow_problem(2.5, 8, 4, [](double) { return 0.0; });
  const StepResult r = inner_solve_step(pr, FeFunction(pr.space), 1);
  CHECK(max_abs(r.v.coefficients()) == 0.0);
  CHECK(*r.multiplier == 0.0);
  const auto traj = solve_initial_value(pr, FeFunction(pr.space));
  for (std::size_t m = 0; m <= 4; ++m)
    CHECK(max_abs(traj[m].coefficients()) == 0.0);
  const auto rep = picard_periodic(pr);
  CHECK(rep.converged);
  CHECK(rep.picard_iterations == 1);
  CHECK(max_abs(rep.gamma.values()) == 0.0);
  const Diagnostics d = rep.diagnostics;
  CHECK(d.weak_modular == 0.0);
  CHECK(d.sup_modular == 0.0);
  CHECK(d.dtau_norm_sq == 0.0);
  CHECK(d.gamma_norm_sq == 0.0);
}

TEST_CASE("single slab march") {
  const auto pr = flow_problem(1.7, 10, 1, [](double) { return 0.4; });
  const auto traj = solve_initial_value(pr, 0.4 * pr.chi_h.function);
  CHECK(traj.grid().steps() == 1);
  CHECK(dot(assemble_flux_vector(*pr.space), traj[1].coefficients()) == Approx(0.4));
}

TEST_CASE("womersley periodic solve") {
  StudyConfig cfg = womersley_study(1.0, 4);
  const LevelSetup s = make_level(cfg, 4);
  const auto pr = make_flow_rate_problem(cfg, s);
  const auto rep = picard_periodic(pr, cfg.picard);
  REQUIRE(rep.converged);
  for (std::size_t i = 1; i < rep.picard_residuals.size(); ++i)
    CHECK(rep.picard_residuals[i] < rep.picard_residuals[i - 1]);
  CHECK(max_abs(rep.flux_defects) <= 1e-12);
  for (std::size_t m = 1; m <= s.grid.steps(); ++m)
    CHECK(std::abs(rep.gamma[m] - std::cos(s.grid.node(m))) <= 0.2);
}

TEST_CASE("picard iteration cap reports non-convergence") {
  StudyConfig cfg = womersley_study(5.0, 3);
  cfg.picard.max_iters = 1;
  const LevelSetup s = make_level(cfg, 3);
  const auto rep = picard_periodic(make_flow_rate_problem(cfg, s), cfg.picard);
  CHECK_FALSE(rep.converged);
  CHECK(rep.picard_iterations == 1);
}

TEST_CASE("inner iteration cap reports a failure") {
  const auto pr = flow_problem(3.0, 16, 8, [](double t) { return 1.0 + std::cos(2 * kPi * t); });
  PicardConfig cfg;
  cfg.inner_max_iters = 1;
  const auto rep = picard_periodic(pr, cfg);
  CHECK_FALSE(rep.converged);
  CHECK_FALSE(rep.failure.empty());
  CHECK_THROWS_AS((void)solve_initial_value(pr, FeFunction(pr.space), cfg), ConvergenceFailure);
}

TEST_CASE("steady flow rate recovers unit pressure drop") {
  const StudyConfig cfg = steady_study(SteadySpec::constant(2.5), 5);
  const LevelSetup s = make_level(cfg, 5);
  const auto rep = picard_periodic(make_flow_rate_problem(cfg, s), cfg.picard);
  REQUIRE(rep.converged);
  for (std::size_t m = 1; m <= s.grid.steps(); ++m)
    CHECK(rep.gamma[m] == Approx(-1.0).epsilon(0.05));
  CHECK(std::sqrt(rep.diagnostics.dtau_norm_sq) <= 1e-8);
}

TEST_CASE("pressure-drop problem") {
  const auto zero = pressure_problem(2.5, 8, 4, [](double) { return 0.0; });
  const auto rz = solve_pressure_periodic(zero);
  CHECK(rz.converged);
  for (std::size_t m = 0; m <= 4; ++m)
    CHECK(max_abs(rz.trajectory[m].coefficients()) == 0.0);

  const auto steady = pressure_problem(2.5, 32, 8, [](double) { return -1.0; });
  const auto rs = solve_pressure_periodic(steady);
  REQUIRE(rs.converged);
  const FeFunction &v = rs.trajectory[8];
  for (double x : {-0.75, -0.25, 0.0, 0.5})
    CHECK(v(x) == Approx(steady_constant(2.5, 1.0, x)).epsilon(0.02));
}

TEST_CASE("pressure recovery is independent of the lifting") {
  const auto pr = flow_problem(2.0, 16, 8, [](double t) { return std::sin(2 * kPi * t); });
  const auto rep = picard_periodic(pr);
  REQUIRE(rep.converged);
  const ChiH bump = build_chi_h(pr.space, [](double x) {
    return std::abs(x) < 0.8 ? std::exp(-1.0 / (1.0 - x * x / 0.64)) : 0.0;
  });
  const TimeSeries g2 = reconstruct_gamma(pr.stress, bump.function, rep.trajectory);
  for (std::size_t m = 1; m <= 8; ++m)
    CHECK(std::abs(g2[m] - rep.gamma[m]) <= 1e-8 * (1.0 + std::abs(rep.gamma[m])));
  const SpaceTimeFunction zero(pr.grid, std::vector<FeFunction>(9, FeFunction(pr.space)), true);
  const TimeSeries g0 = reconstruct_gamma(pr, zero);
  for (double g : g0.values())
    CHECK(g == 0.0);
}

TEST_CASE("quadratic diagnostics equal the dirichlet energy") {
  const auto pr = flow_problem(2.0, 10, 6, [](double t) { return std::cos(2 * kPi * t); });
  const auto rep = picard_periodic(pr);
  REQUIRE(rep.converged);
  const auto K = assemble_stiffness(*pr.space);
  double weak = 0.0, sup = 0.0;
  for (std::size_t m = 1; m <= 6; ++m) {
    const auto &c = rep.trajectory[m].coefficients();
    const double e = dot(c, K.multiply(c));
    weak += pr.grid.tau() * e;
    sup = std::max(sup, e);
  }
  CHECK(rep.diagnostics.weak_modular == Approx(weak).epsilon(1e-10));
  CHECK(rep.diagnostics.sup_modular == Approx(sup).epsilon(1e-10));
}

TEST_CASE("discrete energy identity for the linear problem") {
  // sum_m tau [(d_tau v, v) + |v'|^2] = -sum_m tau Gamma_m (v_m, 1); periodicity
  // removes the boundary term of the telescoping sum.
  const auto pr = flow_problem(2.0, 12, 10, [](double t) { return 0.5 * std::sin(2 * kPi * t); });
  const auto rep = picard_periodic(pr);
  REQUIRE(rep.converged);
  const auto M = assemble_mass(*pr.space);
  const auto K = assemble_stiffness(*pr.space);
  const auto b = assemble_flux_vector(*pr.space);
  const double tau = pr.grid.tau();
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t m = 1; m <= 10; ++m) {
    const auto &v = rep.trajectory[m].coefficients();
    const auto &w = rep.trajectory[m - 1].coefficients();
    std::vector<double> d(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      d[i] = (v[i] - w[i]) / tau;
    lhs += tau * (dot(d, M.multiply(v)) + dot(v, K.multiply(v)));
    rhs -= tau * rep.gamma[m] * dot(b, v);
  }
  CHECK(lhs == Approx(rhs).epsilon(1e-8));
}

TEST_CASE("configuration validation") {
  PicardConfig c;
  c.tol_stop = 0.0;
  CHECK_THROWS(c.validate());
  c = PicardConfig{};
  c.max_iters = 0;
  CHECK_THROWS(c.validate());
  c = PicardConfig{};
  c.inner_tol_abs = -1.0;
  CHECK_THROWS(c.validate());
  CHECK_NOTHROW(PicardConfig{}.validate());
}
