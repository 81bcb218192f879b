#include "smartflow/bench.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace smartflow;
using doctest::Approx;

namespace {
SpaceTimeFunction hat_trajectory(std::size_t M) {
  auto space = FeSpace::make(uniform_mesh({-1.0, 1.0}, 4), 1);
  FeFunction f(space, {0.5, 1.0, 0.5});
  return SpaceTimeFunction(TimeGrid(1.0, M), std::vector<FeFunction>(M + 1, f), true);
}

// Level-1 regression values of the reference implementation.
constexpr double kGoldenWomersley[] = {1.772423575604e-02, 4.680253062193e-01,
                                       3.564632062114e-01};
constexpr double kGoldenConstant[] = {1.608470126448e-02, 2.077720677857e-01,
                                      1.179617093999e-02};

double hat(double x) { return 1.0 - std::abs(x); }
double hat_dx(double x) { return x < 0.0 ? 1.0 : -1.0; }
} // namespace

TEST_CASE("space-time error norms") {
  const auto vh = hat_trajectory(4);
  CHECK(err_linf_l2(vh, [](double, double x) { return hat(x); }) <= 1e-14);
  CHECK(err_linf_l2(vh, [](double, double x) { return hat(x) + 0.3; }) ==
        Approx(0.3 * std::sqrt(2.0)));
  CHECK(err_grad_l2(vh, [](double, double x) { return hat_dx(x); }) <= 1e-14);
  CHECK(err_grad_l2(vh, [](double, double x) { return hat_dx(x) + 0.5; }) ==
        Approx(0.5 * std::sqrt(2.0)));
  const StressModel quad(ExponentField::constant(2.0), 0.0);
  const auto dv = [](double, double x) { return 0.3 * std::sin(3.0 * x); };
  CHECK(err_natural_f(vh, dv, quad) == Approx(err_grad_l2(vh, dv)).epsilon(1e-12));
}

TEST_CASE("pressure drop errors") {
  const TimeGrid g(2.0, 4);
  const TimeSeries gh(g, {1.5, 1.5, 1.5, 1.5}, false);
  CHECK(err_gamma_l2(gh, [](double) { return 1.0; }) == Approx(0.5 * std::sqrt(2.0)));
  CHECK(err_gamma_l2(gh, [](double) { return 1.5; }) == 0.0);
  // p = 2: the shifted conjugate is t^2, so the error is sum tau |Sigma| d^2.
  const StressModel quad(ExponentField::constant(2.0), 0.0);
  const Mesh1D mesh = uniform_mesh({-1.0, 1.0}, 8);
  const double e = err_gamma_shifted(gh, [](double) { return 1.0; },
                                     [](double, double x) { return x; }, quad, mesh);
  CHECK(e == Approx(2.0 * 2.0 * 0.25));
}

TEST_CASE("experimental order of convergence") {
  const auto r1 = eoc({1.0, 0.5, 0.25}, {0.1, 0.05, 0.025});
  REQUIRE(r1.size() == 2);
  CHECK(r1[0] == Approx(1.0));
  CHECK(r1[1] == Approx(1.0));
  const auto r2 = eoc({1.0, 0.25}, {0.2, 0.1});
  CHECK(r2[0] == Approx(2.0));
  CHECK_THROWS((void)eoc({1.0}, {0.1, 0.2}));
}

TEST_CASE("level construction") {
  const StudyConfig w = womersley_study(5.0, 3);
  const LevelSetup s = make_level(w, 3);
  CHECK(s.space->mesh().num_elements() == 16);
  CHECK(s.grid.steps() == 8);
  CHECK(s.space->mesh().h_max() == Approx(10.0 / 16.0));
  const StudyConfig e = steady_study(SteadySpec::even({0.5}, {1.5, 2.5}), 2);
  const LevelSetup se = make_level(e, 1);
  CHECK(se.space->mesh().has_vertex(0.5));
  CHECK(se.space->mesh().has_vertex(-0.5));
}

TEST_CASE("short convergence studies") {
  StudyConfig w = womersley_study(1.0, 3);
  const ErrorTable t = run_convergence_study(w);
  REQUIRE(t.records.size() == 3);
  CHECK(t.eoc.size() == 2);
  for (const auto &r : t.records)
    CHECK(r.converged);
  CHECK(t.records[0].err_linf_l2 == Approx(kGoldenWomersley[0]).epsilon(1e-6));
  CHECK(t.records[0].err_grad == Approx(kGoldenWomersley[1]).epsilon(1e-6));
  CHECK(t.records[0].err_gamma == Approx(kGoldenWomersley[2]).epsilon(1e-6));

  StudyConfig s = steady_study(SteadySpec::constant(2.5), 1);
  const ErrorRecord r = run_level(s, 1);
  CHECK(r.converged);
  CHECK(r.err_linf_l2 == Approx(kGoldenConstant[0]).epsilon(1e-6));
  CHECK(r.err_grad == Approx(kGoldenConstant[1]).epsilon(1e-6));
  CHECK(r.err_gamma == Approx(kGoldenConstant[2]).epsilon(1e-6));

  w.parallel = true;
  const ErrorTable tp = run_convergence_study(w);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(tp.records[i].err_linf_l2 == t.records[i].err_linf_l2);

  std::ostringstream csv, svg;
  t.write_csv(csv);
  t.write_svg(svg, "test");
  CHECK(csv.str().rfind("level,h,tau,err_linf_l2,err_grad,err_gamma,picard_iters\n", 0) == 0);
  CHECK(csv.str().find("eoc_3,") != std::string::npos);
  CHECK(svg.str().rfind("<svg", 0) == 0);
  CHECK(svg.str().find("</svg>") != std::string::npos);
  CHECK(std::isfinite(tail_median(t, 0, 2)));
}

TEST_CASE("time refinement alone converges at first order") {
  // Fine mesh, M = 4..32 steps: the time error dominates.
  StudyConfig w = womersley_study(1.0, 7);
  std::vector<double> errs, taus;
  for (std::size_t M : {8u, 16u, 32u}) {
    auto space = FeSpace::make(uniform_mesh(w.exact.domain, 256), 1);
    const TimeGrid grid(w.exact.period, M);
    const FlowRateProblem pr{StressModel(ExponentField::constant(2.0), 0.0), space, grid,
                             discretize_alpha(w.exact.alpha, grid, AlphaDiscretization::Nodal),
                             build_chi_h(space, default_chi(w.exact.domain))};
    const auto rep = picard_periodic(pr, w.picard);
    REQUIRE(rep.converged);
    errs.push_back(err_linf_l2(rep.trajectory, w.exact.v));
    taus.push_back(grid.tau());
  }
  for (double r : eoc(errs, taus))
    CHECK(r == Approx(1.0).epsilon(0.15));
}
