#include "smartflow/timegrid.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace smartflow;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;

FeSpacePtr small_space() { return FeSpace::make(uniform_mesh({-1.0, 1.0}, 6), 1); }

FeFunction random_fn(const FeSpacePtr &s, std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  FeFunction f(s);
  for (double &c : f.coefficients())
    c = u(rng);
  return f;
}
} // namespace

TEST_CASE("time grid") {
  const TimeGrid g(2.0 * kPi, 8);
  CHECK(g.tau() * 8 == Approx(2.0 * kPi));
  CHECK(g.node(8) == Approx(2.0 * kPi));
  CHECK_THROWS(TimeGrid(1.0, 0));
  CHECK_THROWS(TimeGrid(-1.0, 3));
}

TEST_CASE("backward difference") {
  const auto s = small_space();
  std::mt19937_64 rng(5);
  const FeFunction g = random_fn(s, rng);
  const TimeGrid grid(1.0, 4);
  const SpaceTimeFunction constant(grid, std::vector<FeFunction>(5, g), true);
  const SpaceTimeFunction dc = d_tau(constant);
  for (std::size_t m = 1; m <= 4; ++m)
    for (double c : dc[m].coefficients())
      CHECK(c == 0.0);
  std::vector<FeFunction> ramp;
  for (std::size_t m = 0; m <= 4; ++m)
    ramp.push_back((static_cast<double>(m) * grid.tau()) * g);
  const SpaceTimeFunction dr = d_tau(SpaceTimeFunction(grid, ramp, true));
  for (std::size_t m = 1; m <= 4; ++m)
    for (std::size_t i = 0; i < g.coefficients().size(); ++i)
      CHECK(dr[m].coefficients()[i] == Approx(g.coefficients()[i]));
  const TimeGrid unit(4.0, 4);
  std::vector<FeFunction> alt;
  for (std::size_t m = 0; m <= 4; ++m)
    alt.push_back((m % 2 == 0 ? 1.0 : -1.0) * g);
  const SpaceTimeFunction da = d_tau(SpaceTimeFunction(unit, alt, true));
  for (std::size_t m = 1; m <= 4; ++m)
    for (std::size_t i = 0; i < g.coefficients().size(); ++i)
      CHECK(da[m].coefficients()[i] ==
            Approx((m % 2 == 1 ? -2.0 : 2.0) * g.coefficients()[i]));
  CHECK_THROWS((void)d_tau(SpaceTimeFunction(grid, std::vector<FeFunction>(4, g), false)));
}

TEST_CASE("nodal interpolant and slab averages") {
  const TimeGrid g(2.0 * kPi, 4);
  const TimeSeries c = interp_I0([](double t) { return std::cos(t); }, g);
  const double expect[] = {1.0, 0.0, -1.0, 0.0, 1.0};
  for (std::size_t m = 0; m <= 4; ++m)
    CHECK(c[m] == Approx(expect[m]).scale(1.0));
  const TimeSeries k = interp_I0([](double) { return 0.3; }, g);
  for (std::size_t m = 0; m <= 4; ++m)
    CHECK(k[m] == 0.3);

  CHECK(project_Pi0([](double) { return 2.5; }, TimeGrid(3.0, 3))[2] == Approx(2.5));
  CHECK(project_Pi0([](double t) { return t; }, TimeGrid(1.0, 1))[1] == Approx(0.5));
  const TimeSeries half = project_Pi0([](double t) { return std::cos(t); }, TimeGrid(2.0 * kPi, 2));
  CHECK(std::abs(half[1]) <= 1e-14);
  CHECK(std::abs(half[2]) <= 1e-14);
}

TEST_CASE("interpolation error constant is stable") {
  // |alpha - I alpha|_{L2(I)} <= c tau |alpha'|_{L2(I)} with c independent of M.
  std::vector<double> cs;
  for (std::size_t M = 8; M <= 256; M *= 2) {
    const TimeGrid g(2.0 * kPi, M);
    const TimeSeries a = interp_I0([](double t) { return std::cos(t); }, g);
    double err = 0.0;
    for (std::size_t m = 1; m <= M; ++m) {
      for (int q = 0; q < 64; ++q) {
        const double t = g.node(m - 1) + (q + 0.5) * g.tau() / 64.0;
        err += std::pow(std::cos(t) - a[m], 2) * g.tau() / 64.0;
      }
    }
    cs.push_back(std::sqrt(err) / (g.tau() * std::sqrt(kPi)));
  }
  for (double c : cs)
    CHECK(c == Approx(cs.back()).epsilon(0.05));
}

TEST_CASE("discrete integration by parts") {
  const auto s = small_space();
  const SymBandMatrix mass = assemble_mass(*s);
  const InnerProduct inner = [&](const FeFunction &a, const FeFunction &b) {
    return l2_inner(mass, a, b);
  };
  std::mt19937_64 rng(11);
  for (std::size_t M : {1u, 7u}) {
    const TimeGrid g(1.3, M);
    std::vector<FeFunction> fv, gv;
    for (std::size_t m = 0; m <= M; ++m) {
      fv.push_back(random_fn(s, rng));
      gv.push_back(random_fn(s, rng));
    }
    const SpaceTimeFunction f(g, fv, true), h(g, gv, true);
    CHECK(check_discrete_ibp(f, h, inner) <= 1e-12);
    CHECK(check_discrete_ibp(f, f, inner) <= 1e-12);
    CHECK(check_discrete_ibp_reduced(f, inner) <= 1e-12);
  }
  // Periodic shift invariance of slab sums.
  const TimeGrid g(1.0, 5);
  std::vector<FeFunction> fv;
  for (std::size_t m = 0; m < 5; ++m)
    fv.push_back(random_fn(s, rng));
  fv.push_back(fv.front());
  std::vector<FeFunction> shifted(fv.begin() + 1, fv.end());
  shifted.push_back(shifted.front());
  double a = 0.0, b = 0.0;
  for (std::size_t m = 1; m <= 5; ++m) {
    a += inner(fv[m], fv[m]);
    b += inner(shifted[m], shifted[m]);
  }
  CHECK(a == Approx(b));
}

TEST_CASE("csv export") {
  const TimeGrid g(1.0, 2);
  std::ostringstream os;
  TimeSeries(g, {0.5, -1.0}, false).write_csv(os);
  CHECK(os.str().rfind("m,t_m,value\n", 0) == 0);
  CHECK(os.str().find("\n1,") != std::string::npos);
  const auto s = FeSpace::make(uniform_mesh({-1.0, 1.0}, 2), 1);
  std::ostringstream os2;
  SpaceTimeFunction(g, std::vector<FeFunction>(3, FeFunction(s, {1.0})), true).write_csv(os2);
  std::istringstream in(os2.str());
  std::string line;
  int lines = 0;
  while (std::getline(in, line))
    ++lines;
  CHECK(lines == 1 + 3 * 3);
}
