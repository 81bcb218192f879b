#include "smartflow/stress.hpp"

#include <doctest.h>

#include <cmath>

using namespace smartflow;
using doctest::Approx;

namespace {
StressModel power(double p, double delta = 0.0) {
  return StressModel(ExponentField::constant(p), delta);
}
} // namespace

TEST_CASE("stress evaluation") {
  CHECK(eval_stress(power(2.0), 0.1, 3.5) == Approx(3.5));
  CHECK(eval_stress(power(2.5), 0.1, 4.0) == Approx(8.0));
  CHECK(eval_stress(power(1.5), 0.1, 0.0) == 0.0);
  CHECK(eval_stress(power(2.5), 0.1, -4.0) == Approx(-8.0));
  CHECK(eval_stress(power(3.0, 1.0), 0.0, 2.0) == Approx(6.0));
}

TEST_CASE("viscosity") {
  for (double t : {0.0, 0.3, 17.0})
    CHECK(eval_viscosity(power(2.0), 0.0, t) == Approx(1.0));
  CHECK(eval_viscosity(power(3.0), 0.0, 4.0) == Approx(2.0));
  const StressModel m = power(1.5);
  CHECK(eval_viscosity(m, 0.0, 0.0) ==
        Approx(std::pow(m.regularization_eps(), -0.5)));
  CHECK(eval_viscosity(m, 0.0, 1e-30) ==
        Approx(std::pow(m.regularization_eps(), -0.5)));
  for (double a : {-2.0, 0.4, 3.0})
    CHECK(eval_stress(m, 0.0, a) == Approx(eval_viscosity(m, 0.0, a * a) * a));
}

TEST_CASE("potentials") {
  CHECK(eval_potential_V(power(2.0), 0.0, 5.0) == Approx(5.0));
  CHECK(eval_potential_V(power(2.7), 0.0, 0.0) == 0.0);
  CHECK(eval_potential_V(power(4.0), 0.0, 9.0) == Approx(40.5));
  CHECK(eval_potential_U(power(2.0), 0.0, 2.0) == Approx(4.0));
  CHECK(eval_potential_U(power(3.0), 0.0, 0.0) == 0.0);
  CHECK(eval_potential_U(power(3.0), 0.0, 2.0) == Approx(16.0 / 3.0));
  // Shifted potential against quadrature of the viscosity.
  const StressModel m = power(1.7, 0.4);
  for (double t : {0.01, 0.1, 2.0, 30.0}) {
    double s = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i)
      s += eval_viscosity(m, 0.0, (i + 0.5) * t / n) * t / n;
    CHECK(eval_potential_V(m, 0.0, t) == Approx(s).epsilon(1e-7));
  }
}

TEST_CASE("natural f and shifted conjugate") {
  CHECK(power(2.0).natural_f(0.0, -7.0) == Approx(-7.0));
  CHECK(power(4.0).natural_f(0.0, 3.0) == Approx(9.0));
  CHECK(power(3.3).natural_f(0.0, 0.0) == 0.0);
  const StressModel m = power(2.6);
  const double f = m.natural_f(0.0, -1.7);
  CHECK(f * f == Approx(std::pow(1.7, 2.6)));

  CHECK(power(2.5).shifted_conjugate(0.0, 1.0, 0.0) == 0.0);
  CHECK(power(2.0).shifted_conjugate(0.0, 3.0, 0.3) == Approx(0.09));
  CHECK(power(3.0).shifted_conjugate(0.0, 1.0, 1.0) == Approx(std::pow(2.0, -0.5)));
  double last = 0.0;
  for (double t = 0.0; t < 5.0; t += 0.25) {
    const double v = power(1.6).shifted_conjugate(0.0, 0.7, t);
    CHECK(v >= last);
    last = v;
  }
}

TEST_CASE("monotonicity gap") {
  CHECK(power(2.0).monotonicity_gap(0.0, 1.3, 1.3) == 0.0);
  CHECK(power(2.0).monotonicity_gap(0.0, 1.0, 0.0) == Approx(1.0));
  CHECK(power(3.0).monotonicity_gap(0.0, 2.0, -1.0) == Approx(15.0));
}

TEST_CASE("structure constants") {
  const StressModel plain = power(2.5);
  CHECK(plain.kappa1() == 1.0);
  CHECK(plain.kappa3() == 1.0);
  CHECK(plain.kappa2(0.0) == 0.0);
  CHECK(plain.kappa4(0.0) == 0.0);
  const StressModel shifted = power(1.5, 0.5);
  CHECK(shifted.kappa2(0.0) > 0.0);
  CHECK(shifted.kappa4(0.0) == 0.0);
  const StressModel thick = power(3.0, 0.5);
  CHECK(thick.kappa2(0.0) == 0.0);
  CHECK(thick.kappa4(0.0) > 0.0);
  CHECK(thick.young_constant(0.1) >= thick.young_constant(3.0, 0.1));
  CHECK(thick.young_constant(3.0, 0.1) > thick.young_constant(3.0, 0.5));
}
