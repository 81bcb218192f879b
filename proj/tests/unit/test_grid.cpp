#include "smartflow/error.hpp"
#include "smartflow/grid.hpp"
#include "smartflow/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace smartflow;
using doctest::Approx;

namespace {
std::vector<double> verts(const Mesh1D &m) {
  return {m.vertices().begin(), m.vertices().end()};
}
} // namespace

TEST_CASE("uniform meshes") {
  CHECK(verts(uniform_mesh({-1.0, 1.0}, 2)) == std::vector<double>{-1.0, 0.0, 1.0});
  const std::vector<double> bp{0.5};
  CHECK(verts(uniform_mesh({-1.0, 1.0}, 2, bp)) ==
        std::vector<double>{-1.0, 0.0, 0.5, 1.0});
  CHECK(verts(uniform_mesh({0.0, 1.0}, 4)) ==
        std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  const std::vector<double> outside{1.5};
  CHECK_THROWS_AS(uniform_mesh({-1.0, 1.0}, 2, outside), std::invalid_argument);
  const Mesh1D m = uniform_mesh({-1.0, 1.0}, 4, bp);
  CHECK(m.has_vertex(0.5));
  CHECK(m.h_max() == Approx(0.5));
  CHECK(m.locate(0.0) == 1);
}

TEST_CASE("dof counts") {
  const auto p1 = FeSpace::make(uniform_mesh({0.0, 1.0}, 5), 1);
  const auto p2 = FeSpace::make(uniform_mesh({0.0, 1.0}, 5), 2);
  CHECK(p1->num_dofs() == 4);
  CHECK(p2->num_dofs() == 9);
}

TEST_CASE("mass matrix") {
  const auto s = FeSpace::make(uniform_mesh({0.0, 1.0}, 2), 1);
  const SymBandMatrix m = assemble_mass(*s);
  REQUIRE(m.size() == 1);
  CHECK(m(0, 0) == Approx(1.0 / 3.0));
  const auto s4 = FeSpace::make(uniform_mesh({0.0, 1.0}, 6), 1);
  const SymBandMatrix m4 = assemble_mass(*s4);
  CHECK(m4(0, 3) == 0.0);
  // Row sums on interior rows equal the hat integral h.
  double row = 0.0;
  for (std::size_t j = 0; j < m4.size(); ++j)
    row += m4(2, j);
  CHECK(row == Approx(1.0 / 6.0));
  // Mass of P2 against the integral of a product of interpolated functions.
  const auto q = FeSpace::make(uniform_mesh({-1.0, 1.0}, 3), 2);
  const FeFunction f = project_pi_h(q, [](double x) { return 1.0 - x * x; });
  CHECK(l2_inner(assemble_mass(*q), f, f) == Approx(16.0 / 15.0).epsilon(1e-13));
}

TEST_CASE("flux vector") {
  const auto s = FeSpace::make(uniform_mesh({0.0, 1.0}, 4), 1);
  for (double b : assemble_flux_vector(*s))
    CHECK(b == Approx(0.25));
  const auto nu = FeSpace::make(Mesh1D({0.0, 0.1, 0.4, 1.0}), 1);
  const auto b = assemble_flux_vector(*nu);
  CHECK(b[0] == Approx(0.2));
  CHECK(b[1] == Approx(0.45));
  CHECK_THROWS(Mesh1D({0.0, 0.5, 0.5, 1.0}));
}

TEST_CASE("frozen coefficient form") {
  const auto s = FeSpace::make(uniform_mesh({0.0, 1.0}, 8), 1);
  const SymBandMatrix k = assemble_stiffness(*s);
  const double h = 1.0 / 8.0;
  CHECK(k(3, 3) == Approx(2.0 / h));
  CHECK(k(3, 4) == Approx(-1.0 / h));

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  FeFunction w(s);
  for (double &c : w.coefficients())
    c = u(rng);
  const SymBandMatrix lin =
      assemble_nonlinear_form(*s, StressModel(ExponentField::constant(2.0), 0.0), w);
  for (std::size_t i = 0; i < k.size(); ++i)
    for (std::size_t j = 0; j < k.size(); ++j)
      CHECK(lin(i, j) == Approx(k(i, j)).epsilon(1e-14));

  const StressModel sing(ExponentField::constant(1.5), 0.0);
  const SymBandMatrix clamp = assemble_nonlinear_form(*s, sing, FeFunction(s));
  const double c = std::pow(sing.regularization_eps(), -0.5);
  CHECK(clamp(2, 2) == Approx(c * k(2, 2)).epsilon(1e-12));

  // w' = 2 on the element [3h, 4h] (and -2 on [4h, 5h]); p = 4 gives nu = 4.
  FeFunction ramp(s);
  ramp.coefficients()[3] = 2.0 * h;
  const StressModel p4(ExponentField::constant(4.0), 0.0);
  const SymBandMatrix a4 = assemble_nonlinear_form(*s, p4, ramp);
  CHECK(a4(2, 3) == Approx(-4.0 / h));
  CHECK(a4(3, 3) == Approx(8.0 / h));

  // Symmetric and positive definite for random states.
  const StressModel aff(ExponentField::affine(2.0, 1.0, {0.0, 1.0}), 0.0);
  const SymBandMatrix a = assemble_nonlinear_form(*s, aff, w);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      CHECK(std::abs(a(i, j) - a(j, i)) <= 1e-14);
  CHECK_NOTHROW(BandCholesky{a});
}

TEST_CASE("stress residual") {
  const auto s = FeSpace::make(uniform_mesh({-1.0, 1.0}, 10), 1);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  FeFunction v(s);
  for (double &c : v.coefficients())
    c = u(rng);
  const auto kv = assemble_stiffness(*s).multiply(v.coefficients());
  const auto r2 = residual_stress(*s, StressModel(ExponentField::constant(2.0), 0.0), v);
  for (std::size_t i = 0; i < kv.size(); ++i)
    CHECK(std::abs(r2[i] - kv[i]) <= 1e-12);
  for (double r : residual_stress(*s, StressModel(ExponentField::constant(3.0), 0.0), FeFunction(s)))
    CHECK(r == 0.0);
  // p = 4: residual equals the frozen form applied to the state itself.
  const StressModel p4(ExponentField::constant(4.0), 0.0);
  const auto r4 = residual_stress(*s, p4, v);
  const auto av = assemble_nonlinear_form(*s, p4, v).multiply(v.coefficients());
  for (std::size_t i = 0; i < av.size(); ++i)
    CHECK(r4[i] == Approx(av[i]).epsilon(1e-12));
}

TEST_CASE("nodal projection") {
  const auto s = FeSpace::make(uniform_mesh({-1.0, 1.0}, 8), 1);
  FeFunction f(s);
  f.coefficients() = {0.1, -0.4, 0.3, 0.0, 0.2, 0.9, -0.5};
  const FeFunction g = project_pi_h(s, [&](double x) { return f(x); });
  CHECK(g.coefficients() == f.coefficients());
  const FeFunction hat = project_pi_h(s, default_chi({-1.0, 1.0}));
  for (double x : {-0.9, -0.33, 0.0, 0.61})
    CHECK(hat(x) == Approx(1.0 - std::abs(x)));

  // L1 interpolation error of 1 - x^2 decays at second order.
  double prev = 0.0;
  for (int level = 1; level <= 6; ++level) {
    const auto sp = FeSpace::make(uniform_mesh({-1.0, 1.0}, std::size_t{2} << level), 1);
    const auto chi = [](double x) { return 1.0 - x * x; };
    const FeFunction pi = project_pi_h(sp, chi);
    const double err = integrate_adaptive(
        [&](double x) { return std::abs(pi(x) - chi(x)); }, -1.0, 1.0, 1e-12);
    if (level > 1)
      CHECK(std::log2(prev / err) == Approx(2.0).epsilon(0.02));
    prev = err;
  }
}

TEST_CASE("normalized lifting") {
  const Interval dom{-1.0, 1.0};
  CHECK(integrate_adaptive(default_chi(dom), -1.0, 1.0) == Approx(1.0));
  const auto s = FeSpace::make(uniform_mesh(dom, 6), 1);
  const ChiH c = build_chi_h(s, default_chi(dom));
  CHECK(c.normalization == Approx(1.0).epsilon(1e-14));
  CHECK(dot(assemble_flux_vector(*s), c.function.coefficients()) ==
        Approx(1.0).epsilon(1e-14));
  const auto bump = [](double x) { return std::max(0.0, 1.0 - std::abs(x - 0.35) / 0.2); };
  const auto coarse = FeSpace::make(uniform_mesh(dom, 4), 1);
  const ChiH b = build_chi_h(coarse, bump);
  CHECK(std::abs(dot(assemble_flux_vector(*coarse), b.function.coefficients()) - 1.0) <= 1e-12);
  const auto narrow = [](double x) { return std::max(0.0, 1.0 - std::abs(x - 0.25) / 0.1); };
  CHECK_THROWS_AS((void)build_chi_h(coarse, narrow), NormalizationError);
}

TEST_CASE("lifting stability and approximation across levels") {
  const Interval dom{-1.0, 1.0};
  const auto chi = [](double x) { return 0.75 * (1.0 - x * x); };
  const ExponentField p = ExponentField::constant(2.5);
  const Mesh1D fine = uniform_mesh(dom, 64);
  const double grad = luxembourg_norm([](double x) { return -1.5 * x; }, p, fine,
                                      QuadratureRule::for_exponent(p));
  std::vector<double> ratio, rho;
  for (int level = 1; level <= 6; ++level) {
    const auto sp = FeSpace::make(uniform_mesh(dom, std::size_t{2} << level), 1);
    const ChiH c = build_chi_h(sp, chi);
    ratio.push_back(l2_norm(assemble_mass(*sp), c.function) / grad);
    rho.push_back(modular(
        [&](std::size_t e, double x) { return chi(x) - c.function.value(e, x); }, p,
        sp->mesh(), QuadratureRule::for_exponent(p)));
  }
  for (std::size_t i = 1; i < ratio.size(); ++i) {
    CHECK(ratio[i] == Approx(ratio[0]).epsilon(0.1));
    CHECK(rho[i] <= 1.05 * rho[i - 1]);
  }
  CHECK(rho.back() < 1e-3 * rho.front());
}
