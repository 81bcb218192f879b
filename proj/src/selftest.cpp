#include "smartflow/selftest.hpp"

#include "smartflow/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

namespace smartflow {

namespace {

using Rng = std::mt19937_64;

double uniform(Rng &rng, double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(rng);
}

std::size_t pick(Rng &rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

const Interval kDomain{-1.0, 1.0};

// Models covering constant, piecewise and affine exponents, degenerate and
// non-degenerate.
const std::vector<StressModel> &sample_models() {
  static const std::vector<StressModel> models = [] {
    std::vector<StressModel> m;
    m.emplace_back(ExponentField::constant(1.5), 0.0);
    m.emplace_back(ExponentField::constant(2.0), 0.0);
    m.emplace_back(ExponentField::constant(2.5), 0.0);
    m.emplace_back(ExponentField::constant(3.0), 0.0);
    m.emplace_back(ExponentField::constant(1.3), 0.5);
    m.emplace_back(ExponentField::constant(2.8), 0.7);
    m.emplace_back(ExponentField::piecewise({-0.5, 0.5}, {1.5, 2.5, 1.5}), 0.0);
    m.emplace_back(ExponentField::piecewise({0.2}, {1.8, 3.2}), 0.3);
    m.emplace_back(ExponentField::affine(2.0, 0.6, kDomain), 0.0);
    m.emplace_back(ExponentField::affine(1.9, -0.5, kDomain), 1.0);
    return m;
  }();
  return models;
}

// Argument with magnitude spread over several decades and random sign.
double sample_argument(Rng &rng) {
  const double mag = std::pow(10.0, uniform(rng, -3.0, 1.0));
  return uniform(rng, 0.0, 1.0) < 0.5 ? -mag : mag;
}

class Tally {
public:
  explicit Tally(std::string name) { r_.name = std::move(name); }
  // `violation` > 0 marks a failed sample.
  void record(double violation, const std::string &what = {}) {
    ++r_.samples;
    if (!(violation <= 0.0)) {
      ++r_.failures;
      if (r_.detail.empty())
        r_.detail = what;
    }
    if (std::isnan(violation))
      r_.worst = violation;
    else if (!std::isnan(r_.worst))
      r_.worst = std::max(r_.worst, violation);
  }
  [[nodiscard]] std::size_t samples() const { return r_.samples; }
  SuiteResult finish() {
    r_.passed = r_.samples > 0 && r_.failures == 0;
    return r_;
  }

private:
  SuiteResult r_;
};

std::string describe(const char *fmt, double a, double b = 0.0,
                     double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, fmt, a, b, c);
  return buf;
}

// s''(x, a) of the unregularized stress.
double stress_second_derivative(const StressModel &m, double x, double a) {
  const double q = m.exponent()(x);
  const double d = m.delta();
  const double u = std::abs(a);
  const double w = d + u;
  const double v = std::pow(w, q - 4.0) *
                   ((q - 3.0) * (d + (q - 1.0) * u) + (q - 1.0) * w);
  return std::copysign(v, a);
}

FeSpacePtr random_space(Rng &rng) {
  const std::size_t n = 4 + pick(rng, 29);
  const int degree = 1 + static_cast<int>(pick(rng, 2));
  return FeSpace::make(uniform_mesh(kDomain, n), degree);
}

FeFunction random_function(Rng &rng, const FeSpacePtr &space) {
  std::vector<double> c(space->num_dofs());
  for (double &v : c)
    v = uniform(rng, -1.0, 1.0);
  return FeFunction(space, std::move(c));
}

} // namespace

SuiteResult suite_monotonicity(const SelftestOptions &opts) {
  Rng rng(opts.seed);
  Tally tally("stress monotonicity");
  const auto &models = sample_models();
  for (std::size_t i = 0; i < opts.samples; ++i) {
    const StressModel &m = models[pick(rng, models.size())];
    const double x = uniform(rng, -1.0, 1.0);
    const double a = sample_argument(rng);
    double b = sample_argument(rng);
    if (b == a)
      b = -a;
    const double sign = opts.inject_sign_flip ? -1.0 : 1.0;
    const double gap =
        (sign * m.stress(x, a) - sign * m.stress(x, b)) * (a - b);
    tally.record(gap > 0.0 ? 0.0 : -gap + 1e-300,
                 describe("gap<=0 at a=%.3g b=%.3g x=%.3g", a, b, x));
  }
  return tally.finish();
}

SuiteResult suite_potential_gradient(const SelftestOptions &opts) {
  Rng rng(opts.seed + 1);
  Tally tally("potential gradient dU/da = 2s");
  const auto &models = sample_models();
  constexpr double kMachine = 2.220446049250313e-16;
  for (std::size_t i = 0; i < opts.samples; ++i) {
    const StressModel &m = models[pick(rng, models.size())];
    const double x = uniform(rng, -1.0, 1.0);
    double a = sample_argument(rng);
    if (std::abs(a) <= 10.0 * m.regularization_eps())
      a = std::copysign(1.0, a);
    const double curvature = std::abs(stress_second_derivative(m, x, a));
    const double scale = std::abs(m.potential_u(x, a)) + 1.0;
    double violation = 0.0;
    for (double h : {1e-4, 1e-5}) {
      const double hh = std::min(h, 0.25 * std::abs(a));
      const double fd =
          (m.potential_u(x, a + hh) - m.potential_u(x, a - hh)) / (2.0 * hh);
      const double err = std::abs(fd - 2.0 * m.stress(x, a));
      // Taylor remainder 2|s''| h^2/6 doubled, plus cancellation error.
      const double bound =
          2.0 * (curvature + 1.0) * hh * hh + 64.0 * kMachine * scale / hh;
      violation = std::max(violation, err - bound);
    }
    tally.record(violation, describe("a=%.3g x=%.3g excess=%.3g", a, x,
                                     violation));
  }
  return tally.finish();
}

SuiteResult suite_convexity(const SelftestOptions &opts) {
  Rng rng(opts.seed + 2);
  Tally tally("potential midpoint convexity");
  const auto &models = sample_models();
  for (std::size_t i = 0; i < opts.samples; ++i) {
    const StressModel &m = models[pick(rng, models.size())];
    const double x = uniform(rng, -1.0, 1.0);
    const double a = sample_argument(rng);
    const double b = sample_argument(rng);
    const double lhs = m.potential_u(x, 0.5 * (a + b));
    const double rhs = 0.5 * m.potential_u(x, a) + 0.5 * m.potential_u(x, b);
    tally.record(lhs - rhs - 1e-12 * (1.0 + std::abs(rhs)),
                 describe("a=%.3g b=%.3g x=%.3g", a, b, x));
  }
  return tally.finish();
}

SuiteResult suite_coercivity_growth(const SelftestOptions &opts) {
  Rng rng(opts.seed + 3);
  Tally tally("coercivity and growth");
  const auto &models = sample_models();
  for (std::size_t i = 0; i < opts.samples; ++i) {
    const StressModel &m = models[pick(rng, models.size())];
    const double x = uniform(rng, -1.0, 1.0);
    const double a = sample_argument(rng);
    const double q = m.exponent()(x);
    const double s = m.stress(x, a);
    const double pa = std::pow(std::abs(a), q);
    const double coer = m.kappa1() * pa - m.kappa2(x) - s * a;
    const double growth = std::abs(s) - (m.kappa3() *
                                             std::pow(std::abs(a), q - 1.0) +
                                         m.kappa4(x));
    const double slack = 1e-12 * (1.0 + pa);
    tally.record(std::max(coer, growth) - slack,
                 describe("a=%.3g x=%.3g p=%.3g", a, x, q));
  }
  return tally.finish();
}

SuiteResult suite_potential_bounds(const SelftestOptions &opts) {
  Rng rng(opts.seed + 4);
  Tally tally("potential V two-sided bounds");
  const auto &models = sample_models();
  for (std::size_t i = 0; i < opts.samples; ++i) {
    const StressModel &m = models[pick(rng, models.size())];
    const double x = uniform(rng, -1.0, 1.0);
    const double t = uniform(rng, 0.0, 100.0);
    const double q = m.exponent()(x);
    const double v = m.potential_v(x, t);
    const double tp = std::pow(t, 0.5 * q);
    const double upper =
        2.0 * (m.kappa3() * tp / q + m.kappa4(x) * std::sqrt(t));
    double violation = v - upper;
    if (m.kappa2(x) == 0.0)
      violation = std::max(violation, 2.0 * m.kappa1() / q * tp - v);
    tally.record(violation - 1e-12 * (1.0 + upper),
                 describe("t=%.3g x=%.3g p=%.3g", t, x, q));
  }
  return tally.finish();
}

SuiteResult suite_young(const SelftestOptions &opts) {
  Rng rng(opts.seed + 5);
  Tally tally("eps-Young for s(x,a) b");
  const auto &models = sample_models();
  for (std::size_t i = 0; i < opts.samples; ++i) {
    const StressModel &m = models[pick(rng, models.size())];
    const double x = uniform(rng, -1.0, 1.0);
    const double a = sample_argument(rng);
    const double b = sample_argument(rng);
    const double q = m.exponent()(x);
    const double qc = conjugate_value(q);
    double violation = -1.0;
    for (double eps : {0.1, 0.5}) {
      const double lhs = std::abs(m.stress(x, a) * b);
      const double rhs =
          m.young_constant(q, eps) *
              (std::pow(std::abs(a), q) + std::pow(m.kappa4(x), qc)) +
          eps * std::pow(std::abs(b), q);
      violation = std::max(violation, lhs - rhs * (1.0 + 1e-12));
    }
    tally.record(violation, describe("a=%.3g b=%.3g p=%.3g", a, b, q));
  }
  return tally.finish();
}

SuiteResult suite_luxembourg(const SelftestOptions &opts) {
  Rng rng(opts.seed + 6);
  Tally tally("Luxembourg unit ball");
  const auto &models = sample_models();
  for (std::size_t i = 0; i < opts.samples; ++i) {
    const StressModel &m = models[pick(rng, models.size())];
    const ExponentField &p = m.exponent();
    const Mesh1D mesh = uniform_mesh(kDomain, 16, p.breakpoints());
    const QuadratureRule quad = QuadratureRule::for_exponent(p);
    const double c0 = uniform(rng, -3.0, 3.0);
    const double c1 = uniform(rng, -3.0, 3.0);
    const double c2 = uniform(rng, -3.0, 3.0);
    auto f = [=](double x) { return c0 + x * (c1 + x * c2); };
    const double norm = luxembourg_norm(f, p, mesh, quad);
    if (norm == 0.0) {
      tally.record(0.0);
      continue;
    }
    const double rho =
        modular([&](double x) { return f(x) / norm; }, p, mesh, quad);
    tally.record(std::abs(rho - 1.0) - 1e-6,
                 describe("c=(%.3g, %.3g, %.3g)", c0, c1, c2));
  }
  return tally.finish();
}

SuiteResult suite_discrete_ibp(const SelftestOptions &opts) {
  Rng rng(opts.seed + 7);
  Tally tally("discrete integration by parts");
  for (std::size_t i = 0; i < opts.samples; ++i) {
    const FeSpacePtr space = random_space(rng);
    const std::size_t steps = 1 + pick(rng, 16);
    const TimeGrid grid(uniform(rng, 0.5, 7.0), steps);
    std::vector<FeFunction> fv, gv;
    for (std::size_t m = 0; m <= steps; ++m) {
      fv.push_back(random_function(rng, space));
      gv.push_back(random_function(rng, space));
    }
    const SpaceTimeFunction f(grid, fv, true), g(grid, gv, true);
    const SymBandMatrix mass = assemble_mass(*space);
    const InnerProduct inner = [&](const FeFunction &u, const FeFunction &w) {
      return l2_inner(mass, u, w);
    };
    const double r = std::max(check_discrete_ibp(f, g, inner),
                              check_discrete_ibp_reduced(f, inner));
    tally.record(r - 1e-12, describe("M=%.0f residual=%.3g",
                                     static_cast<double>(steps), r));
  }
  return tally.finish();
}

SuiteResult suite_chi_normalization(const SelftestOptions &opts) {
  Rng rng(opts.seed + 8);
  Tally tally("chi_h normalization");
  for (std::size_t i = 0; i < opts.samples; ++i) {
    const double c = uniform(rng, -0.5, 0.5);
    const double w = uniform(rng, 0.2, 0.5);
    const bool smooth = pick(rng, 2) == 1;
    auto chi = [=](double x) {
      const double z = (x - c) / w;
      if (std::abs(z) >= 1.0)
        return 0.0;
      return smooth ? std::exp(-1.0 / (1.0 - z * z)) : 1.0 - std::abs(z);
    };
    const int degree = 1 + static_cast<int>(pick(rng, 2));
    double worst = 0.0;
    for (int level = 1; level <= 6; ++level) {
      const FeSpacePtr space = FeSpace::make(
          uniform_mesh(kDomain, std::size_t{1} << (level + 2)), degree);
      try {
        const ChiH lifted = build_chi_h(space, chi);
        const auto b = assemble_flux_vector(*space);
        worst = std::max(worst,
                         std::abs(dot(lifted.function.coefficients(), b) - 1.0));
      } catch (const NormalizationError &) {
        // Too coarse to resolve the bump; rejection is the specified outcome.
      }
    }
    tally.record(worst - 1e-12, describe("c=%.3g w=%.3g defect=%.3g", c, w,
                                         worst));
  }
  return tally.finish();
}

SuiteResult suite_flux_defect(const SelftestOptions &opts) {
  Rng rng(opts.seed + 9);
  Tally tally("flux constraint per slab");
  const auto &models = sample_models();
  PicardConfig config;
  config.tol_stop = 1e-10;
  while (tally.samples() < opts.samples) {
    const StressModel &m = models[pick(rng, models.size())];
    const std::size_t n = 6 + pick(rng, 11);
    const FeSpacePtr space = FeSpace::make(
        uniform_mesh(kDomain, n, m.exponent().breakpoints()), 1);
    const TimeGrid grid(1.0, 4 + pick(rng, 13));
    const double a0 = uniform(rng, -2.0, 2.0);
    const double a1 = uniform(rng, -2.0, 2.0);
    auto alpha = [=](double t) {
      return a0 + a1 * std::cos(2.0 * std::numbers::pi * t);
    };
    FlowRateProblem problem{m, space, grid,
                            discretize_alpha(alpha, grid,
                                             AlphaDiscretization::Nodal),
                            build_chi_h(space, default_chi(kDomain))};
    const PeriodicSolveReport report = picard_periodic(problem, config);
    for (std::size_t k = 0; k < report.flux_defects.size(); ++k) {
      const double target = std::abs(problem.alpha[k + 1]);
      tally.record(report.flux_defects[k] - 1e-10 * (1.0 + target),
                   describe("defect=%.3g alpha=%.3g", report.flux_defects[k],
                            target));
    }
    if (!report.converged)
      tally.record(1.0, "periodic solve did not converge: " + report.failure);
  }
  return tally.finish();
}

DenseLinearSolution dense_periodic_linear(const FlowRateProblem &problem) {
  const FeSpace &space = *problem.space;
  const std::size_t n = space.num_dofs();
  const std::size_t steps = problem.grid.steps();
  const double tau = problem.grid.tau();
  const SymBandMatrix mass = assemble_mass(space);
  const SymBandMatrix stiff = assemble_stiffness(space);
  const std::vector<double> b = assemble_flux_vector(space);
  const std::size_t block = n + 1;
  const std::size_t size = steps * block;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(size, size);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(size);
  // Unknowns per slab m: v_m (n entries) then Gamma_m. Slab 0 is slab M.
  for (std::size_t m = 1; m <= steps; ++m) {
    const std::size_t row = (m - 1) * block;
    const std::size_t prev = ((m + steps - 2) % steps) * block;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        a(row + i, row + j) += mass(i, j) / tau + stiff(i, j);
        a(row + i, prev + j) -= mass(i, j) / tau;
      }
      a(row + i, row + n) = b[i];
      a(row + n, row + i) = b[i];
    }
    rhs(row + n) = problem.alpha[m];
  }
  const Eigen::VectorXd sol = a.fullPivLu().solve(rhs);
  DenseLinearSolution out;
  for (std::size_t m = 1; m <= steps; ++m) {
    const std::size_t row = (m - 1) * block;
    out.states.emplace_back(sol.data() + row, sol.data() + row + n);
    out.gamma.push_back(sol(row + n));
  }
  return out;
}

SuiteResult suite_linear_oracle(const SelftestOptions &opts) {
  Rng rng(opts.seed + 10);
  Tally tally("linear case vs dense periodic oracle");
  const std::size_t runs = std::max<std::size_t>(1, opts.samples / 100);
  for (std::size_t i = 0; i < runs; ++i) {
    const FeSpacePtr space = FeSpace::make(uniform_mesh(kDomain, 10), 1);
    const TimeGrid grid(uniform(rng, 0.5, 2.0 * std::numbers::pi), 8);
    const double a0 = uniform(rng, -2.0, 2.0);
    const double a1 = uniform(rng, -2.0, 2.0);
    const double w = 2.0 * std::numbers::pi / grid.period();
    auto alpha = [=](double t) { return a0 + a1 * std::cos(w * t); };
    FlowRateProblem problem{
        StressModel(ExponentField::constant(2.0), 0.0), space, grid,
        discretize_alpha(alpha, grid, AlphaDiscretization::Nodal),
        build_chi_h(space, default_chi(kDomain))};
    const DenseLinearSolution dense = dense_periodic_linear(problem);
    PicardConfig config;
    config.tol_stop = 1e-14;
    config.max_iters = 2000;
    const PeriodicSolveReport report = picard_periodic(problem, config);
    double diff = 0.0;
    for (std::size_t m = 1; m <= grid.steps(); ++m) {
      const auto &c = report.trajectory[m].coefficients();
      for (std::size_t j = 0; j < c.size(); ++j)
        diff = std::max(diff, std::abs(c[j] - dense.states[m - 1][j]));
      diff = std::max(diff, std::abs(report.gamma[m] - dense.gamma[m - 1]));
    }
    tally.record(diff - 1e-10, describe("max difference %.3g", diff));
  }
  return tally.finish();
}

std::vector<SuiteResult> run_selftest(const SelftestOptions &opts) {
  return {suite_monotonicity(opts),      suite_potential_gradient(opts),
          suite_convexity(opts),         suite_coercivity_growth(opts),
          suite_potential_bounds(opts),  suite_young(opts),
          suite_luxembourg(opts),        suite_discrete_ibp(opts),
          suite_chi_normalization(opts), suite_flux_defect(opts),
          suite_linear_oracle(opts)};
}

void print_selftest(std::ostream &os, const std::vector<SuiteResult> &results) {
  char line[256];
  std::snprintf(line, sizeof line, "%-40s %-6s %8s %8s %12s\n", "suite",
                "status", "samples", "failed", "worst");
  os << line;
  for (const SuiteResult &r : results) {
    std::snprintf(line, sizeof line, "%-40s %-6s %8zu %8zu %12.3e\n",
                  r.name.c_str(), r.passed ? "PASS" : "FAIL", r.samples,
                  r.failures, r.worst);
    os << line;
    if (!r.passed && !r.detail.empty())
      os << "    first failure: " << r.detail << '\n';
  }
}

} // namespace smartflow
