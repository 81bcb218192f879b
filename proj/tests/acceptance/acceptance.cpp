#include "smartflow/bench.hpp"
#include "smartflow/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

using namespace smartflow;

namespace {

int failures = 0;

void report(const std::string &id, bool ok, const std::string &detail) {
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", id.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok)
    ++failures;
}

std::string fmt(const char *f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

bool in_window(double v, double lo, double hi) { return v >= lo && v <= hi; }

void window(const std::string &id, const ErrorTable &t, int column, double lo,
            double hi) {
  const double r = tail_median(t, column, 3);
  report(id, in_window(r, lo, hi),
         "median EOC " + fmt("%.3f", r) + " in [" + fmt("%.1f", lo) + ", " +
             fmt("%.1f", hi) + "]");
}

struct Benchmark {
  std::string name;
  ErrorTable table;
  bool steady;
};

void print_table(const std::string &name, const ErrorTable &t) {
  std::printf("# %s\n", name.c_str());
  std::printf("#  level        h      tau   linf_l2       grad      gamma  iters\n");
  for (const ErrorRecord &r : t.records)
    std::printf("#  %5d %8.5f %8.5f %9.3e %9.3e %9.3e %5d\n", r.level, r.h, r.tau,
                r.err_linf_l2, r.err_grad, r.err_gamma, r.picard_iterations);
  for (std::size_t i = 0; i < t.eoc.size(); ++i)
    std::printf("#  eoc %d  %6.3f %6.3f %6.3f\n", t.records[i + 1].level, t.eoc[i][0],
                t.eoc[i][1], t.eoc[i][2]);
}

ErrorTable study(const std::string &name, const StudyConfig &c) {
  ErrorTable t = run_convergence_study(c);
  print_table(name, t);
  return t;
}

double relative_spread(const std::vector<double> &v) {
  const double hi = *std::max_element(v.begin(), v.end());
  const double lo = *std::min_element(v.begin(), v.end());
  if (hi <= 1e-10)
    return 0.0;
  return (hi - lo) / hi;
}

} // namespace

int main() {
  std::vector<Benchmark> benches;

  // 1. Womersley.
  for (double r : {1.0, 5.0}) {
    const std::string n = "womersley r=" + fmt("%g", r);
    ErrorTable t = study(n, womersley_study(r, 7));
    window("1 " + n + " err_linf_l2", t, 0, 0.8, 1.2);
    window("1 " + n + " err_grad_l2", t, 1, 0.8, 1.2);
    window("1 " + n + " err_gamma", t, 2, 0.3, 0.7);
    benches.push_back({n, std::move(t), false});
  }

  // 2. Constant exponent.
  for (auto [p, alpha] : {std::pair{2.5, 0.75}, std::pair{1.5, 0.5}}) {
    const std::string n = "constant p=" + fmt("%g", p);
    const StudyConfig c = steady_study(SteadySpec::constant(p), 7);
    const double a = flowrate_of(c.exact, 0.0);
    report("2 " + n + " flow rate", std::abs(a - alpha) <= 1e-8, fmt("%.9f", a));
    ErrorTable t = study(n, c);
    window("2 " + n + " err_natural_f", t, 1, 0.8, 1.2);
    window("2 " + n + " err_linf_l2", t, 0, 1.5, 2.5);
    window("2 " + n + " err_gamma", t, 2, 0.3, 0.7);
    benches.push_back({n, std::move(t), true});
  }

  // 3. Even piecewise exponent.
  {
    const StudyConfig c = steady_study(SteadySpec::even({0.5}, {1.5, 2.5}), 7);
    const double a = flowrate_of(c.exact, 0.0);
    report("3 even flow rate", std::abs(a - 0.586868) <= 1e-4, fmt("%.6f", a));
    ErrorTable t = study("even", c);
    window("3 even err_linf_l2", t, 0, 0.8, 1.2);
    window("3 even err_natural_f", t, 1, 0.3, 0.7);
    window("3 even err_gamma", t, 2, 0.3, 0.7);
    benches.push_back({"even", std::move(t), true});
  }

  // 4. Non-even exponent.
  {
    const SteadySpec spec = SteadySpec::noneven(0.5, 2.5, 1.5);
    const double root = noneven_shift(spec);
    report("4 non-even root", std::abs(root + 0.049547) <= 1e-5, fmt("%.7f", root));
    const StudyConfig c = steady_study(spec, 7);
    const double a = flowrate_of(c.exact, 0.0);
    report("4 non-even flow rate", std::abs(a - 0.684009) <= 1e-4, fmt("%.6f", a));
    ErrorTable t = study("non-even", c);
    window("4 non-even err_linf_l2", t, 0, 0.8, 1.2);
    window("4 non-even err_natural_f", t, 1, 0.8, 1.2);
    window("4 non-even err_gamma", t, 2, 0.3, 0.7);
    benches.push_back({"non-even", std::move(t), true});
  }

  // 5. Periodicity iteration behaviour.
  {
    bool conv = true, mono = true, steady_ok = true;
    double worst_dtau = 0.0;
    int worst_iters = 0;
    for (const Benchmark &b : benches)
      for (const ErrorRecord &r : b.table.records) {
        conv = conv && r.converged && r.picard_iterations <= 100;
        worst_iters = std::max(worst_iters, r.picard_iterations);
        for (std::size_t i = 1; i < r.picard_residuals.size(); ++i)
          mono = mono && r.picard_residuals[i] < r.picard_residuals[i - 1];
        if (b.steady) {
          worst_dtau = std::max(worst_dtau, r.dtau_norm);
          steady_ok = steady_ok && r.dtau_norm <= 1e-6;
        }
      }
    report("5 convergence", conv, "max sweeps " + fmt("%.0f", worst_iters));
    report("5 strictly decreasing residuals", mono, "all runs");
    report("5 steady fixed point", steady_ok, "max |d_tau v| " + fmt("%.2e", worst_dtau));
  }

  // 6. Direct and inverse problems on the same grids.
  {
    StudyConfig c = womersley_study(1.0, 7);
    double worst = 0.0, worst_gamma = 0.0;
    bool ok = true;
    for (int level = 1; level <= 7; ++level) {
      const LevelSetup s = make_level(c, level);
      const PressureProblem direct = make_pressure_problem(c, s);
      const auto rd = solve_pressure_periodic(direct, c.picard);
      std::vector<double> q;
      const auto b = assemble_flux_vector(*s.space);
      for (std::size_t m = 0; m <= s.grid.steps(); ++m)
        q.push_back(dot(b, rd.trajectory[m].coefficients()));
      FlowRateProblem inverse = make_flow_rate_problem(c, s);
      inverse.alpha = TimeSeries(s.grid, q, true);
      const auto ri = picard_periodic(inverse, c.picard);
      const double diff = err_linf_l2(
          ri.trajectory, [&](double t, double x) {
            const auto m = static_cast<std::size_t>(std::lround(t / s.grid.tau()));
            return rd.trajectory[m](x);
          });
      double dg = 0.0;
      for (std::size_t m = 1; m <= s.grid.steps(); ++m)
        dg = std::max(dg, std::abs(ri.gamma[m] - std::cos(s.grid.node(m))));
      worst = std::max(worst, diff);
      worst_gamma = std::max(worst_gamma, dg);
      ok = ok && rd.converged && ri.converged && diff <= 1e-8;
    }
    report("6 direct/inverse trajectories", ok,
           "max err_linf_l2 " + fmt("%.2e", worst) + ", max pressure drop deviation " +
               fmt("%.2e", worst_gamma));
  }

  // 7. Property suites.
  {
    SelftestOptions o;
    o.seed = 0;
    o.samples = 1000;
    for (const SuiteResult &r : run_selftest(o))
      report("7 " + r.name, r.passed,
             fmt("%.0f", static_cast<double>(r.samples)) + " samples, worst " +
                 fmt("%.2e", r.worst));
  }

  // 8. Dense oracle.
  {
    const Interval dom{-1.0, 1.0};
    auto space = FeSpace::make(uniform_mesh(dom, 10), 1);
    const TimeGrid grid(2.0 * 3.141592653589793, 8);
    const FlowRateProblem pr{StressModel(ExponentField::constant(2.0), 0.0), space, grid,
                             discretize_alpha([](double t) { return std::sin(t) + 0.3; }, grid,
                                              AlphaDiscretization::Nodal),
                             build_chi_h(space, default_chi(dom))};
    const DenseLinearSolution d = dense_periodic_linear(pr);
    const auto rep = picard_periodic(pr);
    double diff = 0.0;
    for (std::size_t m = 1; m <= 8; ++m)
      for (std::size_t j = 0; j < space->num_dofs(); ++j)
        diff = std::max(diff, std::abs(rep.trajectory[m].coefficients()[j] - d.states[m - 1][j]));
    report("8 dense oracle", rep.converged && space->num_dofs() == 9 && diff <= 1e-10,
           "max nodal difference " + fmt("%.2e", diff));
  }

  // 9. Stability diagnostics.
  for (const Benchmark &b : benches) {
    const auto &rs = b.table.records;
    const std::size_t n = rs.size();
    std::vector<double> w, s, d, g;
    for (std::size_t i = n - 3; i < n; ++i) {
      w.push_back(rs[i].diagnostics.weak_modular);
      s.push_back(rs[i].diagnostics.sup_modular);
      d.push_back(rs[i].diagnostics.dtau_norm_sq);
      g.push_back(rs[i].diagnostics.gamma_norm_sq);
    }
    const double worst = std::max({relative_spread(w), relative_spread(s),
                                   relative_spread(d), relative_spread(g)});
    report("9 " + b.name + " diagnostics", worst <= 0.1, "max relative spread " + fmt("%.3f", worst));
  }

  std::printf("%s: %d failing check(s)\n", failures == 0 ? "ALL PASS" : "SOME FAIL", failures);
  return failures == 0 ? 0 : 1;
}
