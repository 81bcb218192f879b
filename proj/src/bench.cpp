#include "smartflow/bench.hpp"

#include "smartflow/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace smartflow {

namespace {

std::size_t error_points(const FeSpace &space) {
  return static_cast<std::size_t>(space.degree()) + 6;
}

// sum_e sum_q w * g(e, x) over the mesh of `space`.
template <typename G>
double integrate_mesh(const FeSpace &space, std::size_t points, G &&g) {
  const Mesh1D &mesh = space.mesh();
  const GaussRule &rule = gauss_legendre(points);
  double s = 0.0;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const double xl = mesh.element_left(e);
    const double xr = mesh.element_right(e);
    for (std::size_t q = 0; q < rule.size(); ++q)
      s += rule.weight_on(q, xl, xr) * g(e, rule.node_on(q, xl, xr));
  }
  return s;
}

} // namespace

double err_linf_l2(const SpaceTimeFunction &vh, const SpaceTimeEval &v) {
  const FeSpace &space = *vh.space();
  const TimeGrid &grid = vh.grid();
  double worst = 0.0;
  for (std::size_t m = 1; m <= grid.steps(); ++m) {
    const double t = grid.node(m);
    const FeFunction &u = vh[m];
    const double sq = integrate_mesh(
        space, error_points(space), [&](std::size_t e, double x) {
          const double d = u.value(e, x) - v(t, x);
          return d * d;
        });
    worst = std::max(worst, std::sqrt(sq));
  }
  return worst;
}

double err_grad_l2(const SpaceTimeFunction &vh, const SpaceTimeEval &dv) {
  const FeSpace &space = *vh.space();
  const TimeGrid &grid = vh.grid();
  double sum = 0.0;
  for (std::size_t m = 1; m <= grid.steps(); ++m) {
    const double t = grid.node(m);
    const FeFunction &u = vh[m];
    sum += grid.tau() * integrate_mesh(space, error_points(space),
                                       [&](std::size_t e, double x) {
                                         const double d =
                                             u.gradient(e, x) - dv(t, x);
                                         return d * d;
                                       });
  }
  return std::sqrt(sum);
}

double err_natural_f(const SpaceTimeFunction &vh, const SpaceTimeEval &dv,
                     const StressModel &stress) {
  const FeSpace &space = *vh.space();
  const TimeGrid &grid = vh.grid();
  double sum = 0.0;
  for (std::size_t m = 1; m <= grid.steps(); ++m) {
    const double t = grid.node(m);
    const FeFunction &u = vh[m];
    sum += grid.tau() *
           integrate_mesh(space, error_points(space),
                          [&](std::size_t e, double x) {
                            const double d = stress.natural_f(x, u.gradient(e, x)) -
                                             stress.natural_f(x, dv(t, x));
                            return d * d;
                          });
  }
  return std::sqrt(sum);
}

double err_gamma_l2(const TimeSeries &gamma_h,
                    const std::function<double(double)> &gamma) {
  const TimeGrid &grid = gamma_h.grid();
  double sum = 0.0;
  for (std::size_t m = 1; m <= grid.steps(); ++m) {
    const double d = gamma_h[m] - gamma(grid.node(m));
    sum += grid.tau() * d * d;
  }
  return std::sqrt(sum);
}

double err_gamma_shifted(const TimeSeries &gamma_h,
                         const std::function<double(double)> &gamma,
                         const SpaceTimeEval &dv, const StressModel &stress,
                         const Mesh1D &mesh) {
  const TimeGrid &grid = gamma_h.grid();
  const GaussRule &rule = gauss_legendre(7);
  double sum = 0.0;
  for (std::size_t m = 1; m <= grid.steps(); ++m) {
    const double t = grid.node(m);
    const double d = std::abs(gamma_h[m] - gamma(t));
    if (d == 0.0)
      continue;
    double slab = 0.0;
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
      const double xl = mesh.element_left(e);
      const double xr = mesh.element_right(e);
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const double x = rule.node_on(q, xl, xr);
        slab += rule.weight_on(q, xl, xr) *
                stress.shifted_conjugate(x, std::abs(dv(t, x)), d);
      }
    }
    sum += grid.tau() * slab;
  }
  return sum;
}

double err_gamma(const TimeSeries &gamma_h, const ExactSolution &exact,
                 GammaErrorMode mode, const StressModel &stress,
                 const Mesh1D &mesh) {
  if (mode == GammaErrorMode::PlainL2)
    return err_gamma_l2(gamma_h, exact.gamma);
  return err_gamma_shifted(gamma_h, exact.gamma, exact.dv, stress, mesh);
}

std::vector<double> eoc(const std::vector<double> &values,
                        const std::vector<double> &steps) {
  if (values.size() != steps.size())
    throw std::invalid_argument("eoc: values and steps differ in length");
  std::vector<double> out;
  for (std::size_t i = 1; i < values.size(); ++i)
    out.push_back(std::log(values[i - 1] / values[i]) /
                  std::log(steps[i - 1] / steps[i]));
  return out;
}

StudyConfig womersley_study(double radius, int last_level, int omega) {
  StudyConfig c;
  c.exact = womersley_solution({radius, omega});
  c.last_level = last_level;
  c.grad_mode = GradErrorMode::L2;
  c.gamma_mode = GammaErrorMode::PlainL2;
  return c;
}

StudyConfig steady_study(const SteadySpec &spec, int last_level) {
  StudyConfig c;
  c.exact = steady_solution(spec, 1.0);
  c.last_level = last_level;
  c.grad_mode = GradErrorMode::NaturalF;
  c.gamma_mode = GammaErrorMode::Shifted;
  return c;
}

LevelSetup make_level(const StudyConfig &config, int level) {
  if (level < 0 || level > 24)
    throw std::invalid_argument("make_level: level out of range");
  const ExactSolution &ex = config.exact;
  const std::size_t n = std::size_t{1} << (level + 1);
  const std::size_t steps = std::size_t{1} << level;
  Mesh1D mesh = uniform_mesh(ex.domain, n, ex.exponent.breakpoints());
  return LevelSetup{level, StressModel(ex.exponent, config.delta),
                    FeSpace::make(std::move(mesh), config.degree),
                    TimeGrid(ex.period, steps)};
}

FlowRateProblem make_flow_rate_problem(const StudyConfig &config,
                                       const LevelSetup &s) {
  const ExactSolution &ex = config.exact;
  return FlowRateProblem{
      s.stress, s.space, s.grid,
      discretize_alpha(ex.alpha, s.grid, config.alpha_discretization),
      build_chi_h(s.space, default_chi(ex.domain))};
}

PressureProblem make_pressure_problem(const StudyConfig &config,
                                      const LevelSetup &s) {
  std::vector<double> g;
  g.reserve(s.grid.steps());
  for (std::size_t m = 1; m <= s.grid.steps(); ++m)
    g.push_back(config.exact.gamma(s.grid.node(m)));
  return PressureProblem{s.stress, s.space, s.grid,
                         TimeSeries(s.grid, std::move(g), false)};
}

ErrorRecord run_level(const StudyConfig &config, int level) {
  const LevelSetup setup = make_level(config, level);
  const ExactSolution &ex = config.exact;
  PeriodicSolveReport rep =
      config.pressure_problem
          ? solve_pressure_periodic(make_pressure_problem(config, setup),
                                    config.picard)
          : picard_periodic(make_flow_rate_problem(config, setup), config.picard);

  ErrorRecord r;
  r.level = level;
  r.h = setup.space->mesh().h_max();
  r.tau = setup.grid.tau();
  r.err_linf_l2 = err_linf_l2(rep.trajectory, ex.v);
  r.err_grad = config.grad_mode == GradErrorMode::L2
                   ? err_grad_l2(rep.trajectory, ex.dv)
                   : err_natural_f(rep.trajectory, ex.dv, setup.stress);
  r.err_gamma = err_gamma(rep.gamma, ex, config.gamma_mode, setup.stress,
                          setup.space->mesh());
  r.picard_iterations = rep.picard_iterations;
  r.converged = rep.converged;
  r.picard_residuals = rep.picard_residuals;
  if (!rep.flux_defects.empty())
    r.max_flux_defect =
        *std::max_element(rep.flux_defects.begin(), rep.flux_defects.end());
  r.diagnostics = rep.diagnostics;
  r.dtau_norm = std::sqrt(rep.diagnostics.dtau_norm_sq);
  if (config.keep_trajectories) {
    r.trajectory = std::move(rep.trajectory);
    r.gamma = std::move(rep.gamma);
  }
  return r;
}

ErrorTable run_convergence_study(const StudyConfig &config) {
  if (config.last_level < config.first_level)
    throw std::invalid_argument("run_convergence_study: empty level range");
  ErrorTable table;
  if (config.parallel) {
    std::vector<std::future<ErrorRecord>> jobs;
    for (int i = config.first_level; i <= config.last_level; ++i)
      jobs.push_back(std::async(std::launch::async,
                                [&config, i] { return run_level(config, i); }));
    for (auto &j : jobs)
      table.records.push_back(j.get());
  } else {
    for (int i = config.first_level; i <= config.last_level; ++i)
      table.records.push_back(run_level(config, i));
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 1; i < table.records.size(); ++i) {
    const ErrorRecord &a = table.records[i - 1];
    const ErrorRecord &b = table.records[i];
    if (!a.converged || !b.converged) {
      table.eoc.push_back({nan, nan, nan});
      continue;
    }
    const std::vector<double> steps{a.tau + a.h, b.tau + b.h};
    table.eoc.push_back(
        {eoc({a.err_linf_l2, b.err_linf_l2}, steps)[0],
         eoc({a.err_grad, b.err_grad}, steps)[0],
         eoc({a.err_gamma, b.err_gamma}, steps)[0]});
  }
  return table;
}

double tail_median(const ErrorTable &table, int column, std::size_t count) {
  std::vector<double> vals;
  for (auto it = table.eoc.rbegin(); it != table.eoc.rend() && vals.size() < count;
       ++it) {
    const double v = (*it)[static_cast<std::size_t>(column)];
    if (std::isfinite(v))
      vals.push_back(v);
  }
  if (vals.empty())
    return std::numeric_limits<double>::quiet_NaN();
  std::sort(vals.begin(), vals.end());
  const std::size_t n = vals.size();
  return n % 2 ? vals[n / 2] : 0.5 * (vals[n / 2 - 1] + vals[n / 2]);
}

namespace {

std::string fmt(double v) {
  if (std::isnan(v))
    return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10e", v);
  return buf;
}

} // namespace

void ErrorTable::write_csv(std::ostream &os) const {
  os << "level,h,tau,err_linf_l2,err_grad,err_gamma,picard_iters\n";
  for (const auto &r : records)
    os << r.level << ',' << fmt(r.h) << ',' << fmt(r.tau) << ','
       << fmt(r.err_linf_l2) << ',' << fmt(r.err_grad) << ','
       << fmt(r.err_gamma) << ',' << r.picard_iterations << '\n';
  for (std::size_t i = 0; i < eoc.size(); ++i) {
    const ErrorRecord &r = records[i + 1];
    os << "eoc_" << r.level << ',' << fmt(r.h) << ',' << fmt(r.tau) << ','
       << fmt(eoc[i][0]) << ',' << fmt(eoc[i][1]) << ',' << fmt(eoc[i][2])
       << ",\n";
  }
}

void ErrorTable::write_svg(std::ostream &os, const std::string &title) const {
  constexpr double W = 640, H = 480, ml = 70, mr = 150, mt = 40, mb = 50;
  std::vector<double> xs;
  std::vector<std::array<double, 3>> ys;
  double ymin = std::numeric_limits<double>::infinity();
  double ymax = -ymin;
  for (const auto &r : records) {
    xs.push_back(std::log10(r.tau + r.h));
    std::array<double, 3> y{std::log10(r.err_linf_l2), std::log10(r.err_grad),
                            std::log10(r.err_gamma)};
    for (double v : y)
      if (std::isfinite(v)) {
        ymin = std::min(ymin, v);
        ymax = std::max(ymax, v);
      }
    ys.push_back(y);
  }
  if (xs.empty() || !std::isfinite(ymin)) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
          "height=\"480\"/>\n";
    return;
  }
  const double xmin = *std::min_element(xs.begin(), xs.end());
  const double xmax = std::max(xmin + 1e-9, *std::max_element(xs.begin(), xs.end()));
  ymin = std::floor(ymin);
  ymax = std::max(ymin + 1.0, std::ceil(ymax));
  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
  auto py = [&](double y) { return mt + (ymax - y) / (ymax - ymin) * (H - mt - mb); };

  char buf[256];
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
        "font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty())
    os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\">"
       << title << "</text>\n";
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" "
                "fill=\"none\" stroke=\"black\"/>\n",
                ml, mt, W - ml - mr, H - mt - mb);
  os << buf;
  for (int d = static_cast<int>(ymin); d <= static_cast<int>(ymax); ++d) {
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\">1e%d</text>\n",
                  ml - 6, py(d) + 4, d);
    os << buf;
  }
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\">tau + h "
                "(log scale)</text>\n",
                ml + (W - ml - mr) / 2, H - 15);
  os << buf;

  const char *colors[3] = {"#7b2d8e", "#1560bd", "#009e60"};
  const char *names[3] = {"err_linf_l2", "err_grad", "err_gamma"};
  for (int c = 0; c < 3; ++c) {
    os << "<polyline fill=\"none\" stroke=\"" << colors[c]
       << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (std::isfinite(ys[i][c])) {
        std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(xs[i]), py(ys[i][c]));
        os << buf;
      }
    os << "\"/>\n";
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" fill=\"%s\">%s</text>\n",
                  W - mr + 10, mt + 20.0 + 18.0 * c, colors[c], names[c]);
    os << buf;
  }
  // Reference slopes anchored at the finest level of the first column.
  const double slopes[2] = {1.0, 0.5};
  for (int k = 0; k < 2; ++k) {
    const double y1 = ys.back()[0];
    const double y0 = y1 + slopes[k] * (xs.front() - xs.back());
    if (!std::isfinite(y1))
      continue;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                  "stroke=\"gray\" stroke-dasharray=\"%s\"/>\n",
                  px(xs.front()), py(y0), px(xs.back()), py(y1),
                  k == 0 ? "6,4" : "2,3");
    os << buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" fill=\"gray\">slope %.1f</text>\n",
                  W - mr + 10, mt + 80.0 + 18.0 * k, slopes[k]);
    os << buf;
  }
  os << "</svg>\n";
}

} // namespace smartflow
