#include "smartflow/solver.hpp"

#include "smartflow/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace smartflow {

TimeSeries discretize_alpha(const std::function<double(double)> &alpha,
                            const TimeGrid &grid, AlphaDiscretization kind) {
  if (kind == AlphaDiscretization::Nodal)
    return interp_I0(alpha, grid);
  const TimeSeries avg = project_Pi0(alpha, grid);
  std::vector<double> v;
  v.reserve(grid.steps() + 1);
  v.push_back(avg[grid.steps()]);
  for (std::size_t m = 1; m <= grid.steps(); ++m)
    v.push_back(avg[m]);
  return {grid, std::move(v), true};
}

void FlowRateProblem::validate() const {
  if (!space)
    throw std::invalid_argument("FlowRateProblem: missing space");
  if (!(alpha.grid() == grid) || !alpha.with_slab0())
    throw std::invalid_argument(
        "FlowRateProblem: alpha must live on slabs 0..M of the time grid");
  const double a0 = alpha[0];
  const double am = alpha[grid.steps()];
  if (std::abs(a0 - am) > 1e-12 * (1.0 + std::abs(a0)))
    throw std::invalid_argument("FlowRateProblem: alpha is not periodic");
  if (chi_h.function.space() != space)
    throw std::invalid_argument("FlowRateProblem: chi_h on a different space");
  require_aligned(stress.exponent(), space->mesh());
}

void PressureProblem::validate() const {
  if (!space)
    throw std::invalid_argument("PressureProblem: missing space");
  if (!(gamma.grid() == grid))
    throw std::invalid_argument("PressureProblem: gamma on a different grid");
  require_aligned(stress.exponent(), space->mesh());
}

void PicardConfig::validate() const {
  if (!(tol_stop > 0.0) || !(inner_tol_abs > 0.0))
    throw std::invalid_argument("PicardConfig: tolerances must be positive");
  if (max_iters < 1 || inner_max_iters < 1)
    throw std::invalid_argument("PicardConfig: iteration limits must be >= 1");
  if (pseudo_step.mode == PseudoStep::Mode::Fixed && !(pseudo_step.value > 0.0))
    throw std::invalid_argument("PicardConfig: pseudo step must be positive");
}

namespace {

struct Operators {
  SymBandMatrix mass;
  std::vector<double> flux;
};

Operators make_operators(const FeSpace &space) {
  return {assemble_mass(space), assemble_flux_vector(space)};
}

bool is_linear(const StressModel &stress) {
  const ExponentField &p = stress.exponent();
  return p.is_constant() && p.p_minus() == 2.0;
}

double max_abs_diff(const std::vector<double> &a, const std::vector<double> &b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// Frozen-coefficient iteration for
//   (M/tau + A(v)) v [+ lambda b] = M v_prev / tau + extra   [, b.v = alpha]
// Derivative along d of the step energy
//   J(u) = c/2 (u, u) - (rhs, u) + int U(x, u') / 2,
// whose minimizer over the flux-constrained set is the step solution.
double energy_slope(const FeSpace &space, const StressModel &stress,
                    const SymBandMatrix &mass, double c,
                    const std::vector<double> &rhs, const FeFunction &u,
                    const std::vector<double> &d) {
  // `rhs` already carries the multiplier term, so the slope is taken within
  // the constraint set.
  const std::vector<double> mu = mass.multiply(u.coefficients());
  const std::vector<double> r = residual_stress(space, stress, u);
  double s = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i)
    s += (c * mu[i] - rhs[i] + r[i]) * d[i];
  return s;
}

// Replaces `v` by w + theta (v - w) with theta in (0, 1] minimizing the step
// energy along the segment. Keeps theta = 1 when the energy still decreases
// there.
void line_search(const FeSpace &space, const StressModel &stress,
                 const SymBandMatrix &mass, double c,
                 std::vector<double> rhs, const std::vector<double> &w,
                 std::vector<double> &v, const std::vector<double> &flux,
                 double multiplier) {
  for (std::size_t i = 0; i < rhs.size(); ++i)
    rhs[i] -= multiplier * flux[i];
  const std::size_t n = w.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i)
    d[i] = v[i] - w[i];
  auto point = [&](double theta) {
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i)
      u[i] = w[i] + theta * d[i];
    return u;
  };
  const FeSpacePtr view(std::shared_ptr<const FeSpace>(), &space);
  auto slope = [&](double theta) {
    return energy_slope(space, stress, mass, c, rhs,
                        FeFunction(view, point(theta)), d);
  };
  double hi_slope = slope(1.0);
  if (!(hi_slope > 0.0))
    return;
  double lo = 0.0, hi = 1.0;
  double lo_slope = slope(0.0);
  if (!(lo_slope < 0.0))
    return;
  // Illinois regula falsi on the monotone slope.
  double theta = 1.0;
  int side = 0;
  for (int it = 0; it < 60 && hi - lo > 1e-4 * hi; ++it) {
    theta = (lo * hi_slope - hi * lo_slope) / (hi_slope - lo_slope);
    const double g = slope(theta);
    if (g > 0.0) {
      hi = theta;
      hi_slope = g;
      if (side == -1)
        lo_slope *= 0.5;
      side = -1;
    } else {
      lo = theta;
      lo_slope = g;
      if (side == 1)
        hi_slope *= 0.5;
      side = 1;
    }
    if (g == 0.0)
      break;
  }
  v = point(theta);
}

StepResult frozen_step(const FeSpacePtr &space, const StressModel &stress,
                       const Operators &ops, double tau,
                       const FeFunction &v_prev, const std::vector<double> &extra,
                       std::optional<double> flux_target,
                       const PicardConfig &config, const FeFunction *warm,
                       double target) {
  const std::size_t n = space->num_dofs();
  const bool linear = is_linear(stress);
  std::vector<double> base = ops.mass.multiply(v_prev.coefficients());
  for (std::size_t i = 0; i < n; ++i)
    base[i] = base[i] / tau + extra[i];

  double inv_sigma = 0.0;
  if (config.pseudo_step.mode == PseudoStep::Mode::Fixed)
    inv_sigma = 1.0 / config.pseudo_step.value;

  StepResult out{warm ? *warm : v_prev, std::nullopt, 0, false, 0.0};
  double prev_diff = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= config.inner_max_iters; ++k) {
    SymBandMatrix a = assemble_nonlinear_form(*space, stress, out.v);
    a.axpy(1.0 / tau + inv_sigma, ops.mass);
    std::vector<double> rhs = base;
    if (inv_sigma > 0.0) {
      const auto mw = ops.mass.multiply(out.v.coefficients());
      for (std::size_t i = 0; i < n; ++i)
        rhs[i] += inv_sigma * mw[i];
    }
    const BandCholesky chol(a);
    std::vector<double> v = chol.solve(rhs);
    if (flux_target) {
      const std::vector<double> z = chol.solve(ops.flux);
      const double lambda =
          (dot(ops.flux, v) - *flux_target) / dot(ops.flux, z);
      for (std::size_t i = 0; i < n; ++i)
        v[i] -= lambda * z[i];
      out.multiplier = lambda;
    }
    const bool feasible =
        !flux_target || std::abs(dot(ops.flux, out.v.coefficients()) -
                                 *flux_target) <=
                            1e-12 * (1.0 + std::abs(*flux_target));
    if (!linear && feasible)
      line_search(*space, stress, ops.mass, 1.0 / tau + inv_sigma, rhs,
                  out.v.coefficients(), v, ops.flux,
                  flux_target ? *out.multiplier : 0.0);
    const double diff = max_abs_diff(v, out.v.coefficients());
    out.v.coefficients() = std::move(v);
    out.iterations = k;
    out.last_difference = diff;
    out.converged = linear || diff <= config.inner_tol_abs;
    // Iterate past inner_tol_abs toward `target` while progress is made.
    if (linear || diff <= target ||
        (out.converged && k > 1 && diff >= prev_diff))
      break;
    if (config.pseudo_step.mode == PseudoStep::Mode::Adaptive && k > 1 &&
        diff > prev_diff)
      inv_sigma = inv_sigma == 0.0 ? 1.0 / tau : 2.0 * inv_sigma;
    prev_diff = diff;
  }
  return out;
}

StepResult flow_step(const FlowRateProblem &pb, const Operators &ops,
                     const FeFunction &v_prev, std::size_t m,
                     const PicardConfig &config, const FeFunction *warm,
                     double target) {
  const std::vector<double> zero(pb.space->num_dofs(), 0.0);
  return frozen_step(pb.space, pb.stress, ops, pb.grid.tau(), v_prev, zero,
                     pb.alpha[m], config, warm, target);
}

StepResult pressure_step(const PressureProblem &pb, const Operators &ops,
                         const FeFunction &v_prev, std::size_t m,
                         const PicardConfig &config, const FeFunction *warm,
                         double target) {
  std::vector<double> extra = ops.flux;
  for (double &e : extra)
    e *= -pb.gamma[m];
  return frozen_step(pb.space, pb.stress, ops, pb.grid.tau(), v_prev, extra,
                     std::nullopt, config, warm, target);
}

struct March {
  std::vector<FeFunction> states;
  int max_inner = 0;
  std::string failure;
};

template <typename Step>
March march(const TimeGrid &grid, const FeFunction &v0, Step &&step,
            const SpaceTimeFunction *previous, double target) {
  March out;
  out.states.reserve(grid.steps() + 1);
  out.states.push_back(v0);
  for (std::size_t m = 1; m <= grid.steps(); ++m) {
    const FeFunction *warm = previous ? &(*previous)[m] : nullptr;
    StepResult r = step(out.states.back(), m, warm, target);
    out.max_inner = std::max(out.max_inner, r.iterations);
    const bool ok = r.converged;
    out.states.push_back(std::move(r.v));
    if (!ok) {
      std::ostringstream msg;
      msg << "inner iteration did not converge on slab " << m
          << " (last difference " << r.last_difference << ")";
      out.failure = msg.str();
      // Pad with the last state so the trajectory stays well formed.
      while (out.states.size() < grid.steps() + 1)
        out.states.push_back(out.states.back());
      break;
    }
  }
  return out;
}

template <typename Step>
PeriodicSolveReport periodic(const FeSpacePtr &space, const TimeGrid &grid,
                             const SymBandMatrix &mass, FeFunction v0,
                             Step &&step, const PicardConfig &config) {
  // Steps are accepted at inner_tol_abs but refined toward a target tied to
  // tol_stop so the period map is evaluated well below the Picard tolerance.
  const double target =
      std::clamp(1e-2 * config.tol_stop, 1e-15, config.inner_tol_abs);
  March run = march(grid, v0, step, nullptr, target);
  SpaceTimeFunction traj(grid, std::move(run.states), true);
  std::vector<double> residuals{l2_norm(mass, traj[grid.steps()] - traj[0])};
  int iterations = 1;
  int max_inner = run.max_inner;
  std::string failure = run.failure;
  while (failure.empty() && residuals.back() > config.tol_stop &&
         iterations < config.max_iters) {
    const FeFunction start = traj[grid.steps()];
    run = march(grid, start, step, &traj, target);
    traj = SpaceTimeFunction(grid, std::move(run.states), true);
    residuals.push_back(l2_norm(mass, traj[grid.steps()] - traj[0]));
    max_inner = std::max(max_inner, run.max_inner);
    failure = run.failure;
    ++iterations;
  }
  const bool converged = failure.empty() && residuals.back() <= config.tol_stop;
  (void)space;
  return PeriodicSolveReport{std::move(traj),
                             TimeSeries(grid, std::vector<double>(grid.steps()),
                                        false),
                             std::move(residuals),
                             iterations,
                             converged,
                             std::move(failure),
                             max_inner,
                             {},
                             {}};
}

} // namespace

StepResult inner_solve_step(const FlowRateProblem &problem,
                            const FeFunction &v_prev, std::size_t m,
                            const PicardConfig &config,
                            const FeFunction *warm_start) {
  if (m == 0 || m > problem.grid.steps())
    throw std::out_of_range("inner_solve_step: slab index out of range");
  return flow_step(problem, make_operators(*problem.space), v_prev, m, config,
                   warm_start, config.inner_tol_abs);
}

StepResult inner_solve_step(const PressureProblem &problem,
                            const FeFunction &v_prev, std::size_t m,
                            const PicardConfig &config,
                            const FeFunction *warm_start) {
  if (m == 0 || m > problem.grid.steps())
    throw std::out_of_range("inner_solve_step: slab index out of range");
  return pressure_step(problem, make_operators(*problem.space), v_prev, m,
                       config, warm_start, config.inner_tol_abs);
}

SpaceTimeFunction solve_initial_value(const FlowRateProblem &problem,
                                      const FeFunction &v0,
                                      const PicardConfig &config) {
  problem.validate();
  const Operators ops = make_operators(*problem.space);
  March run = march(
      problem.grid, v0,
      [&](const FeFunction &prev, std::size_t m, const FeFunction *warm,
          double target) {
        return flow_step(problem, ops, prev, m, config, warm, target);
      },
      nullptr, config.inner_tol_abs);
  if (!run.failure.empty())
    throw ConvergenceFailure(run.failure);
  return {problem.grid, std::move(run.states), true};
}

SpaceTimeFunction solve_initial_value(const PressureProblem &problem,
                                      const FeFunction &v0,
                                      const PicardConfig &config) {
  problem.validate();
  const Operators ops = make_operators(*problem.space);
  March run = march(
      problem.grid, v0,
      [&](const FeFunction &prev, std::size_t m, const FeFunction *warm,
          double target) {
        return pressure_step(problem, ops, prev, m, config, warm, target);
      },
      nullptr, config.inner_tol_abs);
  if (!run.failure.empty())
    throw ConvergenceFailure(run.failure);
  return {problem.grid, std::move(run.states), true};
}

PeriodicSolveReport picard_periodic(const FlowRateProblem &problem,
                                    const PicardConfig &config,
                                    const FeFunction *v0_tilde) {
  problem.validate();
  config.validate();
  const Operators ops = make_operators(*problem.space);
  FeFunction v0 = problem.alpha[0] * problem.chi_h.function;
  if (v0_tilde)
    v0 += *v0_tilde;
  PeriodicSolveReport rep = periodic(
      problem.space, problem.grid, ops.mass, std::move(v0),
      [&](const FeFunction &prev, std::size_t m, const FeFunction *warm,
          double target) {
        return flow_step(problem, ops, prev, m, config, warm, target);
      },
      config);
  rep.gamma = reconstruct_gamma(problem, rep.trajectory);
  rep.flux_defects = flux_defects(problem, rep.trajectory);
  rep.diagnostics =
      stability_diagnostics(rep.trajectory, rep.gamma, problem.stress);
  return rep;
}

PeriodicSolveReport solve_pressure_periodic(const PressureProblem &problem,
                                            const PicardConfig &config,
                                            const FeFunction *v0) {
  problem.validate();
  config.validate();
  const Operators ops = make_operators(*problem.space);
  FeFunction start = v0 ? *v0 : FeFunction(problem.space);
  PeriodicSolveReport rep = periodic(
      problem.space, problem.grid, ops.mass, std::move(start),
      [&](const FeFunction &prev, std::size_t m, const FeFunction *warm,
          double target) {
        return pressure_step(problem, ops, prev, m, config, warm, target);
      },
      config);
  std::vector<double> g;
  g.reserve(problem.grid.steps());
  for (std::size_t m = 1; m <= problem.grid.steps(); ++m)
    g.push_back(problem.gamma[m]);
  rep.gamma = TimeSeries(problem.grid, std::move(g), false);
  rep.diagnostics =
      stability_diagnostics(rep.trajectory, rep.gamma, problem.stress);
  return rep;
}

TimeSeries reconstruct_gamma(const StressModel &stress, const FeFunction &chi_h,
                             const SpaceTimeFunction &trajectory) {
  if (!trajectory.with_slab0())
    throw std::invalid_argument("reconstruct_gamma: trajectory needs slab 0");
  const FeSpace &space = *trajectory.space();
  const TimeGrid &grid = trajectory.grid();
  const SymBandMatrix mass = assemble_mass(space);
  const std::vector<double> m_chi = mass.multiply(chi_h.coefficients());
  std::vector<double> g;
  g.reserve(grid.steps());
  for (std::size_t m = 1; m <= grid.steps(); ++m) {
    const auto &cur = trajectory[m].coefficients();
    const auto &prev = trajectory[m - 1].coefficients();
    double dt = 0.0;
    for (std::size_t i = 0; i < cur.size(); ++i)
      dt += m_chi[i] * (cur[i] - prev[i]);
    dt /= grid.tau();
    const double st =
        dot(residual_stress(space, stress, trajectory[m]), chi_h.coefficients());
    g.push_back(-(dt + st));
  }
  return {grid, std::move(g), false};
}

TimeSeries reconstruct_gamma(const FlowRateProblem &problem,
                             const SpaceTimeFunction &trajectory) {
  return reconstruct_gamma(problem.stress, problem.chi_h.function, trajectory);
}

Diagnostics stability_diagnostics(const SpaceTimeFunction &trajectory,
                                  const TimeSeries &gamma,
                                  const StressModel &stress) {
  Diagnostics d;
  const FeSpace &space = *trajectory.space();
  const TimeGrid &grid = trajectory.grid();
  const double tau = grid.tau();
  const SymBandMatrix mass = assemble_mass(space);
  const QuadratureRule quad{stress_quadrature_points(stress, space.degree())};
  for (std::size_t m = 1; m <= grid.steps(); ++m) {
    const FeFunction &v = trajectory[m];
    const double rho = modular(
        [&v](std::size_t e, double x) { return v.gradient(e, x); },
        stress.exponent(), space.mesh(), quad);
    d.weak_modular += tau * rho;
    d.sup_modular = std::max(d.sup_modular, rho);
    if (trajectory.with_slab0()) {
      const double n = l2_norm(mass, trajectory[m] - trajectory[m - 1]) / tau;
      d.dtau_norm_sq += tau * n * n;
    }
    d.gamma_norm_sq += tau * gamma[m] * gamma[m];
  }
  return d;
}

std::vector<double> flux_defects(const FlowRateProblem &problem,
                                 const SpaceTimeFunction &trajectory) {
  const std::vector<double> b = assemble_flux_vector(*problem.space);
  std::vector<double> out;
  out.reserve(problem.grid.steps());
  for (std::size_t m = 1; m <= problem.grid.steps(); ++m)
    out.push_back(
        std::abs(dot(b, trajectory[m].coefficients()) - problem.alpha[m]));
  return out;
}

std::vector<std::pair<std::string, std::string>>
report_entries(const PeriodicSolveReport &report) {
  auto num = [](double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
  };
  std::vector<std::pair<std::string, std::string>> e;
  e.emplace_back("converged", report.converged ? "true" : "false");
  e.emplace_back("picard_iterations", std::to_string(report.picard_iterations));
  e.emplace_back("max_inner_iterations",
                 std::to_string(report.max_inner_iterations));
  e.emplace_back("final_residual", num(report.picard_residuals.empty()
                                           ? 0.0
                                           : report.picard_residuals.back()));
  std::string hist;
  for (std::size_t i = 0; i < report.picard_residuals.size(); ++i) {
    if (i)
      hist += ';';
    hist += num(report.picard_residuals[i]);
  }
  e.emplace_back("residual_history", hist);
  if (!report.flux_defects.empty())
    e.emplace_back("max_flux_defect",
                   num(*std::max_element(report.flux_defects.begin(),
                                         report.flux_defects.end())));
  e.emplace_back("diag.weak_modular", num(report.diagnostics.weak_modular));
  e.emplace_back("diag.sup_modular", num(report.diagnostics.sup_modular));
  e.emplace_back("diag.dtau_norm_sq", num(report.diagnostics.dtau_norm_sq));
  e.emplace_back("diag.gamma_norm_sq", num(report.diagnostics.gamma_norm_sq));
  if (!report.failure.empty())
    e.emplace_back("failure", report.failure);
  return e;
}

} // namespace smartflow
