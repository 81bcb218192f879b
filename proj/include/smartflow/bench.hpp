#pragma once

#include "smartflow/exact.hpp"
#include "smartflow/solver.hpp"

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace smartflow {

using SpaceTimeEval = std::function<double(double t, double x)>;

/// max_m |v_h(t_m) - v(t_m)|_Sigma over m = 1..M.
[[nodiscard]] double err_linf_l2(const SpaceTimeFunction &vh,
                                 const SpaceTimeEval &v);
/// (sum_m tau |v_h(t_m)' - v'(t_m)|^2_Sigma)^{1/2}.
[[nodiscard]] double err_grad_l2(const SpaceTimeFunction &vh,
                                 const SpaceTimeEval &dv);
/// (sum_m tau |f(v_h(t_m)') - f(v'(t_m))|^2_Sigma)^{1/2}.
[[nodiscard]] double err_natural_f(const SpaceTimeFunction &vh,
                                   const SpaceTimeEval &dv,
                                   const StressModel &stress);

enum class GammaErrorMode { PlainL2, Shifted };

/// (sum_m tau (Gamma_m - Gamma(t_m))^2)^{1/2}.
[[nodiscard]] double err_gamma_l2(const TimeSeries &gamma_h,
                                  const std::function<double(double)> &gamma);
/// sum_m tau int (phi_{|v'(t_m, x)|})^*(x, |Gamma_m - Gamma(t_m)|) dx.
[[nodiscard]] double err_gamma_shifted(const TimeSeries &gamma_h,
                                       const std::function<double(double)> &gamma,
                                       const SpaceTimeEval &dv,
                                       const StressModel &stress,
                                       const Mesh1D &mesh);
[[nodiscard]] double err_gamma(const TimeSeries &gamma_h,
                               const ExactSolution &exact, GammaErrorMode mode,
                               const StressModel &stress, const Mesh1D &mesh);

/// eoc_i = log(e_{i-1}/e_i) / log(s_{i-1}/s_i), i = 1..n-1.
[[nodiscard]] std::vector<double> eoc(const std::vector<double> &values,
                                      const std::vector<double> &steps);

enum class GradErrorMode { L2, NaturalF };

struct StudyConfig {
  ExactSolution exact;
  int first_level = 1;
  int last_level = 7;
  int degree = 1;
  double delta = 0.0;
  GradErrorMode grad_mode = GradErrorMode::L2;
  GammaErrorMode gamma_mode = GammaErrorMode::PlainL2;
  AlphaDiscretization alpha_discretization = AlphaDiscretization::Nodal;
  PicardConfig picard{};
  bool pressure_problem = false; ///< drive with Gamma instead of alpha
  bool parallel = false;
  bool keep_trajectories = false;
};

/// Womersley study: p = 2, L2 gradient error, plain Gamma error.
[[nodiscard]] StudyConfig womersley_study(double radius, int last_level = 7,
                                          int omega = 1);
/// Steady study: natural-F gradient error, shifted Gamma error, L = 1.
[[nodiscard]] StudyConfig steady_study(const SteadySpec &spec,
                                       int last_level = 7);

struct LevelSetup {
  int level;
  StressModel stress;
  FeSpacePtr space;
  TimeGrid grid;
};

/// Mesh with 2^{i+1} uniform elements on (-r, r) (exponent breakpoints
/// inserted) and M = 2^i time steps.
[[nodiscard]] LevelSetup make_level(const StudyConfig &config, int level);
[[nodiscard]] FlowRateProblem make_flow_rate_problem(const StudyConfig &config,
                                                     const LevelSetup &setup);
[[nodiscard]] PressureProblem make_pressure_problem(const StudyConfig &config,
                                                    const LevelSetup &setup);

struct ErrorRecord {
  int level = 0;
  double h = 0.0;
  double tau = 0.0;
  double err_linf_l2 = 0.0;
  double err_grad = 0.0;
  double err_gamma = 0.0;
  int picard_iterations = 0;
  bool converged = false;
  std::vector<double> picard_residuals;
  double max_flux_defect = 0.0;
  double dtau_norm = 0.0; ///< |d_tau v_h|_{I x Sigma}
  Diagnostics diagnostics;
  std::optional<SpaceTimeFunction> trajectory;
  std::optional<TimeSeries> gamma;
};

struct ErrorTable {
  std::vector<ErrorRecord> records;
  /// Rows i = 1..n-1 with EOCs of (linf_l2, grad, gamma); NaN when either
  /// level did not converge.
  std::vector<std::array<double, 3>> eoc;

  void write_csv(std::ostream &os) const;
  void write_svg(std::ostream &os, const std::string &title = {}) const;
};

[[nodiscard]] ErrorRecord run_level(const StudyConfig &config, int level);
[[nodiscard]] ErrorTable run_convergence_study(const StudyConfig &config);

/// Median of the last `count` finite entries of an EOC column.
[[nodiscard]] double tail_median(const ErrorTable &table, int column,
                                 std::size_t count = 3);

} // namespace smartflow
