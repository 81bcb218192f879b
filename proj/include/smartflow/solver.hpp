#pragma once

#include "smartflow/grid.hpp"
#include "smartflow/stress.hpp"
#include "smartflow/timegrid.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace smartflow {

enum class AlphaDiscretization { Nodal, Average };

/// Flow-rate data on slabs 0..M with slab 0 equal to slab M. Nodal samples
/// alpha(t_m); Average takes slab means and copies slab M into slab 0.
[[nodiscard]] TimeSeries discretize_alpha(const std::function<double(double)> &alpha,
                                          const TimeGrid &grid,
                                          AlphaDiscretization kind);

/// Inverse problem: prescribed flow rate, unknown pressure drop.
struct FlowRateProblem {
  StressModel stress;
  FeSpacePtr space;
  TimeGrid grid;
  TimeSeries alpha; ///< slabs 0..M, periodic
  ChiH chi_h;

  /// Throws std::invalid_argument on inconsistent data.
  void validate() const;
};

/// Direct problem: prescribed pressure drop.
struct PressureProblem {
  StressModel stress;
  FeSpacePtr space;
  TimeGrid grid;
  TimeSeries gamma; ///< slabs 1..M (slab 0 ignored when present)

  void validate() const;
};

struct PseudoStep {
  enum class Mode { Off, Fixed, Adaptive };
  Mode mode = Mode::Adaptive;
  double value = 0.0; ///< sigma for Fixed mode

  friend bool operator==(const PseudoStep &, const PseudoStep &) = default;
};

struct PicardConfig {
  double tol_stop = 1e-12;
  int max_iters = 100;
  double inner_tol_abs = 1e-8;
  int inner_max_iters = 200;
  PseudoStep pseudo_step{};

  void validate() const;
  friend bool operator==(const PicardConfig &, const PicardConfig &) = default;
};

struct StepResult {
  FeFunction v;
  std::optional<double> multiplier; ///< set for flow-rate steps
  int iterations = 0;
  bool converged = false;
  double last_difference = 0.0;
};

/// One backward Euler step on slab m >= 1 by frozen-coefficient iteration.
/// `warm_start` seeds the iteration (defaults to v_prev).
[[nodiscard]] StepResult inner_solve_step(const FlowRateProblem &problem,
                                          const FeFunction &v_prev,
                                          std::size_t m,
                                          const PicardConfig &config = {},
                                          const FeFunction *warm_start = nullptr);
[[nodiscard]] StepResult inner_solve_step(const PressureProblem &problem,
                                          const FeFunction &v_prev,
                                          std::size_t m,
                                          const PicardConfig &config = {},
                                          const FeFunction *warm_start = nullptr);

/// March slabs 1..M from v0. Throws ConvergenceFailure if a step fails.
[[nodiscard]] SpaceTimeFunction solve_initial_value(const FlowRateProblem &problem,
                                                    const FeFunction &v0,
                                                    const PicardConfig &config = {});
[[nodiscard]] SpaceTimeFunction solve_initial_value(const PressureProblem &problem,
                                                    const FeFunction &v0,
                                                    const PicardConfig &config = {});

struct Diagnostics {
  double weak_modular = 0.0;     ///< sum_m tau rho_p(v_m')
  double sup_modular = 0.0;      ///< max_m rho_p(v_m')
  double dtau_norm_sq = 0.0;     ///< sum_m tau |d_tau v_m|^2
  double gamma_norm_sq = 0.0;    ///< sum_m tau Gamma_m^2
};

struct PeriodicSolveReport {
  SpaceTimeFunction trajectory; ///< slabs 0..M
  TimeSeries gamma;             ///< slabs 1..M
  std::vector<double> picard_residuals;
  int picard_iterations = 0;    ///< number of period marches
  bool converged = false;
  std::string failure;          ///< empty unless a step aborted
  int max_inner_iterations = 0;
  std::vector<double> flux_defects; ///< slabs 1..M, flow-rate problems only
  Diagnostics diagnostics;
};

/// Algorithm 1: Picard iteration on the period map starting from
/// v(0) = alpha_0 chi_h + v0_tilde (v0_tilde = 0 by default).
[[nodiscard]] PeriodicSolveReport
picard_periodic(const FlowRateProblem &problem, const PicardConfig &config = {},
                const FeFunction *v0_tilde = nullptr);

/// Algorithm 2: Picard iteration for the pressure-drop problem from v(0) = v0
/// (zero by default).
[[nodiscard]] PeriodicSolveReport
solve_pressure_periodic(const PressureProblem &problem,
                        const PicardConfig &config = {},
                        const FeFunction *v0 = nullptr);

/// Gamma_m = -[(d_tau v_m, chi_h) + (s(v_m'), chi_h')] on slabs 1..M.
[[nodiscard]] TimeSeries reconstruct_gamma(const FlowRateProblem &problem,
                                           const SpaceTimeFunction &trajectory);
[[nodiscard]] TimeSeries reconstruct_gamma(const StressModel &stress,
                                           const FeFunction &chi_h,
                                           const SpaceTimeFunction &trajectory);

[[nodiscard]] Diagnostics stability_diagnostics(const SpaceTimeFunction &trajectory,
                                                const TimeSeries &gamma,
                                                const StressModel &stress);

/// |(v_m, 1) - alpha_m| for m = 1..M.
[[nodiscard]] std::vector<double> flux_defects(const FlowRateProblem &problem,
                                               const SpaceTimeFunction &trajectory);

/// Flat key/value summary of a report for manifests.
[[nodiscard]] std::vector<std::pair<std::string, std::string>>
report_entries(const PeriodicSolveReport &report);

} // namespace smartflow
