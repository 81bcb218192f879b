#pragma once

#include "smartflow/exponent.hpp"

namespace smartflow {

/// Planar stress s(x, a) = (delta + |a|)^{p(x) - 2} a with (p, delta)-structure.
///
/// The generalized viscosity nu(x, t) = (delta + sqrt(t))^{p(x) - 2} satisfies
/// s(x, a) = nu(x, a^2) a. For delta = 0 and p(x) < 2 the viscosity is
/// singular at the origin; sqrt(t) is then clamped from below by
/// `regularization_eps`, and eval_stress inherits the clamp through nu.
class StressModel {
public:
  static constexpr double kDefaultRegularization = 1e-10;

  StressModel(ExponentField p, double delta,
              double regularization_eps = kDefaultRegularization);

  [[nodiscard]] const ExponentField &exponent() const { return p_; }
  [[nodiscard]] double delta() const { return delta_; }
  [[nodiscard]] double regularization_eps() const { return eps_; }

  /// Coercivity constant in s(x,a) a >= kappa1 |a|^p - kappa2(x).
  [[nodiscard]] double kappa1() const { return kappa1_; }
  /// Coercivity defect; zero unless delta > 0 and p(x) < 2.
  [[nodiscard]] double kappa2(double x) const;
  /// Growth constant in |s(x,a)| <= kappa3 |a|^{p-1} + kappa4(x).
  [[nodiscard]] double kappa3() const { return kappa3_; }
  /// Growth shift; zero when delta = 0.
  [[nodiscard]] double kappa4(double x) const;

  /// Constant c_eps of the variable eps-Young inequality at exponent value q.
  [[nodiscard]] double young_constant(double q, double eps) const;
  /// Supremum of young_constant over the exponent range [p_minus, p_plus].
  [[nodiscard]] double young_constant(double eps) const;

  [[nodiscard]] double viscosity(double x, double t) const;
  [[nodiscard]] double stress(double x, double a) const;
  /// V(x, t) = int_0^t nu(x, b) db in closed form.
  [[nodiscard]] double potential_v(double x, double t) const;
  /// U(x, a) = V(x, a^2); dU/da = 2 s(x, a).
  [[nodiscard]] double potential_u(double x, double a) const;
  /// f(x, a) = |a|^{(p(x) - 2)/2} a.
  [[nodiscard]] double natural_f(double x, double a) const;
  /// (phi_shift)^*(x, t) = (shift^{p(x)-1} + t)^{p'(x) - 2} t^2.
  [[nodiscard]] double shifted_conjugate(double x, double shift,
                                         double t) const;
  /// (s(x,a) - s(x,b)) (a - b).
  [[nodiscard]] double monotonicity_gap(double x, double a, double b) const;

private:
  ExponentField p_;
  double delta_;
  double eps_;
  double kappa1_ = 1.0;
  double kappa3_ = 1.0;
};

// Free-function spellings of the model operations.
[[nodiscard]] inline double eval_stress(const StressModel &m, double x,
                                        double a) {
  return m.stress(x, a);
}
[[nodiscard]] inline double eval_viscosity(const StressModel &m, double x,
                                           double t) {
  return m.viscosity(x, t);
}
[[nodiscard]] inline double eval_potential_V(const StressModel &m, double x,
                                             double t) {
  return m.potential_v(x, t);
}
[[nodiscard]] inline double eval_potential_U(const StressModel &m, double x,
                                             double a) {
  return m.potential_u(x, a);
}

} // namespace smartflow
