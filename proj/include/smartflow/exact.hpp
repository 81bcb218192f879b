#pragma once

#include "smartflow/exponent.hpp"
#include "smartflow/mesh.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace smartflow {

struct WomersleyParams {
  double radius = 1.0;
  int omega = 1;

  [[nodiscard]] double period() const;
  void validate() const;
};

/// Pulsatile p = 2 profile driven by Gamma(t) = cos(omega t):
/// d_t v - v'' + cos(omega t) = 0 on (-r, r), v(t, +-r) = 0, 2 pi periodic.
[[nodiscard]] double womersley(const WomersleyParams &params, double t, double x);
[[nodiscard]] double womersley_dx(const WomersleyParams &params, double t,
                                  double x);
/// Flow rate (v(t, .), 1) by adaptive quadrature of the closed form.
[[nodiscard]] double womersley_flowrate(const WomersleyParams &params, double t);

/// (1/p')(r^{p'} - |x|^{p'}): steady solution for Gamma = -1, constant p.
[[nodiscard]] double steady_constant(double p, double r, double x);

struct SteadySpec {
  enum class Variant { Constant, Even, NonEven };
  Variant variant = Variant::Constant;
  double radius = 1.0;

  double p = 2.0; ///< Constant

  /// Even: shell boundaries in |x|, strictly decreasing from the wall
  /// inwards, and one exponent per shell listed from the wall inwards.
  std::vector<double> shell_radii;
  std::vector<double> shell_exponents;

  /// NonEven: p_left on x <= zeta, p_right on x > zeta.
  double zeta = 0.0;
  double p_left = 2.0;
  double p_right = 2.0;

  static SteadySpec constant(double p, double radius = 1.0);
  static SteadySpec even(std::vector<double> shell_radii,
                         std::vector<double> shell_exponents,
                         double radius = 1.0);
  static SteadySpec noneven(double zeta, double p_left, double p_right,
                            double radius = 1.0);

  void validate() const;
  /// Exponent field on (-r, r) matching the spec.
  [[nodiscard]] ExponentField exponent() const;
};

/// Even piecewise-power profile.
[[nodiscard]] double steady_even(const SteadySpec &spec, double x);

/// Root a of the continuity equation at zeta for the non-even profile.
/// Throws BracketFailure when no sign change is found.
[[nodiscard]] double noneven_shift(const SteadySpec &spec);

struct ExactSolution {
  std::function<double(double, double)> v;  ///< v(t, x)
  std::function<double(double, double)> dv; ///< d/dx v(t, x)
  std::function<double(double)> gamma;
  std::function<double(double)> alpha;
  ExponentField exponent = ExponentField::constant(2.0);
  Interval domain;
  double period = 1.0;
  bool steady = false;
  std::map<std::string, double> metadata;
};

[[nodiscard]] ExactSolution womersley_solution(const WomersleyParams &params);
/// Constant, even or non-even steady solution with Gamma = -1.
[[nodiscard]] ExactSolution steady_solution(const SteadySpec &spec,
                                            double period = 1.0);
[[nodiscard]] ExactSolution steady_noneven(const SteadySpec &spec,
                                           double period = 1.0);

/// (v(t, .), 1) by adaptive quadrature split at the exponent breakpoints.
[[nodiscard]] double flowrate_of(const ExactSolution &solution, double t);

} // namespace smartflow
