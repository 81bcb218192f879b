#include "smartflow/stress.hpp"

#include "smartflow/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace smartflow {

StressModel::StressModel(ExponentField p, double delta,
                         double regularization_eps)
    : p_(std::move(p)), delta_(delta), eps_(regularization_eps) {
  if (!(delta_ >= 0.0) || !std::isfinite(delta_))
    throw std::invalid_argument("StressModel: delta must be >= 0");
  if (!(eps_ > 0.0))
    throw std::invalid_argument("StressModel: regularization_eps must be > 0");
  if (delta_ > 0.0) {
    kappa1_ = std::min(1.0, std::pow(2.0, p_.p_minus() - 2.0));
    if (p_.p_plus() > 2.0)
      kappa3_ = 2.0 * std::max(1.0, std::pow(2.0, p_.p_plus() - 3.0));
  }
}

double StressModel::kappa2(double x) const {
  const double q = p_(x);
  if (delta_ == 0.0 || q >= 2.0)
    return 0.0;
  return std::pow(2.0, q - 2.0) * std::pow(delta_, q);
}

double StressModel::kappa4(double x) const {
  const double q = p_(x);
  if (delta_ == 0.0 || q <= 2.0)
    return 0.0;
  return std::max(1.0, std::pow(2.0, q - 3.0)) * std::pow(delta_, q - 1.0);
}

double StressModel::young_constant(double q, double eps) const {
  const double qc = conjugate_value(q);
  const double young = std::pow(eps * q, -qc / q) / qc;
  return young * std::pow(2.0, qc - 1.0) *
         std::max(1.0, std::pow(kappa3_, qc));
}

double StressModel::young_constant(double eps) const {
  double c = 0.0;
  constexpr int kSamples = 256;
  for (int i = 0; i <= kSamples; ++i) {
    const double q = p_.p_minus() + (p_.p_plus() - p_.p_minus()) * i / kSamples;
    c = std::max(c, young_constant(q, eps));
  }
  return c;
}

double StressModel::viscosity(double x, double t) const {
  const double q = p_(x);
  double r = std::sqrt(std::max(t, 0.0));
  if (delta_ == 0.0 && q < 2.0)
    r = std::max(r, eps_);
  return std::pow(delta_ + r, q - 2.0);
}

double StressModel::stress(double x, double a) const {
  if (a == 0.0)
    return 0.0;
  return viscosity(x, a * a) * a;
}

double StressModel::potential_v(double x, double t) const {
  if (t <= 0.0)
    return 0.0;
  const double q = p_(x);
  const double s = std::sqrt(t);
  if (delta_ == 0.0) {
    if (q < 2.0) {
      // nu is constant eps^{q-2} below the clamp.
      const double e = eps_;
      if (s <= e)
        return t * std::pow(e, q - 2.0);
      return std::pow(e, q) + 2.0 / q * (std::pow(s, q) - std::pow(e, q));
    }
    return 2.0 / q * std::pow(s, q);
  }
  // V = 2 int_0^s (delta + u)^{q-2} u du.
  if (s <= delta_) {
    const double d = delta_;
    return 2.0 * integrate_gauss(
                     [d, q](double u) { return std::pow(d + u, q - 2.0) * u; },
                     0.0, s, 16);
  }
  auto prim = [this, q](double w) {
    return std::pow(w, q) / q - delta_ * std::pow(w, q - 1.0) / (q - 1.0);
  };
  return 2.0 * (prim(delta_ + s) - prim(delta_));
}

double StressModel::potential_u(double x, double a) const {
  return potential_v(x, a * a);
}

double StressModel::natural_f(double x, double a) const {
  if (a == 0.0)
    return 0.0;
  return std::copysign(std::pow(std::abs(a), 0.5 * p_(x)), a);
}

double StressModel::shifted_conjugate(double x, double shift, double t) const {
  if (t <= 0.0)
    return 0.0;
  const double q = p_(x);
  const double qc = conjugate_value(q);
  return std::pow(std::pow(shift, q - 1.0) + t, qc - 2.0) * t * t;
}

double StressModel::monotonicity_gap(double x, double a, double b) const {
  return (stress(x, a) - stress(x, b)) * (a - b);
}

} // namespace smartflow
