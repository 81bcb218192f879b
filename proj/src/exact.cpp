#include "smartflow/exact.hpp"

#include "smartflow/error.hpp"
#include "smartflow/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace smartflow {

using cplx = std::complex<double>;

double WomersleyParams::period() const { return 2.0 * std::numbers::pi; }

void WomersleyParams::validate() const {
  if (!(radius > 0.0))
    throw std::invalid_argument("WomersleyParams: radius must be positive");
  if (omega == 0)
    throw std::invalid_argument("WomersleyParams: omega must be nonzero");
}

namespace {

struct WomersleyTerms {
  cplx k;
  cplx c;     // i / (omega (1 + e^{-2kr}))
  cplx decay; // e^{-2kr}
};

WomersleyTerms womersley_terms(const WomersleyParams &p) {
  const cplx k = std::sqrt(cplx(0.0, static_cast<double>(p.omega)));
  const cplx decay = std::exp(-2.0 * k * p.radius);
  const cplx c = cplx(0.0, 1.0) / (static_cast<double>(p.omega) * (1.0 + decay));
  return {k, c, decay};
}

// Spatial factor c * g(x), scaled by e^{-2kr} for stability.
cplx womersley_shape(const WomersleyParams &p, const WomersleyTerms &w,
                     double x) {
  const double r = p.radius;
  return w.c * (std::exp(-w.k * (r + x)) + std::exp(-w.k * (r - x)) - 1.0 -
                w.decay);
}

cplx womersley_shape_dx(const WomersleyParams &p, const WomersleyTerms &w,
                        double x) {
  const double r = p.radius;
  return w.c * w.k * (std::exp(-w.k * (r - x)) - std::exp(-w.k * (r + x)));
}

cplx phase(const WomersleyParams &p, double t) {
  return std::exp(cplx(0.0, static_cast<double>(p.omega) * t));
}

} // namespace

double womersley(const WomersleyParams &params, double t, double x) {
  const auto w = womersley_terms(params);
  return -(phase(params, t) * womersley_shape(params, w, x)).real();
}

double womersley_dx(const WomersleyParams &params, double t, double x) {
  const auto w = womersley_terms(params);
  return -(phase(params, t) * womersley_shape_dx(params, w, x)).real();
}

double womersley_flowrate(const WomersleyParams &params, double t) {
  params.validate();
  const auto w = womersley_terms(params);
  const double r = params.radius;
  const double re = integrate_adaptive(
      [&](double x) { return womersley_shape(params, w, x).real(); }, -r, r,
      1e-12);
  const double im = integrate_adaptive(
      [&](double x) { return womersley_shape(params, w, x).imag(); }, -r, r,
      1e-12);
  return -(phase(params, t) * cplx(re, im)).real();
}

double steady_constant(double p, double r, double x) {
  const double q = conjugate_value(p);
  return (std::pow(r, q) - std::pow(std::abs(x), q)) / q;
}

SteadySpec SteadySpec::constant(double p, double radius) {
  SteadySpec s;
  s.variant = Variant::Constant;
  s.p = p;
  s.radius = radius;
  s.validate();
  return s;
}

SteadySpec SteadySpec::even(std::vector<double> shell_radii,
                            std::vector<double> shell_exponents,
                            double radius) {
  SteadySpec s;
  s.variant = Variant::Even;
  s.shell_radii = std::move(shell_radii);
  s.shell_exponents = std::move(shell_exponents);
  s.radius = radius;
  s.validate();
  return s;
}

SteadySpec SteadySpec::noneven(double zeta, double p_left, double p_right,
                               double radius) {
  SteadySpec s;
  s.variant = Variant::NonEven;
  s.zeta = zeta;
  s.p_left = p_left;
  s.p_right = p_right;
  s.radius = radius;
  s.validate();
  return s;
}

void SteadySpec::validate() const {
  if (!(radius > 0.0))
    throw std::invalid_argument("SteadySpec: radius must be positive");
  auto check_p = [](double q) {
    if (!(q > 1.0) || !std::isfinite(q))
      throw std::invalid_argument("SteadySpec: exponents must exceed 1");
  };
  switch (variant) {
  case Variant::Constant:
    check_p(p);
    break;
  case Variant::Even: {
    if (shell_exponents.size() != shell_radii.size() + 1)
      throw std::invalid_argument(
          "SteadySpec: even variant needs one more exponent than radii");
    double prev = radius;
    for (double rho : shell_radii) {
      if (!(rho > 0.0 && rho < prev))
        throw std::invalid_argument(
            "SteadySpec: shell radii must decrease strictly inside (0, r)");
      prev = rho;
    }
    for (double q : shell_exponents)
      check_p(q);
    break;
  }
  case Variant::NonEven:
    if (!(zeta > -radius && zeta < radius))
      throw std::invalid_argument("SteadySpec: zeta must lie in (-r, r)");
    check_p(p_left);
    check_p(p_right);
    break;
  }
}

ExponentField SteadySpec::exponent() const {
  switch (variant) {
  case Variant::Constant:
    return ExponentField::constant(p);
  case Variant::Even: {
    if (shell_radii.empty())
      return ExponentField::constant(shell_exponents.front());
    std::vector<double> bps;
    std::vector<double> vals;
    const std::size_t n = shell_exponents.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      bps.push_back(-shell_radii[i]);
      vals.push_back(shell_exponents[i]);
    }
    vals.push_back(shell_exponents[n - 1]);
    for (std::size_t i = n - 1; i-- > 0;) {
      bps.push_back(shell_radii[i]);
      vals.push_back(shell_exponents[i]);
    }
    return ExponentField::piecewise(std::move(bps), std::move(vals));
  }
  case Variant::NonEven:
    if (p_left == p_right)
      return ExponentField::constant(p_left);
    return ExponentField::piecewise({zeta}, {p_left, p_right});
  }
  return ExponentField::constant(2.0);
}

namespace {

// Shell index (0-based, from the wall) containing |x| = y.
std::size_t shell_of(const SteadySpec &s, double y) {
  std::size_t i = 0;
  while (i < s.shell_radii.size() && y < s.shell_radii[i])
    ++i;
  return i;
}

std::vector<double> even_offsets(const SteadySpec &s) {
  const auto &ps = s.shell_exponents;
  std::vector<double> b(ps.size());
  double q = conjugate_value(ps[0]);
  b[0] = std::pow(s.radius, q) / q;
  for (std::size_t i = 1; i < ps.size(); ++i) {
    const double z = s.shell_radii[i - 1];
    const double qp = conjugate_value(ps[i - 1]);
    const double qi = conjugate_value(ps[i]);
    b[i] = -std::pow(z, qp) / qp + b[i - 1] + std::pow(z, qi) / qi;
  }
  return b;
}

double even_value(const SteadySpec &s, const std::vector<double> &b, double x) {
  const double y = std::abs(x);
  const std::size_t i = shell_of(s, y);
  const double q = conjugate_value(s.shell_exponents[i]);
  return -std::pow(y, q) / q + b[i];
}

double even_dx(const SteadySpec &s, double x) {
  const double y = std::abs(x);
  const double q = conjugate_value(s.shell_exponents[shell_of(s, y)]);
  const double g = std::pow(y, q - 1.0);
  return x > 0.0 ? -g : (x < 0.0 ? g : 0.0);
}

double signed_pow(double z, double e) {
  const double g = std::pow(std::abs(z), e);
  return z > 0.0 ? g : (z < 0.0 ? -g : 0.0);
}

double noneven_residual(const SteadySpec &s, double a) {
  const double q1 = conjugate_value(s.p_left);
  const double q2 = conjugate_value(s.p_right);
  const double r = s.radius;
  const double z = s.zeta;
  const double lhs =
      -std::pow(std::abs(z - a), q1) / q1 + std::pow(std::abs(r + a), q1) / q1;
  const double rhs =
      -std::pow(std::abs(z - a), q2) / q2 + std::pow(std::abs(r - a), q2) / q2;
  return lhs - rhs;
}

} // namespace

double steady_even(const SteadySpec &spec, double x) {
  if (spec.variant == SteadySpec::Variant::Constant)
    return steady_constant(spec.p, spec.radius, x);
  if (spec.variant != SteadySpec::Variant::Even)
    throw std::invalid_argument("steady_even: spec is not even");
  return even_value(spec, even_offsets(spec), x);
}

double noneven_shift(const SteadySpec &spec) {
  if (spec.variant != SteadySpec::Variant::NonEven)
    throw std::invalid_argument("noneven_shift: spec is not non-even");
  spec.validate();
  const double lo = -spec.radius + 1e-6;
  const double hi = spec.radius - 1e-6;
  constexpr int kScan = 1000;
  double a0 = lo;
  double f0 = noneven_residual(spec, a0);
  for (int i = 1; i <= kScan; ++i) {
    const double a1 = lo + (hi - lo) * i / kScan;
    const double f1 = noneven_residual(spec, a1);
    if (f0 == 0.0)
      return a0;
    if (f1 == 0.0)
      return a1;
    if ((f0 < 0.0) != (f1 < 0.0)) {
      double l = a0;
      double h = a1;
      double fl = f0;
      while (h - l > 1e-12) {
        const double mid = 0.5 * (l + h);
        const double fm = noneven_residual(spec, mid);
        if (fm == 0.0)
          return mid;
        if ((fm < 0.0) == (fl < 0.0)) {
          l = mid;
          fl = fm;
        } else {
          h = mid;
        }
      }
      return 0.5 * (l + h);
    }
    a0 = a1;
    f0 = f1;
  }
  throw BracketFailure("noneven_shift: no sign change of the continuity "
                       "residual inside (-r, r)");
}

namespace {

std::vector<double> split_points(const ExactSolution &s) {
  std::vector<double> pts{s.domain.left};
  for (double b : s.exponent.breakpoints())
    pts.push_back(b);
  pts.push_back(0.5 * (s.domain.left + s.domain.right));
  if (auto it = s.metadata.find("a"); it != s.metadata.end())
    pts.push_back(it->second);
  pts.push_back(s.domain.right);
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  for (double p : pts) {
    if (p < s.domain.left || p > s.domain.right)
      continue;
    if (out.empty() || p - out.back() > 1e-14)
      out.push_back(p);
  }
  return out;
}

} // namespace

double flowrate_of(const ExactSolution &solution, double t) {
  const auto pts = split_points(solution);
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    sum += integrate_adaptive([&](double x) { return solution.v(t, x); },
                              pts[i], pts[i + 1], 1e-13);
  return sum;
}

ExactSolution womersley_solution(const WomersleyParams &params) {
  params.validate();
  ExactSolution s;
  s.v = [params](double t, double x) { return womersley(params, t, x); };
  s.dv = [params](double t, double x) { return womersley_dx(params, t, x); };
  const double omega = params.omega;
  s.gamma = [omega](double t) { return std::cos(omega * t); };
  // alpha(t) = Re[e^{i omega t} Q]; Q integrated once.
  const auto w = womersley_terms(params);
  const double r = params.radius;
  const double re = integrate_adaptive(
      [&](double x) { return womersley_shape(params, w, x).real(); }, -r, r,
      1e-12);
  const double im = integrate_adaptive(
      [&](double x) { return womersley_shape(params, w, x).imag(); }, -r, r,
      1e-12);
  const cplx q(re, im);
  s.alpha = [params, q](double t) { return -(phase(params, t) * q).real(); };
  s.exponent = ExponentField::constant(2.0);
  s.domain = Interval::symmetric(r);
  s.period = params.period();
  s.steady = false;
  s.metadata["radius"] = r;
  s.metadata["omega"] = omega;
  return s;
}

ExactSolution steady_noneven(const SteadySpec &spec, double period) {
  if (spec.variant != SteadySpec::Variant::NonEven)
    throw std::invalid_argument("steady_noneven: spec is not non-even");
  const double a = noneven_shift(spec);
  const double q1 = conjugate_value(spec.p_left);
  const double q2 = conjugate_value(spec.p_right);
  const double r = spec.radius;
  const double z = spec.zeta;
  ExactSolution s;
  s.v = [=](double, double x) {
    if (x <= z)
      return (std::pow(std::abs(r + a), q1) - std::pow(std::abs(a - x), q1)) / q1;
    return (std::pow(std::abs(r - a), q2) - std::pow(std::abs(a - x), q2)) / q2;
  };
  s.dv = [=](double, double x) {
    return -signed_pow(x - a, (x <= z ? q1 : q2) - 1.0);
  };
  s.gamma = [](double) { return -1.0; };
  s.exponent = spec.exponent();
  s.domain = Interval::symmetric(r);
  s.period = period;
  s.steady = true;
  s.metadata["a"] = a;
  const double alpha = flowrate_of(s, 0.0);
  s.alpha = [alpha](double) { return alpha; };
  s.metadata["alpha"] = alpha;
  s.metadata["gamma"] = -1.0;
  return s;
}

ExactSolution steady_solution(const SteadySpec &spec, double period) {
  spec.validate();
  if (spec.variant == SteadySpec::Variant::NonEven)
    return steady_noneven(spec, period);
  ExactSolution s;
  if (spec.variant == SteadySpec::Variant::Constant) {
    const double p = spec.p;
    const double r = spec.radius;
    const double q = conjugate_value(p);
    s.v = [p, r](double, double x) { return steady_constant(p, r, x); };
    s.dv = [q](double, double x) { return -signed_pow(x, q - 1.0); };
  } else {
    const auto b = even_offsets(spec);
    s.v = [spec, b](double, double x) { return even_value(spec, b, x); };
    s.dv = [spec](double, double x) { return even_dx(spec, x); };
  }
  s.gamma = [](double) { return -1.0; };
  s.exponent = spec.exponent();
  s.domain = Interval::symmetric(spec.radius);
  s.period = period;
  s.steady = true;
  const double alpha = flowrate_of(s, 0.0);
  s.alpha = [alpha](double) { return alpha; };
  s.metadata["alpha"] = alpha;
  s.metadata["gamma"] = -1.0;
  return s;
}

} // namespace smartflow
