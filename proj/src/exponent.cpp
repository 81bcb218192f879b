#include "smartflow/exponent.hpp"

#include "smartflow/error.hpp"
#include "smartflow/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace smartflow {

ExponentField ExponentField::constant(double value) {
  ExponentField p;
  p.kind_ = Kind::Constant;
  p.values_ = {value};
  p.p_minus_ = p.p_plus_ = value;
  p.check_bounds();
  return p;
}

ExponentField ExponentField::piecewise(std::vector<double> breakpoints,
                                       std::vector<double> values) {
  if (values.size() != breakpoints.size() + 1)
    throw std::invalid_argument(
        "ExponentField: piecewise needs one more value than breakpoints");
  for (std::size_t i = 1; i < breakpoints.size(); ++i)
    if (!(breakpoints[i] > breakpoints[i - 1]))
      throw std::invalid_argument(
          "ExponentField: breakpoints must be strictly increasing");
  if (breakpoints.empty())
    return constant(values.front());
  ExponentField p;
  p.kind_ = Kind::Piecewise;
  p.breakpoints_ = std::move(breakpoints);
  p.values_ = std::move(values);
  p.p_minus_ = *std::min_element(p.values_.begin(), p.values_.end());
  p.p_plus_ = *std::max_element(p.values_.begin(), p.values_.end());
  p.check_bounds();
  return p;
}

ExponentField ExponentField::sampled(std::function<double(double)> fn,
                                     double p_minus, double p_plus) {
  if (!fn)
    throw std::invalid_argument("ExponentField: empty callable");
  if (p_minus > p_plus)
    throw std::invalid_argument("ExponentField: p_minus > p_plus");
  ExponentField p;
  p.kind_ = Kind::Sampled;
  p.fn_ = std::move(fn);
  p.p_minus_ = p_minus;
  p.p_plus_ = p_plus;
  p.check_bounds();
  return p;
}

ExponentField ExponentField::affine(double c0, double c1,
                                    const Interval &domain) {
  const double a = c0 + c1 * domain.left;
  const double b = c0 + c1 * domain.right;
  ExponentField p =
      sampled([c0, c1](double x) { return c0 + c1 * x; }, std::min(a, b),
              std::max(a, b));
  p.affine_ = std::array<double, 2>{c0, c1};
  return p;
}

void ExponentField::check_bounds() const {
  if (!(p_minus_ > 1.0) || !std::isfinite(p_plus_))
    throw std::invalid_argument("ExponentField: need 1 < p_minus <= p_plus < "
                                "inf, got p_minus = " +
                                std::to_string(p_minus_));
}

double ExponentField::operator()(double x) const {
  switch (kind_) {
  case Kind::Constant:
    return values_.front();
  case Kind::Piecewise: {
    const auto idx = std::lower_bound(breakpoints_.begin(), breakpoints_.end(),
                                      x) -
                     breakpoints_.begin();
    return values_[static_cast<std::size_t>(idx)];
  }
  case Kind::Sampled:
    return fn_(x);
  }
  return values_.front();
}

void ExponentField::check_breakpoints_inside(const Interval &domain) const {
  for (double b : breakpoints_)
    if (!domain.contains_open(b))
      throw std::invalid_argument("ExponentField: breakpoint " +
                                  std::to_string(b) + " outside cross-section");
}

bool operator==(const ExponentField &a, const ExponentField &b) {
  if (a.kind_ != b.kind_)
    return false;
  if (a.kind_ == ExponentField::Kind::Sampled)
    return a.affine_.has_value() && a.affine_ == b.affine_ &&
           a.p_minus_ == b.p_minus_ && a.p_plus_ == b.p_plus_;
  return a.breakpoints_ == b.breakpoints_ && a.values_ == b.values_;
}

ExponentField conjugate(const ExponentField &p) {
  switch (p.kind()) {
  case ExponentField::Kind::Constant:
    return ExponentField::constant(conjugate_value(p.p_minus()));
  case ExponentField::Kind::Piecewise: {
    std::vector<double> vals;
    vals.reserve(p.values().size());
    for (double v : p.values())
      vals.push_back(conjugate_value(v));
    return ExponentField::piecewise(p.breakpoints(), std::move(vals));
  }
  case ExponentField::Kind::Sampled:
    break;
  }
  return ExponentField::sampled(
      [p](double x) { return conjugate_value(p(x)); },
      conjugate_value(p.p_plus()), conjugate_value(p.p_minus()));
}

QuadratureRule QuadratureRule::for_exponent(const ExponentField &p) {
  const auto twice = static_cast<std::size_t>(2.0 * std::ceil(p.p_plus()));
  return {std::max<std::size_t>(6, twice)};
}

void require_aligned(const ExponentField &p, const Mesh1D &mesh) {
  const Interval dom = mesh.domain();
  for (double b : p.breakpoints()) {
    if (!dom.contains_open(b))
      continue;
    if (!mesh.has_vertex(b))
      throw BreakpointMisalignment("exponent breakpoint " + std::to_string(b) +
                                   " lies inside a mesh element");
  }
}

namespace {

struct Samples {
  std::vector<double> abs_f;
  std::vector<double> exponent;
  std::vector<double> weight;

  [[nodiscard]] double modular(double lambda) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < abs_f.size(); ++i)
      if (abs_f[i] > 0.0)
        sum += weight[i] * std::pow(abs_f[i] / lambda, exponent[i]);
    return sum;
  }
};

Samples sample(const ElementIntegrand &f, const ExponentField &p,
               const Mesh1D &mesh, const QuadratureRule &quad) {
  require_aligned(p, mesh);
  const GaussRule &rule = gauss_legendre(quad.points);
  Samples s;
  const std::size_t n = mesh.num_elements() * rule.size();
  s.abs_f.reserve(n);
  s.exponent.reserve(n);
  s.weight.reserve(n);
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const double a = mesh.element_left(e);
    const double b = mesh.element_right(e);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double x = rule.node_on(q, a, b);
      s.abs_f.push_back(std::abs(f(e, x)));
      s.exponent.push_back(p(x));
      s.weight.push_back(rule.weight_on(q, a, b));
    }
  }
  return s;
}

ElementIntegrand lift(const std::function<double(double)> &f) {
  return [&f](std::size_t, double x) { return f(x); };
}

} // namespace

double modular(const ElementIntegrand &f, const ExponentField &p,
               const Mesh1D &mesh, const QuadratureRule &quad) {
  return sample(f, p, mesh, quad).modular(1.0);
}

double modular(const std::function<double(double)> &f, const ExponentField &p,
               const Mesh1D &mesh, const QuadratureRule &quad) {
  return modular(lift(f), p, mesh, quad);
}

double luxembourg_norm(const ElementIntegrand &f, const ExponentField &p,
                       const Mesh1D &mesh, const QuadratureRule &quad,
                       const LuxembourgOptions &opts) {
  const Samples s = sample(f, p, mesh, quad);
  if (std::all_of(s.abs_f.begin(), s.abs_f.end(),
                  [](double v) { return v == 0.0; }))
    return 0.0;

  // rho(f / lambda) is non-increasing in lambda; bracket the crossing of 1.
  double lo = 1.0;
  double hi = 1.0;
  int it = 0;
  if (s.modular(1.0) > 1.0) {
    while (s.modular(hi) > 1.0) {
      lo = hi;
      hi *= 2.0;
      if (++it > opts.max_iterations)
        throw ConvergenceFailure("luxembourg_norm: upper bracket not found");
    }
  } else {
    while (s.modular(lo) <= 1.0) {
      hi = lo;
      lo *= 0.5;
      if (++it > opts.max_iterations)
        throw ConvergenceFailure("luxembourg_norm: lower bracket not found");
    }
  }

  for (it = 0; it < opts.max_iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (s.modular(mid) > 1.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= opts.rel_tol * hi)
      return 0.5 * (lo + hi);
  }
  throw ConvergenceFailure("luxembourg_norm: bisection did not converge");
}

double luxembourg_norm(const std::function<double(double)> &f,
                       const ExponentField &p, const Mesh1D &mesh,
                       const QuadratureRule &quad,
                       const LuxembourgOptions &opts) {
  return luxembourg_norm(lift(f), p, mesh, quad, opts);
}

} // namespace smartflow
