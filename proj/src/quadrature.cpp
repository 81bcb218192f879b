#include "smartflow/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace smartflow {

namespace {

GaussRule build_rule(std::size_t n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Tricomi initial guess for the i-th root.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 1 ? x : p1;
      const double pnm1 = n == 1 ? 1.0 : p0;
      dp = static_cast<double>(n) * (x * pn - pnm1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
        break;
    }
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

} // namespace

const GaussRule &gauss_legendre(std::size_t n) {
  if (n == 0)
    throw std::invalid_argument("gauss_legendre: n must be positive");
  static std::mutex mutex;
  static std::map<std::size_t, GaussRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end())
    it = cache.emplace(n, build_rule(n)).first;
  return it->second;
}

double integrate_gauss(const std::function<double(double)> &f, double a,
                       double b, std::size_t n) {
  const GaussRule &rule = gauss_legendre(n);
  double sum = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q)
    sum += rule.weight_on(q, a, b) * f(rule.node_on(q, a, b));
  return sum;
}

double integrate_adaptive(const std::function<double(double)> &f, double a,
                          double b, double rel_tol) {
  if (a == b)
    return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, a, b, 20, rel_tol);
}

} // namespace smartflow
