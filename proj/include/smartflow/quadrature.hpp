#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace smartflow {

/// Gauss-Legendre rule on the reference interval [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  [[nodiscard]] std::size_t size() const { return nodes.size(); }

  /// Node mapped onto [a, b].
  [[nodiscard]] double node_on(std::size_t q, double a, double b) const {
    return 0.5 * (a + b) + 0.5 * (b - a) * nodes[q];
  }
  /// Weight scaled onto [a, b].
  [[nodiscard]] double weight_on(std::size_t q, double a, double b) const {
    return 0.5 * (b - a) * weights[q];
  }
};

/// n-point Gauss-Legendre rule (exact for polynomials of degree 2n-1).
/// Computed by Newton iteration on the Legendre polynomial; cached per n.
const GaussRule &gauss_legendre(std::size_t n);

/// Integral of f over [a, b] with a fixed n-point rule.
double integrate_gauss(const std::function<double(double)> &f, double a,
                       double b, std::size_t n);

/// Adaptive Gauss-Kronrod integration to the requested relative tolerance.
double integrate_adaptive(const std::function<double(double)> &f, double a,
                          double b, double rel_tol = 1e-12);

} // namespace smartflow
