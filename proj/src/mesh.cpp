#include "smartflow/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace smartflow {

Interval::Interval(double l, double r) : left(l), right(r) {
  if (!(l < r))
    throw std::invalid_argument("Interval: left must be < right");
}

Interval Interval::symmetric(double radius) {
  if (!(radius > 0.0))
    throw std::invalid_argument("Interval: radius must be positive");
  return {-radius, radius};
}

Mesh1D::Mesh1D(std::vector<double> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 2)
    throw std::invalid_argument("Mesh1D: need at least two vertices");
  for (std::size_t i = 1; i < vertices_.size(); ++i) {
    const double h = vertices_[i] - vertices_[i - 1];
    if (!(h > 0.0))
      throw std::invalid_argument("Mesh1D: vertices must be strictly increasing");
    h_max_ = std::max(h_max_, h);
  }
}

bool Mesh1D::has_vertex(double x, double tol) const {
  const double scale = tol * std::max(1.0, domain().length());
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), x - scale);
  return it != vertices_.end() && std::abs(*it - x) <= scale;
}

std::size_t Mesh1D::locate(double x) const {
  auto it = std::lower_bound(vertices_.begin() + 1, vertices_.end(), x);
  if (it == vertices_.end())
    return num_elements() - 1;
  return static_cast<std::size_t>(it - vertices_.begin()) - 1;
}

Mesh1D uniform_mesh(const Interval &domain, std::size_t n_elements,
                    std::span<const double> breakpoints) {
  if (n_elements == 0)
    throw std::invalid_argument("uniform_mesh: n_elements must be >= 1");
  std::vector<double> v(n_elements + 1);
  const double h = domain.length() / static_cast<double>(n_elements);
  for (std::size_t i = 0; i <= n_elements; ++i)
    v[i] = domain.left + h * static_cast<double>(i);
  v.back() = domain.right;

  const double tol = 1e-12 * std::max(1.0, domain.length());
  for (double b : breakpoints) {
    if (!domain.contains_open(b))
      throw std::invalid_argument("uniform_mesh: breakpoint " +
                                  std::to_string(b) + " outside domain");
    auto it = std::lower_bound(v.begin(), v.end(), b - tol);
    if (it != v.end() && std::abs(*it - b) <= tol) {
      *it = b;
      continue;
    }
    v.insert(it, b);
  }
  return Mesh1D(std::move(v));
}

} // namespace smartflow
