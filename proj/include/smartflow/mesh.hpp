#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace smartflow {

/// Open interval (left, right) used as the pipe cross-section.
struct Interval {
  double left = -1.0;
  double right = 1.0;

  Interval() = default;
  Interval(double l, double r);

  [[nodiscard]] double length() const { return right - left; }
  [[nodiscard]] double center() const { return 0.5 * (left + right); }
  [[nodiscard]] bool contains_open(double x) const {
    return x > left && x < right;
  }

  /// Symmetric cross-section (-r, r).
  static Interval symmetric(double radius);

  friend bool operator==(const Interval &, const Interval &) = default;
};

/// Partition of an interval into elements by strictly increasing vertices.
class Mesh1D {
public:
  explicit Mesh1D(std::vector<double> vertices);

  [[nodiscard]] std::span<const double> vertices() const { return vertices_; }
  [[nodiscard]] std::size_t num_elements() const {
    return vertices_.size() - 1;
  }
  [[nodiscard]] double element_left(std::size_t e) const {
    return vertices_[e];
  }
  [[nodiscard]] double element_right(std::size_t e) const {
    return vertices_[e + 1];
  }
  [[nodiscard]] double element_length(std::size_t e) const {
    return vertices_[e + 1] - vertices_[e];
  }
  [[nodiscard]] double h_max() const { return h_max_; }
  [[nodiscard]] Interval domain() const {
    return {vertices_.front(), vertices_.back()};
  }

  /// True when x coincides with a vertex up to a relative tolerance.
  [[nodiscard]] bool has_vertex(double x, double tol = 1e-12) const;

  /// Element containing x (the left one when x is an interior vertex).
  [[nodiscard]] std::size_t locate(double x) const;

private:
  std::vector<double> vertices_;
  double h_max_ = 0.0;
};

/// Uniform partition of `domain` into `n_elements` pieces, with the given
/// breakpoints inserted as additional vertices.
/// Throws std::invalid_argument when a breakpoint lies outside the domain.
Mesh1D uniform_mesh(const Interval &domain, std::size_t n_elements,
                    std::span<const double> breakpoints = {});

} // namespace smartflow
