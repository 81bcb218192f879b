#pragma once

#include "smartflow/banded.hpp"
#include "smartflow/exponent.hpp"
#include "smartflow/mesh.hpp"
#include "smartflow/stress.hpp"

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

namespace smartflow {

/// Continuous P_l Lagrange space (l = 1 or 2) on a 1D mesh with zero
/// boundary values. Degrees of freedom are the interior nodes ordered by
/// coordinate, so element matrices occupy a band of half-width l.
class FeSpace {
public:
  FeSpace(Mesh1D mesh, int degree);

  [[nodiscard]] static std::shared_ptr<const FeSpace> make(Mesh1D mesh,
                                                           int degree = 1) {
    return std::make_shared<const FeSpace>(std::move(mesh), degree);
  }

  [[nodiscard]] const Mesh1D &mesh() const { return mesh_; }
  [[nodiscard]] int degree() const { return degree_; }
  [[nodiscard]] bool zero_boundary() const { return true; }
  [[nodiscard]] std::size_t num_dofs() const { return num_dofs_; }
  [[nodiscard]] std::size_t nodes_per_element() const {
    return static_cast<std::size_t>(degree_) + 1;
  }

  /// Interior dof index of local node j of element e, or -1 on the boundary.
  [[nodiscard]] std::ptrdiff_t dof(std::size_t e, std::size_t j) const;
  [[nodiscard]] const std::vector<double> &dof_coordinates() const {
    return coords_;
  }

  /// Reference basis on [-1, 1] at xi.
  [[nodiscard]] std::array<double, 3> shape(double xi) const;
  /// Reference basis derivative d/dxi at xi.
  [[nodiscard]] std::array<double, 3> shape_derivative(double xi) const;

private:
  Mesh1D mesh_;
  int degree_;
  std::size_t num_dofs_;
  std::vector<double> coords_;
};

using FeSpacePtr = std::shared_ptr<const FeSpace>;

/// Finite element function: coefficients over the interior dofs of a space.
class FeFunction {
public:
  explicit FeFunction(FeSpacePtr space);
  FeFunction(FeSpacePtr space, std::vector<double> coefficients);

  [[nodiscard]] const FeSpacePtr &space() const { return space_; }
  [[nodiscard]] const std::vector<double> &coefficients() const {
    return coeffs_;
  }
  [[nodiscard]] std::vector<double> &coefficients() { return coeffs_; }

  /// Value / derivative on element e at reference coordinate xi.
  [[nodiscard]] double value_ref(std::size_t e, double xi) const;
  [[nodiscard]] double gradient_ref(std::size_t e, double xi) const;
  /// Value / derivative on element e at physical coordinate x.
  [[nodiscard]] double value(std::size_t e, double x) const;
  [[nodiscard]] double gradient(std::size_t e, double x) const;
  /// Value at x (locates the element).
  [[nodiscard]] double operator()(double x) const;

  FeFunction &operator+=(const FeFunction &o);
  FeFunction &operator-=(const FeFunction &o);
  FeFunction &operator*=(double c);
  friend FeFunction operator+(FeFunction a, const FeFunction &b) {
    return a += b;
  }
  friend FeFunction operator-(FeFunction a, const FeFunction &b) {
    return a -= b;
  }
  friend FeFunction operator*(double c, FeFunction a) { return a *= c; }

private:
  [[nodiscard]] double reference_coordinate(std::size_t e, double x) const;

  FeSpacePtr space_;
  std::vector<double> coeffs_;
};

/// M_ij = (phi_i, phi_j)_Sigma.
[[nodiscard]] SymBandMatrix assemble_mass(const FeSpace &space);
/// K_ij = (phi_i', phi_j')_Sigma.
[[nodiscard]] SymBandMatrix assemble_stiffness(const FeSpace &space);
/// b_i = (phi_i, 1)_Sigma.
[[nodiscard]] std::vector<double> assemble_flux_vector(const FeSpace &space);

/// Frozen-coefficient form A(w)_ij = (nu(., |w'|^2) phi_j', phi_i')_Sigma.
[[nodiscard]] SymBandMatrix assemble_nonlinear_form(const FeSpace &space,
                                                    const StressModel &model,
                                                    const FeFunction &w);
/// r_i = (s(., v'), phi_i')_Sigma evaluated with the exact stress.
[[nodiscard]] std::vector<double> residual_stress(const FeSpace &space,
                                                  const StressModel &model,
                                                  const FeFunction &v);

/// Nodal interpolation with zero boundary values.
[[nodiscard]] FeFunction project_pi_h(const FeSpacePtr &space,
                                      const std::function<double(double)> &chi);

/// Normalized lifting chi_h = Pi_h chi / (Pi_h chi, 1)_Sigma.
struct ChiH {
  FeFunction function;
  double normalization; ///< (Pi_h chi, 1)_Sigma before scaling
};

/// Throws NormalizationError when (Pi_h chi, 1)_Sigma <= 0.
[[nodiscard]] ChiH build_chi_h(const FeSpacePtr &space,
                               const std::function<double(double)> &chi);

/// Hat (1/R)(1 - |x - c|/R) centred on the domain with half-width R; unit
/// integral and zero trace.
[[nodiscard]] std::function<double(double)> default_chi(const Interval &domain);

/// (u, w)_Sigma via the mass matrix.
[[nodiscard]] double l2_inner(const SymBandMatrix &mass, const FeFunction &u,
                              const FeFunction &w);
[[nodiscard]] double l2_norm(const SymBandMatrix &mass, const FeFunction &u);

/// Per-element quadrature size for the model's nonlinear terms.
[[nodiscard]] std::size_t stress_quadrature_points(const StressModel &model,
                                                   int degree);

} // namespace smartflow
