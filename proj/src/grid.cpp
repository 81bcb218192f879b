#include "smartflow/grid.hpp"

#include "smartflow/error.hpp"
#include "smartflow/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace smartflow {

FeSpace::FeSpace(Mesh1D mesh, int degree)
    : mesh_(std::move(mesh)), degree_(degree) {
  if (degree_ != 1 && degree_ != 2)
    throw std::invalid_argument("FeSpace: only degrees 1 and 2 are supported");
  const std::size_t ne = mesh_.num_elements();
  num_dofs_ = static_cast<std::size_t>(degree_) * ne - 1;
  coords_.reserve(num_dofs_);
  for (std::size_t e = 0; e < ne; ++e) {
    const double a = mesh_.element_left(e);
    const double b = mesh_.element_right(e);
    if (e > 0)
      coords_.push_back(a);
    if (degree_ == 2)
      coords_.push_back(0.5 * (a + b));
  }
}

std::ptrdiff_t FeSpace::dof(std::size_t e, std::size_t j) const {
  const auto global = static_cast<std::ptrdiff_t>(
      static_cast<std::size_t>(degree_) * e + j);
  const auto idx = global - 1;
  if (idx < 0 || idx >= static_cast<std::ptrdiff_t>(num_dofs_))
    return -1;
  return idx;
}

std::array<double, 3> FeSpace::shape(double xi) const {
  if (degree_ == 1)
    return {0.5 * (1.0 - xi), 0.5 * (1.0 + xi), 0.0};
  return {0.5 * xi * (xi - 1.0), 1.0 - xi * xi, 0.5 * xi * (xi + 1.0)};
}

std::array<double, 3> FeSpace::shape_derivative(double xi) const {
  if (degree_ == 1)
    return {-0.5, 0.5, 0.0};
  return {xi - 0.5, -2.0 * xi, xi + 0.5};
}

FeFunction::FeFunction(FeSpacePtr space)
    : space_(std::move(space)), coeffs_(space_->num_dofs(), 0.0) {}

FeFunction::FeFunction(FeSpacePtr space, std::vector<double> coefficients)
    : space_(std::move(space)), coeffs_(std::move(coefficients)) {
  if (coeffs_.size() != space_->num_dofs())
    throw std::invalid_argument("FeFunction: coefficient length mismatch");
}

double FeFunction::value_ref(std::size_t e, double xi) const {
  const auto n = space_->shape(xi);
  double v = 0.0;
  for (std::size_t j = 0; j < space_->nodes_per_element(); ++j) {
    const auto d = space_->dof(e, j);
    if (d >= 0)
      v += coeffs_[static_cast<std::size_t>(d)] * n[j];
  }
  return v;
}

double FeFunction::gradient_ref(std::size_t e, double xi) const {
  const auto dn = space_->shape_derivative(xi);
  double g = 0.0;
  for (std::size_t j = 0; j < space_->nodes_per_element(); ++j) {
    const auto d = space_->dof(e, j);
    if (d >= 0)
      g += coeffs_[static_cast<std::size_t>(d)] * dn[j];
  }
  return g * 2.0 / space_->mesh().element_length(e);
}

double FeFunction::reference_coordinate(std::size_t e, double x) const {
  const Mesh1D &m = space_->mesh();
  return 2.0 * (x - m.element_left(e)) / m.element_length(e) - 1.0;
}

double FeFunction::value(std::size_t e, double x) const {
  return value_ref(e, reference_coordinate(e, x));
}

double FeFunction::gradient(std::size_t e, double x) const {
  return gradient_ref(e, reference_coordinate(e, x));
}

double FeFunction::operator()(double x) const {
  return value(space_->mesh().locate(x), x);
}

FeFunction &FeFunction::operator+=(const FeFunction &o) {
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    coeffs_[i] += o.coeffs_[i];
  return *this;
}

FeFunction &FeFunction::operator-=(const FeFunction &o) {
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    coeffs_[i] -= o.coeffs_[i];
  return *this;
}

FeFunction &FeFunction::operator*=(double c) {
  for (double &v : coeffs_)
    v *= c;
  return *this;
}

namespace {

// Assembles a symmetric element operator given the integrand kernel
// k(e, x, N, dN/dx, i, j) summed over Gauss points.
template <typename Kernel>
SymBandMatrix assemble(const FeSpace &space, std::size_t points,
                       Kernel &&kernel) {
  const Mesh1D &mesh = space.mesh();
  SymBandMatrix a(space.num_dofs(), static_cast<std::size_t>(space.degree()));
  const GaussRule &rule = gauss_legendre(points);
  const std::size_t nloc = space.nodes_per_element();
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const double xl = mesh.element_left(e);
    const double xr = mesh.element_right(e);
    const double jac = 2.0 / (xr - xl);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double x = rule.node_on(q, xl, xr);
      const double w = rule.weight_on(q, xl, xr);
      const auto n = space.shape(rule.nodes[q]);
      auto dn = space.shape_derivative(rule.nodes[q]);
      for (auto &d : dn)
        d *= jac;
      const double c = kernel.coefficient(e, x);
      for (std::size_t i = 0; i < nloc; ++i) {
        const auto di = space.dof(e, i);
        if (di < 0)
          continue;
        for (std::size_t j = 0; j <= i; ++j) {
          const auto dj = space.dof(e, j);
          if (dj < 0)
            continue;
          a.add(static_cast<std::size_t>(di), static_cast<std::size_t>(dj),
                w * c * kernel.pair(n, dn, i, j));
        }
      }
    }
  }
  return a;
}

struct MassKernel {
  double coefficient(std::size_t, double) const { return 1.0; }
  double pair(const std::array<double, 3> &n, const std::array<double, 3> &,
              std::size_t i, std::size_t j) const {
    return n[i] * n[j];
  }
};

struct DiffusionKernel {
  std::function<double(std::size_t, double)> nu;
  double coefficient(std::size_t e, double x) const { return nu(e, x); }
  double pair(const std::array<double, 3> &, const std::array<double, 3> &dn,
              std::size_t i, std::size_t j) const {
    return dn[i] * dn[j];
  }
};

} // namespace

std::size_t stress_quadrature_points(const StressModel &model, int degree) {
  return std::max<std::size_t>(QuadratureRule::for_exponent(model.exponent())
                                   .points,
                               static_cast<std::size_t>(degree) + 2);
}

SymBandMatrix assemble_mass(const FeSpace &space) {
  return assemble(space, static_cast<std::size_t>(space.degree()) + 2,
                  MassKernel{});
}

SymBandMatrix assemble_stiffness(const FeSpace &space) {
  return assemble(space, static_cast<std::size_t>(space.degree()) + 1,
                  DiffusionKernel{[](std::size_t, double) { return 1.0; }});
}

std::vector<double> assemble_flux_vector(const FeSpace &space) {
  const Mesh1D &mesh = space.mesh();
  std::vector<double> b(space.num_dofs(), 0.0);
  const GaussRule &rule =
      gauss_legendre(static_cast<std::size_t>(space.degree()) + 1);
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const double xl = mesh.element_left(e);
    const double xr = mesh.element_right(e);
    if (!(xr > xl))
      throw std::invalid_argument("assemble_flux_vector: zero-measure element");
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto n = space.shape(rule.nodes[q]);
      const double w = rule.weight_on(q, xl, xr);
      for (std::size_t i = 0; i < space.nodes_per_element(); ++i) {
        const auto di = space.dof(e, i);
        if (di >= 0)
          b[static_cast<std::size_t>(di)] += w * n[i];
      }
    }
  }
  return b;
}

SymBandMatrix assemble_nonlinear_form(const FeSpace &space,
                                      const StressModel &model,
                                      const FeFunction &w) {
  require_aligned(model.exponent(), space.mesh());
  DiffusionKernel k{[&](std::size_t e, double x) {
    const double g = w.gradient(e, x);
    return model.viscosity(x, g * g);
  }};
  return assemble(space, stress_quadrature_points(model, space.degree()), k);
}

std::vector<double> residual_stress(const FeSpace &space,
                                    const StressModel &model,
                                    const FeFunction &v) {
  require_aligned(model.exponent(), space.mesh());
  const Mesh1D &mesh = space.mesh();
  std::vector<double> r(space.num_dofs(), 0.0);
  const GaussRule &rule =
      gauss_legendre(stress_quadrature_points(model, space.degree()));
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const double xl = mesh.element_left(e);
    const double xr = mesh.element_right(e);
    const double jac = 2.0 / (xr - xl);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double x = rule.node_on(q, xl, xr);
      const double w = rule.weight_on(q, xl, xr);
      const double s = model.stress(x, v.gradient_ref(e, rule.nodes[q]));
      const auto dn = space.shape_derivative(rule.nodes[q]);
      for (std::size_t i = 0; i < space.nodes_per_element(); ++i) {
        const auto di = space.dof(e, i);
        if (di >= 0)
          r[static_cast<std::size_t>(di)] += w * s * dn[i] * jac;
      }
    }
  }
  return r;
}

FeFunction project_pi_h(const FeSpacePtr &space,
                        const std::function<double(double)> &chi) {
  std::vector<double> c;
  c.reserve(space->num_dofs());
  for (double x : space->dof_coordinates())
    c.push_back(chi(x));
  return FeFunction(space, std::move(c));
}

ChiH build_chi_h(const FeSpacePtr &space,
                 const std::function<double(double)> &chi) {
  FeFunction pi = project_pi_h(space, chi);
  const double norm = dot(assemble_flux_vector(*space), pi.coefficients());
  if (!(norm > 0.0))
    throw NormalizationError(
        "build_chi_h: (Pi_h chi, 1) is not positive; refine the mesh");
  pi *= 1.0 / norm;
  return {std::move(pi), norm};
}

std::function<double(double)> default_chi(const Interval &domain) {
  const double c = domain.center();
  const double r = 0.5 * domain.length();
  return [c, r](double x) {
    return std::max(0.0, 1.0 - std::abs(x - c) / r) / r;
  };
}

double l2_inner(const SymBandMatrix &mass, const FeFunction &u,
                const FeFunction &w) {
  return dot(mass.multiply(u.coefficients()), w.coefficients());
}

double l2_norm(const SymBandMatrix &mass, const FeFunction &u) {
  return std::sqrt(std::max(0.0, l2_inner(mass, u, u)));
}

} // namespace smartflow
