#pragma once

#include "smartflow/mesh.hpp"

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace smartflow {

/// Position-dependent power-law index p: Sigma -> (1, inf).
///
/// Three representations are supported. A constant exponent; a piecewise
/// constant exponent given by strictly increasing breakpoints and one value
/// per piece; and a sampled exponent backed by a callable with declared
/// bounds. The affine preset p(x) = c0 + c1 x is a sampled exponent that
/// remembers its coefficients so it can be written back to a config.
///
/// On a breakpoint the piecewise exponent takes the value of the piece to
/// its left.
class ExponentField {
public:
  enum class Kind { Constant, Piecewise, Sampled };

  static ExponentField constant(double value);
  static ExponentField piecewise(std::vector<double> breakpoints,
                                 std::vector<double> values);
  static ExponentField sampled(std::function<double(double)> fn,
                               double p_minus, double p_plus);
  /// p(x) = c0 + c1 x on `domain`; bounds are taken at the endpoints.
  static ExponentField affine(double c0, double c1, const Interval &domain);

  [[nodiscard]] double operator()(double x) const;

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] double p_minus() const { return p_minus_; }
  [[nodiscard]] double p_plus() const { return p_plus_; }
  [[nodiscard]] const std::vector<double> &breakpoints() const {
    return breakpoints_;
  }
  [[nodiscard]] const std::vector<double> &values() const { return values_; }
  [[nodiscard]] const std::optional<std::array<double, 2>> &
  affine_coefficients() const {
    return affine_;
  }
  [[nodiscard]] bool is_constant() const { return kind_ == Kind::Constant; }

  /// Throws std::invalid_argument if a breakpoint is not interior to domain.
  void check_breakpoints_inside(const Interval &domain) const;

  friend bool operator==(const ExponentField &a, const ExponentField &b);

private:
  ExponentField() = default;
  void check_bounds() const;

  Kind kind_ = Kind::Constant;
  std::vector<double> breakpoints_;
  std::vector<double> values_;
  std::function<double(double)> fn_;
  std::optional<std::array<double, 2>> affine_;
  double p_minus_ = 2.0;
  double p_plus_ = 2.0;
};

/// Hoelder conjugate q' = q / (q - 1) of a scalar exponent.
[[nodiscard]] inline double conjugate_value(double q) { return q / (q - 1.0); }

/// Pointwise Hoelder conjugate p' = p / (p - 1).
[[nodiscard]] ExponentField conjugate(const ExponentField &p);

/// Per-element Gauss-Legendre rule used for modular integrals.
struct QuadratureRule {
  std::size_t points = 6;

  /// max(6, 2 * ceil(p_plus)) points per element.
  static QuadratureRule for_exponent(const ExponentField &p);
};

/// Integrand evaluated per element; `element` lets callers return
/// discontinuous-across-vertex quantities such as finite element gradients.
using ElementIntegrand = std::function<double(std::size_t element, double x)>;

/// Throws BreakpointMisalignment if a breakpoint of p is not a mesh vertex.
void require_aligned(const ExponentField &p, const Mesh1D &mesh);

/// rho_p(f) = int |f(x)|^{p(x)} dx by per-element Gauss quadrature.
[[nodiscard]] double modular(const ElementIntegrand &f, const ExponentField &p,
                             const Mesh1D &mesh, const QuadratureRule &quad);
[[nodiscard]] double modular(const std::function<double(double)> &f,
                             const ExponentField &p, const Mesh1D &mesh,
                             const QuadratureRule &quad);

struct LuxembourgOptions {
  double rel_tol = 1e-10;
  int max_iterations = 200;
};

/// inf { lambda > 0 : rho_p(f / lambda) <= 1 }, by bracketing and bisection.
/// Returns 0 when f vanishes at every quadrature node.
/// Throws ConvergenceFailure if bracketing or bisection stalls.
[[nodiscard]] double luxembourg_norm(const ElementIntegrand &f,
                                     const ExponentField &p,
                                     const Mesh1D &mesh,
                                     const QuadratureRule &quad,
                                     const LuxembourgOptions &opts = {});
[[nodiscard]] double luxembourg_norm(const std::function<double(double)> &f,
                                     const ExponentField &p,
                                     const Mesh1D &mesh,
                                     const QuadratureRule &quad,
                                     const LuxembourgOptions &opts = {});

} // namespace smartflow
