#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace smartflow {

/// Symmetric banded matrix storing the lower band (half-bandwidth `bandwidth`).
class SymBandMatrix {
public:
  SymBandMatrix() = default;
  SymBandMatrix(std::size_t n, std::size_t bandwidth);

  [[nodiscard]] std::size_t size() const { return n_; }
  [[nodiscard]] std::size_t bandwidth() const { return kb_; }

  /// Entry (i, j); zero outside the band.
  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const;
  /// Adds v to (i, j) and, implicitly, (j, i). Requires |i - j| <= bandwidth.
  void add(std::size_t i, std::size_t j, double v);

  /// y = A x
  [[nodiscard]] std::vector<double> multiply(std::span<const double> x) const;

  /// this += alpha * other (same shape).
  void axpy(double alpha, const SymBandMatrix &other);

private:
  friend class BandCholesky;
  std::size_t n_ = 0;
  std::size_t kb_ = 0;
  std::vector<double> band_; // row i, offset d = i - j stored at i*(kb+1)+d
};

/// Banded Cholesky factorization A = L L^T of an SPD SymBandMatrix.
class BandCholesky {
public:
  /// Throws smartflow::Error if the matrix is not positive definite.
  explicit BandCholesky(const SymBandMatrix &a);

  [[nodiscard]] std::vector<double> solve(std::span<const double> b) const;

private:
  std::size_t n_;
  std::size_t kb_;
  std::vector<double> l_;
};

[[nodiscard]] double dot(std::span<const double> a, std::span<const double> b);

} // namespace smartflow
