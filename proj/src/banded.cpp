#include "smartflow/banded.hpp"

#include "smartflow/error.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace smartflow {

SymBandMatrix::SymBandMatrix(std::size_t n, std::size_t bandwidth)
    : n_(n), kb_(bandwidth), band_(n * (bandwidth + 1), 0.0) {}

double SymBandMatrix::operator()(std::size_t i, std::size_t j) const {
  if (i < j)
    std::swap(i, j);
  const std::size_t d = i - j;
  if (d > kb_)
    return 0.0;
  return band_[i * (kb_ + 1) + d];
}

void SymBandMatrix::add(std::size_t i, std::size_t j, double v) {
  if (i < j)
    std::swap(i, j);
  const std::size_t d = i - j;
  if (d > kb_ || i >= n_)
    throw std::out_of_range("SymBandMatrix::add outside band");
  band_[i * (kb_ + 1) + d] += v;
}

std::vector<double> SymBandMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    y[i] += band_[i * (kb_ + 1)] * x[i];
    for (std::size_t d = 1; d <= kb_ && d <= i; ++d) {
      const double a = band_[i * (kb_ + 1) + d];
      y[i] += a * x[i - d];
      y[i - d] += a * x[i];
    }
  }
  return y;
}

void SymBandMatrix::axpy(double alpha, const SymBandMatrix &other) {
  if (other.n_ != n_ || other.kb_ != kb_)
    throw std::invalid_argument("SymBandMatrix::axpy shape mismatch");
  for (std::size_t k = 0; k < band_.size(); ++k)
    band_[k] += alpha * other.band_[k];
}

BandCholesky::BandCholesky(const SymBandMatrix &a)
    : n_(a.n_), kb_(a.kb_), l_(a.band_) {
  const std::size_t w = kb_ + 1;
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t j0 = i > kb_ ? i - kb_ : 0;
    for (std::size_t j = j0; j <= i; ++j) {
      double sum = l_[i * w + (i - j)];
      const std::size_t k0 = std::max(j0, j > kb_ ? j - kb_ : 0);
      for (std::size_t k = k0; k < j; ++k)
        sum -= l_[i * w + (i - k)] * l_[j * w + (j - k)];
      if (j == i) {
        if (!(sum > 0.0))
          throw Error("BandCholesky: matrix not positive definite");
        l_[i * w] = std::sqrt(sum);
      } else {
        l_[i * w + (i - j)] = sum / l_[j * w];
      }
    }
  }
}

std::vector<double> BandCholesky::solve(std::span<const double> b) const {
  const std::size_t w = kb_ + 1;
  std::vector<double> y(b.begin(), b.end());
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t k0 = i > kb_ ? i - kb_ : 0;
    for (std::size_t k = k0; k < i; ++k)
      y[i] -= l_[i * w + (i - k)] * y[k];
    y[i] /= l_[i * w];
  }
  for (std::size_t ii = n_; ii-- > 0;) {
    for (std::size_t k = ii + 1; k < n_ && k <= ii + kb_; ++k)
      y[ii] -= l_[k * w + (k - ii)] * y[k];
    y[ii] /= l_[ii * w];
  }
  return y;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a[i] * b[i];
  return s;
}

} // namespace smartflow
