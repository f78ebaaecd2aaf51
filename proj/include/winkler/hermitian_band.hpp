#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "winkler/errors.hpp"

namespace winkler {

/// Hermitian matrix stored as its lower band of half-bandwidth kd.
/// factor() overwrites the band with the Cholesky factor L (A = L L^H);
/// a dense matrix is the special case kd = n - 1.
template <class Real>
class HermitianBand {
 public:
  using Complex = std::complex<Real>;

  HermitianBand() = default;
  HermitianBand(std::size_t n, std::size_t kd) : n_(n), kd_(std::min(kd, n ? n - 1 : 0)), data_(n * (kd_ + 1)) {}

  [[nodiscard]] std::size_t size() const { return n_; }
  [[nodiscard]] std::size_t bandwidth() const { return kd_; }
  [[nodiscard]] bool factored() const { return factored_; }

  [[nodiscard]] bool in_band(std::size_t i, std::size_t j) const {
    return (i >= j ? i - j : j - i) <= kd_;
  }

  /// Entry (i, j); zero outside the band.
  [[nodiscard]] Complex operator()(std::size_t i, std::size_t j) const {
    if (!in_band(i, j)) return Complex(0);
    return i >= j ? lower(i, j) : std::conj(lower(j, i));
  }

  /// Adds v to entry (i, j) with i >= j (the mirrored entry follows).
  void add_lower(std::size_t i, std::size_t j, Complex v) { lower(i, j) += v; }

  /// y = A x on an unfactored matrix.
  template <class Out, class In>
  void multiply(std::span<const In> x, std::span<Out> y) const {
    for (std::size_t i = 0; i < n_; ++i) y[i] = Out(0);
    for (std::size_t j = 0; j < n_; ++j) {
      const std::size_t last = std::min(n_ - 1, j + kd_);
      y[j] += Out(lower(j, j)) * Out(x[j]);
      for (std::size_t i = j + 1; i <= last; ++i) {
        const Out a(lower(i, j));
        y[i] += a * Out(x[j]);
        y[j] += std::conj(a) * Out(x[i]);
      }
    }
  }

  /// Largest absolute row sum.
  [[nodiscard]] Real norm_inf() const {
    std::vector<Real> rows(n_, Real(0));
    for (std::size_t j = 0; j < n_; ++j) {
      const std::size_t last = std::min(n_ - 1, j + kd_);
      rows[j] += std::abs(lower(j, j));
      for (std::size_t i = j + 1; i <= last; ++i) {
        const Real a = std::abs(lower(i, j));
        rows[i] += a;
        rows[j] += a;
      }
    }
    return n_ ? *std::max_element(rows.begin(), rows.end()) : Real(0);
  }

  /// In-place band Cholesky. Throws NumericalError on a non-positive pivot.
  void factor() {
    for (std::size_t j = 0; j < n_; ++j) {
      const std::size_t first = j > kd_ ? j - kd_ : 0;
      Real d = lower(j, j).real();
      for (std::size_t k = first; k < j; ++k) d -= std::norm(lower(j, k));
      if (!(d > Real(0)))
        throw NumericalError("Cholesky breakdown at row " + std::to_string(j) + ": matrix not positive definite");
      const Real pivot = std::sqrt(d);
      lower(j, j) = Complex(pivot);
      const std::size_t last = std::min(n_ - 1, j + kd_);
      for (std::size_t i = j + 1; i <= last; ++i) {
        Complex s = lower(i, j);
        const std::size_t k0 = std::max(first, i > kd_ ? i - kd_ : std::size_t{0});
        for (std::size_t k = k0; k < j; ++k) s -= lower(i, k) * std::conj(lower(j, k));
        lower(i, j) = s / pivot;
      }
    }
    factored_ = true;
  }

  /// Solves A x = b in place using the factor.
  void solve_in_place(std::span<Complex> b) const {
    for (std::size_t i = 0; i < n_; ++i) {
      Complex s = b[i];
      const std::size_t first = i > kd_ ? i - kd_ : 0;
      for (std::size_t k = first; k < i; ++k) s -= lower(i, k) * b[k];
      b[i] = s / lower(i, i).real();
    }
    for (std::size_t i = n_; i-- > 0;) {
      Complex s = b[i];
      const std::size_t last = std::min(n_ - 1, i + kd_);
      for (std::size_t k = i + 1; k <= last; ++k) s -= std::conj(lower(k, i)) * b[k];
      b[i] = s / lower(i, i).real();
    }
  }

 private:
  Complex& lower(std::size_t i, std::size_t j) { return data_[j * (kd_ + 1) + (i - j)]; }
  const Complex& lower(std::size_t i, std::size_t j) const { return data_[j * (kd_ + 1) + (i - j)]; }

  std::size_t n_ = 0;
  std::size_t kd_ = 0;
  std::vector<Complex> data_;
  bool factored_ = false;
};

}  // namespace winkler
