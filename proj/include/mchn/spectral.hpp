#pragma once

#include <complex>
#include <span>
#include <vector>

#include "mchn/grid.hpp"

namespace mchn {

using Complex = std::complex<double>;

/// Real-to-half-complex FFT bound to one grid.
///
/// Coefficients follow c_k = (1/n) sum_j f_j e^{-i xi_k (x_j - origin)} for
/// k = 0..n/2, so f(x) = sum_k c_k e^{i xi_k (x - origin)} with the usual
/// conjugate symmetry. Plans are shared process-wide; creation is serialized
/// and execution uses the new-array interface, so instances may be used from
/// several threads at once.
class Spectral {
 public:
  explicit Spectral(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  std::size_t modes() const { return grid_.n / 2 + 1; }

  /// xi_k = 2 pi k / period.
  double wavenumber(std::size_t k) const { return xi_[k]; }
  const std::vector<double>& wavenumbers() const { return xi_; }

  /// Wavenumber used by derivative multipliers: xi_k with the Nyquist mode zeroed.
  double derivative_wavenumber(std::size_t k) const { return k == grid_.n / 2 ? 0.0 : xi_[k]; }

  std::vector<Complex> forward(std::span<const double> f) const;
  std::vector<double> inverse(std::span<const Complex> c) const;

  /// Zeroes every mode with k > n/3 (two-thirds rule).
  void truncate_two_thirds(std::span<Complex> c) const;

  /// Evaluates the trigonometric interpolant (and its first two derivatives) at x.
  struct PointValue {
    double f, fx, fxx;
  };
  PointValue evaluate(std::span<const Complex> c, double x) const;

 private:
  GridSpec grid_;
  std::vector<double> xi_;
  void* forward_plan_;
  void* inverse_plan_;
};

/// Applies a real-valued or complex multiplier mode by mode and returns the field.
template <class Multiplier>
std::vector<double> apply_multiplier(const Spectral& sp, std::span<const double> f, Multiplier&& mult) {
  auto c = sp.forward(f);
  for (std::size_t k = 0; k < c.size(); ++k) c[k] *= mult(k);
  return sp.inverse(c);
}

}  // namespace mchn
