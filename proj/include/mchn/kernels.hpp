#pragma once

#include "mchn/grid.hpp"

namespace mchn {

/// Helmholtz kernel: p(x) = e^{-|x|}/2 on the line, and on the unit circle
/// G(x) = csch(1/2) cosh(x - 1/2 - floor(x)) / 2, both inverting 1 - d^2/dx^2.
double kernel_eval(double x, Domain domain);

/// u = (1 - d^2/dx^2)^{-1} m, mode by mode u_k = m_k / (1 + xi_k^2).
/// Throws std::invalid_argument on non-finite samples.
Field helmholtz_solve(const Field& m);

/// m = (1 - d^2/dx^2) u, spectrally.
Field helmholtz_apply(const Field& u);

/// Relative rounding level of m = (1 - d^2/dx^2) u on this grid: a few ulps
/// amplified by 1 + xi_max^2.
double helmholtz_roundoff(const GridSpec& grid);

/// Fourier-multiplier derivative; the Nyquist mode is dropped.
Field spectral_derivative(const Field& f);

enum class Side { plus, minus };

enum class OneSidedMethod {
  /// Multipliers 1/(2(1 + i xi)) and 1/(2(1 - i xi)): exact on band-limited data.
  spectral,
  /// Prefix-sum product integration of the piecewise-linear interpolant against
  /// the one-sided exponential, with the periodic wrap-around summed in closed
  /// form. Weights are positive, so m >= 0 gives nonnegative output exactly;
  /// the error is O(h^2).
  causal_quadrature,
};

/// p_plus * m or p_minus * m on the periodic box, where
/// p_plus(x) = e^{-x}/2 for x > 0, p_minus(x) = e^{x}/2 for x < 0.
/// Sum gives p * m; minus-minus-plus gives p_x * m.
Field oneside_convolve(const Field& m, Side side, OneSidedMethod method = OneSidedMethod::spectral);

/// (sum_k (1 + xi_k^2)^s |f_k|^2 * period)^{1/2}, normalized so that s = 0 is the
/// L^2 norm over one period. The Nyquist mode is weighted with the derivative
/// wavenumber (zero), matching spectral_derivative. Throws on s < 0.
double sobolev_norm(const Field& f, double s);

/// Trapezoid-rule integral over one period (spectrally accurate for periodic data).
double periodic_integral(const Field& f);

}  // namespace mchn
