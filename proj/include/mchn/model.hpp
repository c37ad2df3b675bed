#pragma once

#include <string>

namespace mchn {

/// Coefficients of m_t + k1[(u^2 - u_x^2) m]_x + k2(u^2 m_x + 3 u u_x m)
///                   + k3(u m_x + 2 u_x m) = 0,  m = u - u_xx.
struct ModelParams {
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;

  /// Throws std::invalid_argument if any coefficient is non-finite.
  void validate() const;

  /// k1 > 0, k2 >= 0, k3 >= 0: sign conditions of the gradient-threshold breaking criterion.
  bool gradient_breaking_signs() const { return k1 > 0.0 && k2 >= 0.0 && k3 >= 0.0; }
  /// k1, k2, k3 > 0: sign conditions of the blow-up-rate criterion.
  bool rate_breaking_signs() const { return k1 > 0.0 && k2 > 0.0 && k3 > 0.0; }
  /// k1, k2, k3 >= 0: the upper bound on M applies (with m0 >= 0).
  bool m_bound_signs() const { return k1 >= 0.0 && k2 >= 0.0 && k3 >= 0.0; }

  /// "CH", "mCH", "Novikov", "mCH-CH", "mCH-Novikov", "Novikov-CH", "mCH-Novikov-CH" or "trivial".
  std::string family_name() const;
};

}  // namespace mchn
