#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "mchn/grid.hpp"
#include "mchn/model.hpp"

namespace mchn {

/// H1 = int m u dx = int (u^2 + u_x^2) dx over one period (spectral quadrature).
double h1_energy(const Field& u);

struct DiagnosticsSample {
  double t = 0.0;
  double h1 = 0.0;
  double m_min = 0.0, m_max = 0.0, m_sup = 0.0;
  double M_min = 0.0, M_max = 0.0;
  double u_plus_ux_min = 0.0;   // min (u + u_x)
  double u_minus_ux_min = 0.0;  // min (u - u_x)
  double ux_sup = 0.0;
  double criterion_integral = 0.0;  // running int ||m||_inf^2 dt (trapezoid)
  bool m_bound_breach = false;
  bool positivity_breach = false;
};

/// Per-step monitors of a field run.
///
/// Positivity checks (min m >= -tol * max m0, min(u +- u_x) >= -tol) are armed
/// when the initial momentum is nonnegative; the M upper-bound check is armed
/// when additionally k1, k2, k3 >= 0 and an M bound is supplied.
class DiagnosticsSeries {
 public:
  DiagnosticsSeries() = default;
  DiagnosticsSeries(const ModelParams& k, const Field& u0, double m_bound = std::numeric_limits<double>::quiet_NaN());

  /// Computes and appends the sample at time t (t must exceed the last sample).
  const DiagnosticsSample& append(double t, const Field& u);

  const std::vector<DiagnosticsSample>& samples() const { return samples_; }
  bool empty() const { return samples_.empty(); }
  const DiagnosticsSample& back() const { return samples_.back(); }

  bool positivity_armed() const { return positivity_armed_; }
  bool m_bound_armed() const { return m_bound_armed_; }
  double m_bound() const { return m_bound_; }
  double m0_max() const { return m0_max_; }

  bool any_m_bound_breach() const;
  bool any_positivity_breach() const;

  double positivity_tolerance = 1e-6;
  double m_bound_tolerance = 1e-6;

 private:
  ModelParams k_{};
  std::vector<DiagnosticsSample> samples_;
  double m0_max_ = 0.0;
  double m_bound_ = std::numeric_limits<double>::quiet_NaN();
  bool positivity_armed_ = false;
  bool m_bound_armed_ = false;
};

/// Region of the (s, r) plane and its continuity exponent.
enum class HolderRegion { D1, D2, D3, D4, none };
std::string to_string(HolderRegion r);

struct HolderClass {
  HolderRegion region = HolderRegion::none;
  double beta = std::numeric_limits<double>::quiet_NaN();
};

/// Membership of each region as a set (no precedence), for coverage checks.
struct HolderMembership {
  bool d1 = false, d2 = false, d3 = false, d4 = false;
};
HolderMembership holder_membership(double s, double r);

/// Classifies (s, r) with precedence D1 > D2 > D3 > D4 on shared boundaries.
/// Outside s > 5/2, 0 <= r < s the region is none.
///   D1: {r <= 3/2, 3 - s <= r <= s - 2} u {3/2 < r <= s - 1}   beta = 1
///   D2: 5/2 < s < 3, 0 <= r <= 3 - s                            beta = (2s - 3)/(s - r)
///   D3: s - 2 <= r <= 3/2                                        beta = (s - r)/2
///   D4: s - 1 <= r < s                                           beta = s - r
HolderClass holder_region_classify(double s, double r);

}  // namespace mchn
