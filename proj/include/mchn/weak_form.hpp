#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "mchn/model.hpp"
#include "mchn/peakon.hpp"

namespace mchn {

/// Separable bump phi(t, x) = b((t - t_center) / t_radius) * b((x - x_center) / x_radius)
/// with the polynomial profile b(s) = (1 - s^2)^K on |s| < 1, 0 elsewhere.
/// b is C^{K-1}; the weak formulation needs only C^1 with compact support, and
/// polynomial pieces keep every quadrature integrand piecewise analytic.
struct TestFunction {
  double t_center = 0.5;
  double t_radius = 0.25;
  double x_center = 0.0;
  double x_radius = 1.0;
  int order = 6;  // K >= 2

  double time_factor(double t) const;
  double time_factor_dt(double t) const;
  double space_factor(double x) const;
  double space_factor_dx(double x) const;

  double t_lo() const { return t_center - t_radius; }
  double t_hi() const { return t_center + t_radius; }
  double x_lo() const { return x_center - x_radius; }
  double x_hi() const { return x_center + x_radius; }

  /// Throws std::invalid_argument unless both radii are positive and finite and K >= 2.
  void validate() const;
};

struct WeakResidualOptions {
  /// Spatial window extends this far beyond the peaks and the bump support.
  double window_margin = 12.0;
  double max_panel_x = 0.5;
  std::size_t points_x = 12;
  std::size_t time_panels = 8;  // even; the comparison rule uses half as many
  std::size_t points_t = 12;
  /// Trajectory error floor: factor * max(atol, rtol) * integral of |integrand|.
  double trajectory_floor_factor = 10.0;
};

struct WeakResidual {
  double residual = 0.0;          // fine-rule value
  double residual_coarse = 0.0;   // comparison rule value
  double quadrature_error = 0.0;  // |fine - coarse|
  double trajectory_floor = 0.0;
  double abs_integral = 0.0;      // integral of |integrand| (fine rule)
  double bound = 0.0;             // quadrature_error + trajectory_floor

  bool within_bound() const { return std::abs(residual) < bound; }
};

/// Left side of the weak formulation
///   int int [u phi_t + (k1+k2)/3 u^3 phi_x + k1/3 u_x^3 phi + k3/2 u^2 phi_x
///            + F1 (p * phi_x) - F2 (p * phi)] dx dt,
///   F1 = (2k1/3 + k2) u^3 + (k1 + 3k2/2) u u_x^2 + k3 u^2 + k3/2 u_x^2,
///   F2 = (k1/3 + k2/2) u_x^3,
/// for a line peakon trajectory. The bump's time support must lie inside the
/// trajectory window, so the initial-data term vanishes.
/// Throws std::invalid_argument for circle trajectories or an escaping support.
WeakResidual weak_residual(const PeakonTrajectory& traj, const ModelParams& k, const TestFunction& phi,
                           const WeakResidualOptions& opts = {});

/// Times at which weak_residual evaluates the trajectory. Passing them as
/// PeakonOptions::output_times makes those states integrator steps.
std::vector<double> weak_residual_time_nodes(const TestFunction& phi, const WeakResidualOptions& opts = {});

}  // namespace mchn
