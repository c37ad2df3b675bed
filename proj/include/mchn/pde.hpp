#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "mchn/diagnostics.hpp"
#include "mchn/grid.hpp"
#include "mchn/model.hpp"
#include "mchn/ode.hpp"
#include "mchn/spectral.hpp"

namespace mchn {

/// Non-finite values in a right-hand side; carries the time when known.
class BlowupSuspected : public RhsDomainError {
 public:
  BlowupSuspected(const std::string& what, double t = std::numeric_limits<double>::quiet_NaN())
      : RhsDomainError(what), time(t) {}
  double time;
};

/// Band kept by the pseudospectral products: |k| <= n/3 or |k| <= n/4.
enum class Dealiasing { two_thirds, half };

/// du/dt of the nonlocal form
///   u_t + (k1+k2)/3 (u^3)_x - k1/3 u_x^3 + k3/2 (u^2)_x
///       + p_x * [(2k1/3 + k2) u^3 + (k1 + 3k2/2) u u_x^2 + k3 u^2 + k3/2 u_x^2]
///       + p * [(k1/3 + k2/2) u_x^3] = 0.
/// u and u_x are truncated to the band before the products; the result is
/// returned on the same band.
Field weak_rhs(const Field& u, const ModelParams& k, double t = std::numeric_limits<double>::quiet_NaN(),
               Dealiasing rule = Dealiasing::two_thirds);

/// dm/dt = -[k1(u^2 - u_x^2) + k2 u^2 + k3 u] m_x - (2k1 m + 3k2 u + 2k3) u_x m, m = u - u_xx.
Field m_form_rhs(const Field& u, const ModelParams& k, double t = std::numeric_limits<double>::quiet_NaN(),
                 Dealiasing rule = Dealiasing::two_thirds);

/// Helmholtz image of a Gaussian with mass 2a and standard deviation `width`
/// centred at x0 (periodic images summed). Throws if width <= 4h.
Field mollified_peakon(double a, double x0, double width, const GridSpec& grid);

enum class Formulation { weak, m_form };

struct PdeOptions {
  double atol = 1e-10;
  double rtol = 1e-10;
  Formulation formulation = Formulation::weak;
  Dealiasing dealiasing = Dealiasing::two_thirds;
  /// Exponential filter exp(-36 (k/k_max)^36) applied to the tendency.
  bool filter = false;
  double ux_guard = 1e6;   // breakdown when sup |u_x| exceeds this
  double M_guard = 1e4;    // breakdown when min M < -M_guard
  double max_step = std::numeric_limits<double>::infinity();
  /// Advective step cap h * xi_max * max|k1(u^2 - u_x^2) + k2 u^2 + k3 u| <= cfl.
  /// Dormand-Prince amplifies purely oscillatory modes once h*omega exceeds
  /// about 0.93, so without the cap band-edge noise grows until the error
  /// estimate notices it. Non-positive disables the cap.
  double cfl = 0.8;
  std::size_t max_steps = 2'000'000;
  /// Store every accepted step (needed for field_at / characteristics).
  bool keep_trajectory = true;
  /// Extra times the integrator must land on (snapshots).
  std::vector<double> output_times;
  /// Bound for the M monitor (NaN disables it).
  double m_bound = std::numeric_limits<double>::quiet_NaN();
};

/// Accepted steps (t, u, du/dt). Between steps u is the cubic Hermite
/// interpolant in time; in space it is the trigonometric interpolant.
class FieldTrajectory {
 public:
  GridSpec grid;
  std::vector<double> t;
  std::vector<std::vector<double>> u;
  std::vector<std::vector<double>> dudt;

  bool empty() const { return t.empty(); }
  double t_begin() const { return t.front(); }
  double t_end() const { return t.back(); }

  Field field_at(double time) const;
  /// Fourier coefficients of u(time) (Spectral::forward convention).
  std::vector<Complex> coefficients_at(double time) const;
};

struct PdeEvent {
  double t;
  std::string kind;  // "completed", "breakdown", "max_steps"
  std::string detail;
};

struct PdeResult {
  FieldTrajectory trajectory;
  DiagnosticsSeries diagnostics;
  std::vector<PdeEvent> events;
  Field u_final;
  bool breakdown = false;
  double t_last = 0.0;             // last accepted step
  double last_step = 0.0;          // size of the last accepted step
  double t_breakdown_estimate = std::numeric_limits<double>::quiet_NaN();  // t_last + last_step/2
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  /// Snapshots at the requested output times (and t = t0).
  std::vector<std::pair<double, Field>> snapshots;
};

/// Adaptive Dormand-Prince integration of u (or m for Formulation::m_form) with
/// per-step diagnostics. A breakdown (step underflow, sup |u_x| > ux_guard or
/// min M < -M_guard) ends the run with a "breakdown" event; it is not an error.
PdeResult integrate_pde(const Field& u0, const ModelParams& k, double t_end, const PdeOptions& opts = {});

/// Projects u onto the band.
Field dealias(const Field& u, Dealiasing rule = Dealiasing::two_thirds);

}  // namespace mchn
