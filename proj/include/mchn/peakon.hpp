#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "mchn/grid.hpp"
#include "mchn/model.hpp"
#include "mchn/ode.hpp"

namespace mchn {

/// Raised when peak positions are not strictly ordered (gap <= threshold).
class CollisionError : public RhsDomainError {
 public:
  using RhsDomainError::RhsDomainError;
};

/// N peakons u = sum_i p_i K(x - q_i) with K = e^{-|x|} on the line and
/// K = cosh(1/2 - frac(x)) on the unit circle.
struct PeakonState {
  double t = 0.0;
  Domain domain = Domain::line;
  std::vector<double> p;
  std::vector<double> q;

  std::size_t size() const { return p.size(); }

  /// Smallest distance between neighbouring peaks (including the wrap-around
  /// gap on the circle). Infinity for a single line peakon.
  double min_gap() const;

  /// Checks N >= 1, matching sizes, finite entries, ordering with gaps > eps,
  /// and 0 <= q < 1 on the circle. Throws std::invalid_argument or CollisionError.
  void validate(double eps_collide = 0.0) const;
};

/// Peak speed c(a) = A a^2 + B a of a single peakon with amplitude a.
double single_peakon_speed(double a, const ModelParams& k, Domain domain);

struct SpeedRelation {
  double quadratic;  // A
  double linear;     // B
};
SpeedRelation speed_relation(const ModelParams& k, Domain domain);

struct AmplitudeSolution {
  enum class Branch {
    two_real,       // A != 0, discriminant > 0
    double_root,    // A != 0, discriminant == 0
    complex_pair,   // A != 0, discriminant < 0: complex peakon amplitudes
    linear,         // A == 0, B != 0: a = c / B
    any_amplitude,  // A == B == 0 and c == 0
    none,           // A == B == 0 and c != 0
  };
  Branch branch = Branch::none;
  std::vector<double> real_roots;          // ascending
  std::vector<std::complex<double>> complex_roots;
  double discriminant = 0.0;               // B^2 + 4 A c
};

std::string to_string(AmplitudeSolution::Branch b);

/// Solves c = A a^2 + B a for the amplitude a. Both branches are always reported.
AmplitudeSolution amplitudes_for_speed(double c, const ModelParams& k, Domain domain);

struct PeakonPoint {
  double u;
  double ux_left;
  double ux_right;
};

/// Closed-form u and one-sided slopes at x.
PeakonPoint peakon_field_eval(const PeakonState& s, double x);

struct PeakonRhs {
  std::vector<double> p_dot;
  std::vector<double> q_dot;
};

/// Line N-peakon system. Uses sgn(0) = 0. Prefix recursions give O(N) cost.
/// Throws CollisionError when ordering (gap > eps_collide) is violated.
PeakonRhs rhs_line(const PeakonState& s, const ModelParams& k, double eps_collide = 0.0);

/// Circle N-peakon system, a literal evaluation of the hyperbolic-function sums
/// including the ordered triple sums (O(N^3)). Requires 0 <= q_1 < ... < q_N < 1.
PeakonRhs rhs_periodic(const PeakonState& s, const ModelParams& k, double eps_collide = 0.0);

/// Dispatches on s.domain.
PeakonRhs peakon_rhs(const PeakonState& s, const ModelParams& k, double eps_collide = 0.0);

struct TransformedRhs {
  double P_plus_dot;
  double Q_plus_dot;
  double P_minus_dot;
  double Q_minus_dot;
};

/// Two-peakon line system in P+- = p1 +- p2, Q+- = q1 +- q2, written in closed form.
TransformedRhs two_peakon_transformed_rhs(const PeakonState& s, const ModelParams& k);

/// H^1 energy int m u dx of the peakon field in closed form:
/// 2 sum_ij p_i p_j e^{-|q_i - q_j|} on the line, 2 sinh(1/2) sum_i p_i u(q_i) on the circle.
double peakon_energy(const PeakonState& s);

struct PeakonOptions {
  double atol = 1e-10;
  double rtol = 1e-10;
  double eps_collide = 1e-8;
  std::size_t max_steps = 5'000'000;
  /// Additional times the integrator lands on exactly (recorded as samples).
  std::vector<double> output_times;
};

struct TrajectoryEvent {
  double t;
  std::string kind;  // "collision", "step_underflow", "max_steps", "completed"
  std::string detail;
};

/// Sampled trajectory with a continuous extension between samples.
/// Circle samples are reported with positions reduced mod 1 and labels rotated
/// so that 0 <= q_1 < ... < q_N < 1.
class PeakonTrajectory {
 public:
  Domain domain = Domain::line;
  double atol = 0.0;
  double rtol = 0.0;
  std::vector<PeakonState> samples;
  std::vector<TrajectoryEvent> events;
  bool completed = false;

  double t_begin() const { return samples.front().t; }
  double t_end() const { return samples.back().t; }

  /// State at time t within [t_begin, t_end]; exact at sample times.
  PeakonState state_at(double t) const;

  /// Positions without the mod-1 reduction (labels fixed at their initial order).
  PeakonState unwrapped_at(double t) const;

  /// A constant "trajectory" holding s on [s.t, t_end] (negative controls).
  static PeakonTrajectory frozen(const PeakonState& s, double t_end);

 private:
  friend PeakonTrajectory integrate_peakons(const PeakonState&, const ModelParams&, double,
                                            const PeakonOptions&);
  std::vector<DenseSegment> segments_;
  std::vector<double> sample_times_;
  std::vector<std::vector<double>> raw_;  // unwrapped [p, q] per sample
  PeakonState from_raw(double t, const std::vector<double>& y) const;
};

/// Adaptive Dormand-Prince integration of the N-peakon system. Stops cleanly
/// with a "collision" event when a gap falls below eps_collide (the event time
/// is located on the continuous extension). Step underflow returns the partial
/// trajectory with a "step_underflow" event.
PeakonTrajectory integrate_peakons(const PeakonState& s0, const ModelParams& k, double t_end,
                                   const PeakonOptions& opts = {});

/// Reduces positions mod 1 and rotates labels so that 0 <= q_1 < ... < q_N < 1.
PeakonState canonical_circle_state(const PeakonState& s);

}  // namespace mchn
