#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mchn {

/// Thrown by a right-hand side when the state is outside its domain
/// (collision, non-finite intermediate). The integrator treats it as a failed
/// step and retries with a smaller one.
class RhsDomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

struct OdeOptions {
  double atol = 1e-10;
  double rtol = 1e-10;
  double initial_step = 0.0;  // 0 selects automatically
  double max_step = std::numeric_limits<double>::infinity();
  double min_step = 1e-13;  // relative to max(1, |t|)
  std::size_t max_steps = 50'000'000;
  /// Optional state-dependent cap on the step, consulted at the start and
  /// after every accepted step.
  std::function<double(double, std::span<const double>)> step_limit;
  /// Weight of the previous error in the step controller (0: plain I control).
  double pi_beta = 0.04;
  /// Times the integrator must land on exactly (sorted internally).
  std::vector<double> output_times;
  /// Build the continuous extension for every accepted step.
  bool dense = false;
};

/// Quartic continuous extension of one Dormand-Prince step:
/// y(t0 + s h) = r1 + s (r2 + (1-s)(r3 + s (r4 + (1-s) r5))).
/// The first four terms are the cubic Hermite interpolant through
/// (y0, f0, y1, f1); r5 lifts it to fourth order.
struct DenseSegment {
  double t0 = 0.0;
  double h = 0.0;
  std::vector<double> r1, r2, r3, r4, r5;

  double t1() const { return t0 + h; }
  void evaluate(double t, std::span<double> out) const;
  std::vector<double> evaluate(double t) const;
};

struct StepInfo {
  double t_prev;
  double t;
  double h;
  std::span<const double> y;
  std::span<const double> dydt;  // f(t, y) at the end of the step (FSAL)
  const DenseSegment* dense;     // null unless OdeOptions::dense
};

enum class OdeStatus { completed, stopped, step_underflow, max_steps };

struct OdeResult {
  OdeStatus status = OdeStatus::completed;
  double t = 0.0;
  std::vector<double> y;
  double last_step = 0.0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::string message;
};

/// Adaptive Dormand-Prince 5(4) with error-per-step control in the RMS norm
/// sc_i = atol + rtol * max(|y_i|, |y_new_i|).
///
/// on_step is called after every accepted step; returning false stops the run
/// with OdeStatus::stopped.
OdeResult integrate_dopri5(const OdeRhs& rhs, double t0, std::vector<double> y0, double t_end,
                           const OdeOptions& opts,
                           const std::function<bool(const StepInfo&)>& on_step = {});

}  // namespace mchn
