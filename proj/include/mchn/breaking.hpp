#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "mchn/diagnostics.hpp"
#include "mchn/grid.hpp"
#include "mchn/model.hpp"
#include "mchn/pde.hpp"

namespace mchn {

/// M = (2k1 m + 3k2 u + 2k3) u_x with m, u_x from u spectrally.
Field blowup_quantity(const Field& u, const ModelParams& k);

/// Pointwise M.
inline double blowup_quantity(double u, double ux, double m, const ModelParams& k) {
  return (2.0 * k.k1 * m + 3.0 * k.k2 * u + 2.0 * k.k3) * ux;
}

/// Characteristic speed k1 (u^2 - u_x^2) + k2 u^2 + k3 u.
inline double characteristic_speed(double u, double ux, const ModelParams& k) {
  return k.k1 * (u * u - ux * ux) + k.k2 * u * u + k.k3 * u;
}

/// Characteristic speed at q, with u and u_x from the trigonometric interpolant.
double characteristic_rhs(double q, const Field& u, const ModelParams& k);

struct CharacteristicSample {
  double t;
  double q;
  double qx_neighbours;  // central difference of the neighbouring traces
  double qx_exp;         // exp(int (2k1 m + 2k2 u + k3) u_x dt)
  double u, ux;
  double m_direct;       // m interpolated at q
  double m_exp;          // m0(x0) exp(-int (2k1 m + 3k2 u + 2k3) u_x dt)
  double M;
};

struct CharacteristicTrace {
  double x0 = 0.0;
  double m0 = 0.0;
  std::vector<CharacteristicSample> samples;
  bool truncated = false;  // left the resolved window (line box) or the run ended early
  bool qx_positive = true;
  bool m_sign_constant = true;
  double max_qx_rel_error = 0.0;
  double max_m_rel_error = 0.0;
};

struct TraceOptions {
  double atol = 1e-12;
  double rtol = 1e-12;
  double fd_delta = 1e-3;
  /// Line data live on a truncated box; a trace is cut when it comes closer
  /// than window_margin to the box edge.
  Domain domain = Domain::circle;
  double window_margin = 5.0;
  std::vector<double> sample_times;  // empty: every trajectory step
  /// |m0(x0)| below this is treated as zero for the sign check.
  double m_sign_floor = 1e-8;
};

/// Integrates q' = characteristic speed through the interpolated trajectory for
/// every seed together with both exponential integrals, and compares them with
/// the neighbour-difference q_x and the directly interpolated m.
std::vector<CharacteristicTrace> trace_characteristics(const std::vector<double>& seeds, const FieldTrajectory& traj,
                                                       const ModelParams& k, const TraceOptions& opts = {});

/// Point values of u0, u0_x, m0 at x (trigonometric interpolation).
struct PointData {
  double x = 0.0, u = 0.0, ux = 0.0, m = 0.0;
};
PointData point_data(const Field& u0, double x);

struct InequalityCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool strict = true;
  bool holds = false;  // lhs < rhs (strict) or lhs <= rhs
};

struct BreakingCertificate {
  std::string theorem;  // "T1.7-case1" .. "T1.7-case4", "T1.8"
  std::string status;   // "satisfied", "not-satisfied", "not-applicable", "precondition-failed"
  std::string reason;
  bool satisfied = false;

  PointData at;
  double m0_min = 0.0;
  double m0_sup = 0.0;
  bool m0_nonnegative = false;
  double h1_norm = 0.0;

  // Theorem 1.7.
  double gamma_plus = std::numeric_limits<double>::quiet_NaN();
  double gamma_minus = std::numeric_limits<double>::quiet_NaN();
  double alpha_floor = std::numeric_limits<double>::quiet_NaN();
  double alpha = std::numeric_limits<double>::quiet_NaN();

  // Theorem 1.8.
  double C0 = std::numeric_limits<double>::quiet_NaN();
  double C1 = std::numeric_limits<double>::quiet_NaN();
  double C2 = std::numeric_limits<double>::quiet_NaN();
  double C3 = std::numeric_limits<double>::quiet_NaN();
  double discriminant = std::numeric_limits<double>::quiet_NaN();          // (C0/C3)^2 - 4/(C3 m0)
  double discriminant_printed = std::numeric_limits<double>::quiet_NaN();  // (C0/C3)^2 - 2/(C3 m0)
  std::complex<double> t_minus{std::numeric_limits<double>::quiet_NaN(), 0.0};
  std::complex<double> t_plus{std::numeric_limits<double>::quiet_NaN(), 0.0};
  double t_minus_printed = std::numeric_limits<double>::quiet_NaN();
  double rate_target = std::numeric_limits<double>::quiet_NaN();

  std::vector<InequalityCheck> checks;
  double T_upper = std::numeric_limits<double>::quiet_NaN();
};

enum class PointSearch {
  given,       // use the supplied point
  max_margin,  // grid node with the largest inequality margin
};

/// Gradient-threshold criterion for k1 > 0, k2, k3 >= 0 and m0 >= 0. The case
/// follows from which of k2, k3 vanish. Case 1 evaluates both gamma branches at
/// alpha = 2 + 4k1/(3k2) (the admissible alphas form an open interval above it,
/// so the strict inequality at the floor is equivalent). Case 2 uses alpha = 1.
BreakingCertificate thm17_certificate(const Field& u0, double x0, const ModelParams& k,
                                      PointSearch search = PointSearch::given);

/// Same from point data alone; m0 >= 0 is taken on trust (m0_nonnegative = true).
BreakingCertificate thm17_certificate(const PointData& at, const ModelParams& k);

/// Blow-up-rate criterion for k1, k2, k3 > 0 and m0 >= 0. C2 <= 0 or NaN selects
/// the smallest admissible (u0(x1) + 1)/m0(x1). The time bound uses the roots of
/// t^2 - (C0/C3) t + 1/(C3 m0(x1)); the "final condition" check is reported as well.
BreakingCertificate thm18_certificate(const Field& u0, double x1, const ModelParams& k,
                                      double C2 = std::numeric_limits<double>::quiet_NaN(),
                                      PointSearch search = PointSearch::given);

/// Same from point data and ||u0||_{H1}; m0 >= 0 is taken on trust.
BreakingCertificate thm18_certificate(const PointData& at, double h1_norm, const ModelParams& k,
                                      double C2 = std::numeric_limits<double>::quiet_NaN());

struct QuadraticRoots {
  double discriminant;  // b^2 - 4c for t^2 - b t + c with b = C0/C3, c = 1/(C3 m0)
  std::complex<double> lower, upper;
};
/// Roots of t^2 - (C0/C3) t + 1/(C3 m0), computed without cancellation.
QuadraticRoots rate_time_roots(double C0, double C3, double m0);

/// 2k1 ||u0||_{H1} sup m0 + 3k2 ||u0||_{H1}^2 + 2k3 ||u0||_{H1}.
double m_upper_bound(const Field& u0, const ModelParams& k);

/// Running trapezoid values of int ||m||_inf^2 dt, one per sample.
std::vector<double> blowup_criterion_integral(const DiagnosticsSeries& series);

struct TerminalGrowth {
  double overall_slope = 0.0;   // I(T) / T
  double terminal_slope = 0.0;  // mean slope over the last tenth of [t0, T]
  double ratio = 0.0;
  bool super_linear = false;    // ratio > 2
};
TerminalGrowth terminal_growth(const DiagnosticsSeries& series);

/// (T_est - t_last) * min M at the last accepted step, T_est = t_last + h_last/2.
/// NaN unless the run ended in a breakdown.
double rate_product(const PdeResult& r);

}  // namespace mchn
