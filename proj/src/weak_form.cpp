#include "mchn/weak_form.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mchn/quadrature.hpp"

namespace mchn {

namespace {

double bump(double s, int K) {
  if (std::abs(s) >= 1.0) return 0.0;
  return std::pow(1.0 - s * s, K);
}

double bump_ds(double s, int K) {
  if (std::abs(s) >= 1.0) return 0.0;
  return -2.0 * K * s * std::pow(1.0 - s * s, K - 1);
}

// p * chi and its derivative for the spatial bump chi.
class BumpConvolution {
 public:
  explicit BumpConvolution(const TestFunction& phi) : phi_(phi), rule_(gauss_legendre(kPoints)) {
    const double lo = phi.x_lo(), hi = phi.x_hi(), c = phi.x_center;
    moment_plus_ = integrate(lo, hi, [&](double y) { return std::exp(y - c) * phi_.space_factor(y); });
    moment_minus_ = integrate(lo, hi, [&](double y) { return std::exp(c - y) * phi_.space_factor(y); });
  }

  // Returns (psi, psi_x).
  std::pair<double, double> operator()(double x) const {
    const double lo = phi_.x_lo(), hi = phi_.x_hi(), c = phi_.x_center;
    if (x >= hi) {
      const double v = 0.5 * std::exp(c - x) * moment_plus_;
      return {v, -v};
    }
    if (x <= lo) {
      const double v = 0.5 * std::exp(x - c) * moment_minus_;
      return {v, v};
    }
    const double left = integrate(lo, x, [&](double y) { return std::exp(y - x) * phi_.space_factor(y); });
    const double right = integrate(x, hi, [&](double y) { return std::exp(x - y) * phi_.space_factor(y); });
    return {0.5 * (left + right), 0.5 * (right - left)};
  }

 private:
  static constexpr std::size_t kPoints = 24;
  static constexpr int kPanels = 2;
  const TestFunction& phi_;
  QuadratureRule rule_;
  double moment_plus_ = 0.0;
  double moment_minus_ = 0.0;

  template <class F>
  double integrate(double a, double b, F&& f) const {
    double sum = 0.0;
    const double w = (b - a) / kPanels;
    for (int p = 0; p < kPanels; ++p) {
      const double a0 = a + p * w;
      for (std::size_t i = 0; i < rule_.nodes.size(); ++i)
        sum += rule_.weights[i] * f(a0 + 0.5 * w * (rule_.nodes[i] + 1.0));
    }
    return 0.5 * w * sum;
  }
};

struct Coefficients {
  double cubic_flux, slope_cube, square_flux;  // (k1+k2)/3, k1/3, k3/2
  double f1_u3, f1_uux2, f1_u2, f1_ux2, f2_ux3;
  explicit Coefficients(const ModelParams& k)
      : cubic_flux((k.k1 + k.k2) / 3.0),
        slope_cube(k.k1 / 3.0),
        square_flux(0.5 * k.k3),
        f1_u3(2.0 * k.k1 / 3.0 + k.k2),
        f1_uux2(k.k1 + 1.5 * k.k2),
        f1_u2(k.k3),
        f1_ux2(0.5 * k.k3),
        f2_ux3(k.k1 / 3.0 + 0.5 * k.k2) {}
};

// Integral over x at one time. Terms multiplying alpha' and alpha are kept apart.
struct SliceIntegrals {
  double mass = 0.0;      // int u chi dx            (times alpha'(t))
  double flux = 0.0;      // remaining terms          (times alpha(t))
  double abs_mass = 0.0;
  double abs_flux = 0.0;
};

SliceIntegrals slice(const PeakonState& s, const Coefficients& c, const TestFunction& phi,
                     const BumpConvolution& conv, const WeakResidualOptions& opts, double panel,
                     std::size_t points) {
  const double lo = std::min(s.q.front(), phi.x_lo()) - opts.window_margin;
  const double hi = std::max(s.q.back(), phi.x_hi()) + opts.window_margin;
  std::vector<double> breaks(s.q);
  breaks.push_back(phi.x_lo());
  breaks.push_back(phi.x_center);
  breaks.push_back(phi.x_hi());
  const auto rule = composite_gauss(lo, hi, breaks, panel, points);

  SliceIntegrals out;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = rule.nodes[i], w = rule.weights[i];
    const auto pt = peakon_field_eval(s, x);
    const double u = pt.u, ux = pt.ux_left;  // nodes never sit on a peak
    const double u2 = u * u, ux2 = ux * ux;
    const double chi = phi.space_factor(x), chi_x = phi.space_factor_dx(x);
    const auto [psi, psi_x] = conv(x);

    const double mass = u * chi;
    const double local = (c.cubic_flux * u2 * u + c.square_flux * u2) * chi_x + c.slope_cube * ux2 * ux * chi;
    const double f1 = c.f1_u3 * u2 * u + c.f1_uux2 * u * ux2 + c.f1_u2 * u2 + c.f1_ux2 * ux2;
    const double f2 = c.f2_ux3 * ux2 * ux;
    const double nonlocal = f1 * psi_x - f2 * psi;

    out.mass += w * mass;
    out.flux += w * (local + nonlocal);
    out.abs_mass += w * std::abs(mass);
    out.abs_flux += w * (std::abs(c.cubic_flux * u2 * u * chi_x) + std::abs(c.square_flux * u2 * chi_x) +
                         std::abs(c.slope_cube * ux2 * ux * chi) + std::abs(c.f1_u3 * u2 * u * psi_x) +
                         std::abs(c.f1_uux2 * u * ux2 * psi_x) + std::abs(c.f1_u2 * u2 * psi_x) +
                         std::abs(c.f1_ux2 * ux2 * psi_x) + std::abs(f2 * psi));
  }
  return out;
}

QuadratureRule time_rule(const TestFunction& phi, std::size_t panels, std::size_t points) {
  return composite_gauss(phi.t_lo(), phi.t_hi(), {}, (phi.t_hi() - phi.t_lo()) / static_cast<double>(panels) * (1.0 + 1e-12),
                         points);
}

}  // namespace

double TestFunction::time_factor(double t) const { return bump((t - t_center) / t_radius, order); }
double TestFunction::time_factor_dt(double t) const { return bump_ds((t - t_center) / t_radius, order) / t_radius; }
double TestFunction::space_factor(double x) const { return bump((x - x_center) / x_radius, order); }
double TestFunction::space_factor_dx(double x) const {
  return bump_ds((x - x_center) / x_radius, order) / x_radius;
}

void TestFunction::validate() const {
  if (!(t_radius > 0.0) || !(x_radius > 0.0) || !std::isfinite(t_radius) || !std::isfinite(x_radius) ||
      !std::isfinite(t_center) || !std::isfinite(x_center))
    throw std::invalid_argument("test function needs finite centers and positive finite radii");
  if (order < 2) throw std::invalid_argument("test function order must be at least 2");
}

std::vector<double> weak_residual_time_nodes(const TestFunction& phi, const WeakResidualOptions& opts) {
  auto fine = time_rule(phi, opts.time_panels, opts.points_t).nodes;
  const auto coarse = time_rule(phi, opts.time_panels / 2, opts.points_t / 2).nodes;
  fine.insert(fine.end(), coarse.begin(), coarse.end());
  std::sort(fine.begin(), fine.end());
  fine.erase(std::unique(fine.begin(), fine.end()), fine.end());
  return fine;
}

WeakResidual weak_residual(const PeakonTrajectory& traj, const ModelParams& k, const TestFunction& phi,
                           const WeakResidualOptions& opts) {
  phi.validate();
  if (traj.domain != Domain::line) throw std::invalid_argument("weak_residual: line trajectories only");
  if (traj.samples.empty()) throw std::invalid_argument("weak_residual: empty trajectory");
  if (phi.t_lo() < traj.t_begin() || phi.t_hi() > traj.t_end())
    throw std::invalid_argument("weak_residual: test function time support escapes the trajectory window");
  if (opts.time_panels < 2 || opts.time_panels % 2 != 0 || opts.points_t < 4 || opts.points_x < 4)
    throw std::invalid_argument("weak_residual: time_panels must be even and >= 2, points >= 4");

  const Coefficients c(k);
  const BumpConvolution conv(phi);
  const double coarse_panel = 2.0 * opts.max_panel_x;
  const std::size_t coarse_points = opts.points_x / 2;

  auto accumulate = [&](const QuadratureRule& rule, double panel, std::size_t points, double* abs_out) {
    double sum = 0.0, abs_sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double t = rule.nodes[i];
      const auto st = traj.state_at(t);
      const auto sl = slice(st, c, phi, conv, opts, panel, points);
      const double a = phi.time_factor(t), adt = phi.time_factor_dt(t);
      sum += rule.weights[i] * (adt * sl.mass + a * sl.flux);
      abs_sum += rule.weights[i] * (std::abs(adt) * sl.abs_mass + std::abs(a) * sl.abs_flux);
    }
    if (abs_out) *abs_out = abs_sum;
    return sum;
  };

  WeakResidual r;
  r.residual = accumulate(time_rule(phi, opts.time_panels, opts.points_t), opts.max_panel_x, opts.points_x,
                          &r.abs_integral);
  r.residual_coarse = accumulate(time_rule(phi, opts.time_panels / 2, opts.points_t / 2), coarse_panel,
                                 coarse_points, nullptr);
  r.quadrature_error = std::abs(r.residual - r.residual_coarse);
  r.trajectory_floor = opts.trajectory_floor_factor * std::max(traj.atol, traj.rtol) * r.abs_integral;
  r.bound = r.quadrature_error + r.trajectory_floor;
  return r;
}

}  // namespace mchn
