#include "mchn/pde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mchn/kernels.hpp"

namespace mchn {

namespace {

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// Modes k > cut are removed from inputs and tendencies.
std::size_t band_cut(const Spectral& sp, Dealiasing d) {
  return d == Dealiasing::two_thirds ? sp.grid().n / 3 : sp.grid().n / 4;
}

void truncate(std::vector<Complex>& c, std::size_t cut) {
  for (std::size_t k = cut + 1; k < c.size(); ++k) c[k] = 0.0;
}

double filter_factor(std::size_t cut, std::size_t k) {
  const double kmax = static_cast<double>(cut);
  const double r = static_cast<double>(k) / kmax;
  return r >= 1.0 ? 0.0 : std::exp(-36.0 * std::pow(r, 36));
}

// Inputs shared by both tendencies: two-thirds truncated u and u_x on the grid.
struct Dealiased {
  std::vector<Complex> c;
  std::vector<double> u, ux;
};

Dealiased dealiased_inputs(const Spectral& sp, std::span<const double> u, std::size_t cut) {
  Dealiased d;
  d.c = sp.forward(u);
  truncate(d.c, cut);
  d.u = sp.inverse(d.c);
  auto cx = d.c;
  for (std::size_t k = 0; k < cx.size(); ++k) cx[k] *= Complex(0.0, sp.derivative_wavenumber(k));
  d.ux = sp.inverse(cx);
  return d;
}

void weak_tendency(const Spectral& sp, std::span<const double> u, const ModelParams& k, std::size_t cut, bool filter,
                   double t, std::span<double> out) {
  if (!all_finite(u)) throw BlowupSuspected("non-finite u in the weak-form tendency", t);
  const std::size_t n = u.size();
  const auto d = dealiased_inputs(sp, u, cut);
  std::vector<double> flux(n), f1(n), f2(n), slope(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double v = d.u[j], vx = d.ux[j];
    const double v2 = v * v, vx2 = vx * vx;
    flux[j] = (k.k1 + k.k2) / 3.0 * v2 * v + 0.5 * k.k3 * v2;
    f1[j] = (2.0 * k.k1 / 3.0 + k.k2) * v2 * v + (k.k1 + 1.5 * k.k2) * v * vx2 + k.k3 * v2 + 0.5 * k.k3 * vx2;
    f2[j] = (k.k1 / 3.0 + 0.5 * k.k2) * vx2 * vx;
    slope[j] = k.k1 / 3.0 * vx2 * vx;
  }
  const auto cf = sp.forward(flux), c1 = sp.forward(f1), c2 = sp.forward(f2), cs = sp.forward(slope);
  std::vector<Complex> c(cf.size());
  for (std::size_t m = 0; m < c.size(); ++m) {
    const double xi = sp.wavenumber(m), xd = sp.derivative_wavenumber(m);
    const double inv = 1.0 / (1.0 + xi * xi);
    const Complex ixi(0.0, xd);
    c[m] = -ixi * cf[m] - ixi * inv * c1[m] - inv * c2[m] + cs[m];
    if (filter) c[m] *= filter_factor(cut, m);
  }
  truncate(c, cut);
  const auto r = sp.inverse(c);
  if (!all_finite(r)) throw BlowupSuspected("non-finite weak-form tendency", t);
  std::copy(r.begin(), r.end(), out.begin());
}

void m_tendency(const Spectral& sp, std::span<const double> u, const ModelParams& k, std::size_t cut, bool filter,
                double t, std::span<double> out) {
  if (!all_finite(u)) throw BlowupSuspected("non-finite u in the m-form tendency", t);
  const std::size_t n = u.size();
  const auto d = dealiased_inputs(sp, u, cut);
  auto cm = d.c, cmx = d.c;
  for (std::size_t m = 0; m < cm.size(); ++m) {
    const double xi = sp.wavenumber(m);
    cm[m] *= 1.0 + xi * xi;
    cmx[m] *= Complex(0.0, sp.derivative_wavenumber(m)) * (1.0 + xi * xi);
  }
  const auto mm = sp.inverse(cm), mx = sp.inverse(cmx);
  std::vector<double> g(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double v = d.u[j], vx = d.ux[j];
    const double speed = k.k1 * (v * v - vx * vx) + k.k2 * v * v + k.k3 * v;
    g[j] = -speed * mx[j] - (2.0 * k.k1 * mm[j] + 3.0 * k.k2 * v + 2.0 * k.k3) * vx * mm[j];
  }
  auto c = sp.forward(g);
  if (filter)
    for (std::size_t m = 0; m < c.size(); ++m) c[m] *= filter_factor(cut, m);
  truncate(c, cut);
  const auto r = sp.inverse(c);
  if (!all_finite(r)) throw BlowupSuspected("non-finite m-form tendency", t);
  std::copy(r.begin(), r.end(), out.begin());
}

std::vector<double> hermite(double t0, double t1, const std::vector<double>& y0, const std::vector<double>& f0,
                            const std::vector<double>& y1, const std::vector<double>& f1, double t) {
  const double h = t1 - t0;
  const double s = (t - t0) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
  std::vector<double> out(y0.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i];
  return out;
}

}  // namespace

Field dealias(const Field& u, Dealiasing rule) {
  Spectral sp(u.grid);
  auto c = sp.forward(u.values);
  truncate(c, band_cut(sp, rule));
  return Field(u.grid, sp.inverse(c), u.role);
}

Field weak_rhs(const Field& u, const ModelParams& k, double t, Dealiasing rule) {
  u.grid.validate();
  Spectral sp(u.grid);
  std::vector<double> out(u.size());
  weak_tendency(sp, u.values, k, band_cut(sp, rule), false, t, out);
  return Field(u.grid, std::move(out), Role::generic);
}

Field m_form_rhs(const Field& u, const ModelParams& k, double t, Dealiasing rule) {
  u.grid.validate();
  Spectral sp(u.grid);
  std::vector<double> out(u.size());
  m_tendency(sp, u.values, k, band_cut(sp, rule), false, t, out);
  return Field(u.grid, std::move(out), Role::generic);
}

Field mollified_peakon(double a, double x0, double width, const GridSpec& grid) {
  grid.validate();
  if (!(width > 4.0 * grid.spacing()) || !std::isfinite(width))
    throw std::invalid_argument("mollified_peakon: width must exceed 4 grid spacings");
  const double norm = 2.0 * a / (width * std::sqrt(2.0 * std::numbers::pi));
  const int images = static_cast<int>(std::ceil(12.0 * width / grid.period)) + 1;
  auto m = sample(
      grid,
      [&](double x) {
        double v = 0.0;
        for (int i = -images; i <= images; ++i) {
          const double d = (x - x0 + i * grid.period) / width;
          v += std::exp(-0.5 * d * d);
        }
        return norm * v;
      },
      Role::m);
  return helmholtz_solve(m);
}

Field FieldTrajectory::field_at(double time) const {
  if (t.empty()) throw std::logic_error("FieldTrajectory: empty");
  if (time <= t.front()) return Field(grid, u.front(), Role::u);
  if (time >= t.back()) return Field(grid, u.back(), Role::u);
  const auto it = std::upper_bound(t.begin(), t.end(), time);
  const std::size_t i = static_cast<std::size_t>(it - t.begin()) - 1;
  if (time == t[i]) return Field(grid, u[i], Role::u);
  return Field(grid, hermite(t[i], t[i + 1], u[i], dudt[i], u[i + 1], dudt[i + 1], time), Role::u);
}

std::vector<Complex> FieldTrajectory::coefficients_at(double time) const {
  Spectral sp(grid);
  return sp.forward(field_at(time).values);
}

PdeResult integrate_pde(const Field& u0, const ModelParams& k, double t_end, const PdeOptions& opts) {
  k.validate();
  u0.grid.validate();
  if (!u0.all_finite()) throw std::invalid_argument("integrate_pde: non-finite initial data");
  const GridSpec grid = u0.grid;
  const Spectral sp(grid);
  const bool mform = opts.formulation == Formulation::m_form;

  PdeResult res;
  res.trajectory.grid = grid;
  const std::size_t cut = band_cut(sp, opts.dealiasing);
  const Field u_start = dealias(u0, opts.dealiasing);
  res.diagnostics = DiagnosticsSeries(k, u_start, opts.m_bound);

  std::vector<double> y0 = mform ? helmholtz_apply(u_start).values : u_start.values;
  auto to_u = [&](std::span<const double> y) {
    std::vector<double> v(y.begin(), y.end());
    Field f(grid, std::move(v), mform ? Role::m : Role::u);
    return mform ? helmholtz_solve(f) : f;
  };

  OdeRhs rhs = [&](double t, std::span<const double> y, std::span<double> dy) {
    if (mform) {
      if (!all_finite(y)) throw BlowupSuspected("non-finite m", t);
      const auto u = to_u(y);
      m_tendency(sp, u.values, k, cut, opts.filter, t, dy);
    } else {
      weak_tendency(sp, y, k, cut, opts.filter, t, dy);
    }
  };

  auto record = [&](double t, const Field& u, std::span<const double> dydt) {
    res.diagnostics.append(t, u);
    if (opts.keep_trajectory) {
      res.trajectory.t.push_back(t);
      res.trajectory.u.push_back(u.values);
      if (mform) {
        Field dm(grid, std::vector<double>(dydt.begin(), dydt.end()), Role::m);
        res.trajectory.dudt.push_back(helmholtz_solve(dm).values);
      } else {
        res.trajectory.dudt.emplace_back(dydt.begin(), dydt.end());
      }
    }
  };

  {
    std::vector<double> f0(y0.size());
    rhs(0.0, y0, f0);
    record(0.0, u_start, f0);
    res.snapshots.emplace_back(0.0, u_start);
  }

  std::vector<double> outputs;
  for (double to : opts.output_times)
    if (to > 0.0 && to < t_end) outputs.push_back(to);
  std::sort(outputs.begin(), outputs.end());

  OdeOptions o;
  o.atol = opts.atol;
  o.rtol = opts.rtol;
  o.max_step = opts.max_step;
  o.max_steps = opts.max_steps;
  o.output_times = outputs;
  if (opts.cfl > 0.0) {
    const double xi_max = sp.wavenumber(cut);
    o.step_limit = [&, xi_max](double, std::span<const double> y) {
      const auto u = to_u(y).values;
      auto c = sp.forward(u);
      for (std::size_t m = 0; m < c.size(); ++m) c[m] *= Complex(0.0, sp.derivative_wavenumber(m));
      const auto ux = sp.inverse(c);
      double vmax = 0.0;
      for (std::size_t j = 0; j < u.size(); ++j)
        vmax = std::max(vmax, std::abs(k.k1 * (u[j] * u[j] - ux[j] * ux[j]) + k.k2 * u[j] * u[j] + k.k3 * u[j]));
      return vmax > 0.0 ? opts.cfl / (xi_max * vmax) : std::numeric_limits<double>::infinity();
    };
  }

  std::string guard_detail;
  auto on_step = [&](const StepInfo& info) {
    const auto u = to_u(info.y);
    record(info.t, u, info.dydt);
    if (std::binary_search(outputs.begin(), outputs.end(), info.t)) res.snapshots.emplace_back(info.t, u);
    res.t_last = info.t;
    res.last_step = info.h;
    const auto& d = res.diagnostics.back();
    if (d.ux_sup > opts.ux_guard) {
      guard_detail = "sup |u_x| = " + std::to_string(d.ux_sup) + " exceeds the guard";
      return false;
    }
    if (d.M_min < -opts.M_guard) {
      guard_detail = "min M = " + std::to_string(d.M_min) + " below the guard";
      return false;
    }
    return true;
  };

  const auto r = integrate_dopri5(rhs, 0.0, y0, t_end, o, on_step);
  res.accepted = r.accepted;
  res.rejected = r.rejected;
  res.u_final = to_u(r.y);
  res.t_last = r.t;
  if (r.accepted > 0 && res.last_step == 0.0) res.last_step = r.last_step;

  switch (r.status) {
    case OdeStatus::completed:
      res.events.push_back({r.t, "completed", ""});
      if (std::find_if(res.snapshots.begin(), res.snapshots.end(), [&](const auto& s) { return s.first == r.t; }) ==
          res.snapshots.end())
        res.snapshots.emplace_back(r.t, res.u_final);
      break;
    case OdeStatus::stopped:
      res.breakdown = true;
      res.events.push_back({r.t, "breakdown", guard_detail});
      break;
    case OdeStatus::step_underflow:
      res.breakdown = true;
      res.events.push_back({r.t, "breakdown", "step size underflow: " + r.message});
      break;
    case OdeStatus::max_steps:
      res.events.push_back({r.t, "max_steps", r.message});
      break;
  }
  if (res.breakdown) res.t_breakdown_estimate = res.t_last + 0.5 * res.last_step;
  return res;
}

}  // namespace mchn
