#include "mchn/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>

#include "mchn/holder_probe.hpp"
#include "mchn/kernels.hpp"
#include "mchn/spectral.hpp"

namespace mchn {

double h1_energy(const Field& u) {
  const auto ux = spectral_derivative(u);
  double sum = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) sum += u[j] * u[j] + ux[j] * ux[j];
  return sum * u.grid.spacing();
}

DiagnosticsSeries::DiagnosticsSeries(const ModelParams& k, const Field& u0, double m_bound) : k_(k) {
  const auto m0 = helmholtz_apply(u0);
  m0_max_ = m0.max();
  // Nonnegative momentum up to rounding of the Helmholtz image.
  positivity_armed_ = m0.min() >= -helmholtz_roundoff(u0.grid) * std::max(1.0, m0.sup_norm());
  m_bound_ = m_bound;
  m_bound_armed_ = positivity_armed_ && k.m_bound_signs() && std::isfinite(m_bound);
}

const DiagnosticsSample& DiagnosticsSeries::append(double t, const Field& u) {
  if (!samples_.empty() && !(t > samples_.back().t))
    throw std::invalid_argument("DiagnosticsSeries: times must increase");
  Spectral sp(u.grid);
  auto c = sp.forward(u.values);
  auto cx = c, cm = c;
  for (std::size_t j = 0; j < c.size(); ++j) {
    const double xi = sp.wavenumber(j);
    cx[j] *= Complex(0.0, sp.derivative_wavenumber(j));
    cm[j] *= 1.0 + xi * xi;
  }
  const auto ux = sp.inverse(cx);
  const auto m = sp.inverse(cm);

  DiagnosticsSample d;
  d.t = t;
  double h1 = 0.0;
  d.m_min = d.M_min = d.u_plus_ux_min = d.u_minus_ux_min = std::numeric_limits<double>::infinity();
  d.m_max = d.M_max = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double v = u[j], vx = ux[j], mj = m[j];
    const double M = (2.0 * k_.k1 * mj + 3.0 * k_.k2 * v + 2.0 * k_.k3) * vx;
    h1 += v * v + vx * vx;
    d.m_min = std::min(d.m_min, mj);
    d.m_max = std::max(d.m_max, mj);
    d.M_min = std::min(d.M_min, M);
    d.M_max = std::max(d.M_max, M);
    d.u_plus_ux_min = std::min(d.u_plus_ux_min, v + vx);
    d.u_minus_ux_min = std::min(d.u_minus_ux_min, v - vx);
    d.ux_sup = std::max(d.ux_sup, std::abs(vx));
  }
  d.h1 = h1 * u.grid.spacing();
  d.m_sup = std::max(std::abs(d.m_min), std::abs(d.m_max));
  if (!samples_.empty()) {
    const auto& p = samples_.back();
    d.criterion_integral = p.criterion_integral + 0.5 * (t - p.t) * (p.m_sup * p.m_sup + d.m_sup * d.m_sup);
  }
  if (positivity_armed_)
    d.positivity_breach = d.m_min < -positivity_tolerance * m0_max_ || d.u_plus_ux_min < -positivity_tolerance ||
                          d.u_minus_ux_min < -positivity_tolerance;
  if (m_bound_armed_) d.m_bound_breach = d.M_max > m_bound_ + m_bound_tolerance;
  samples_.push_back(d);
  return samples_.back();
}

bool DiagnosticsSeries::any_m_bound_breach() const {
  return std::any_of(samples_.begin(), samples_.end(), [](const auto& s) { return s.m_bound_breach; });
}

bool DiagnosticsSeries::any_positivity_breach() const {
  return std::any_of(samples_.begin(), samples_.end(), [](const auto& s) { return s.positivity_breach; });
}

std::string to_string(HolderRegion r) {
  switch (r) {
    case HolderRegion::D1: return "D1";
    case HolderRegion::D2: return "D2";
    case HolderRegion::D3: return "D3";
    case HolderRegion::D4: return "D4";
    case HolderRegion::none: return "none";
  }
  return "none";
}

HolderMembership holder_membership(double s, double r) {
  HolderMembership h;
  if (!(s > 2.5) || !(r >= 0.0) || !(r < s)) return h;
  h.d1 = (r <= 1.5 && 3.0 - s <= r && r <= s - 2.0) || (1.5 < r && r <= s - 1.0);
  h.d2 = s < 3.0 && r <= 3.0 - s;
  h.d3 = s - 2.0 <= r && r <= 1.5;
  h.d4 = s - 1.0 <= r;
  return h;
}

HolderClass holder_region_classify(double s, double r) {
  const auto h = holder_membership(s, r);
  if (h.d1) return {HolderRegion::D1, 1.0};
  if (h.d2) return {HolderRegion::D2, (2.0 * s - 3.0) / (s - r)};
  if (h.d3) return {HolderRegion::D3, 0.5 * (s - r)};
  if (h.d4) return {HolderRegion::D4, s - r};
  return {};
}

HolderProbeReport holder_probe(const Field& u0, const Field& direction, double s, double r, double t_end,
                               const ModelParams& k, const HolderProbeOptions& opts) {
  HolderProbeReport rep;
  rep.s = s;
  rep.r = r;
  rep.predicted = holder_region_classify(s, r);
  rep.eps = opts.eps;
  if (opts.eps.empty() || opts.comparison_times == 0) throw std::invalid_argument("holder_probe: empty ladder");

  std::vector<double> times;
  for (std::size_t i = 1; i <= opts.comparison_times; ++i)
    times.push_back(t_end * static_cast<double>(i) / static_cast<double>(opts.comparison_times));
  PdeOptions po = opts.pde;
  po.output_times = times;
  po.keep_trajectory = false;

  auto snapshots_of = [&](const Field& init) {
    auto res = integrate_pde(init, k, t_end, po);
    if (res.breakdown) throw std::runtime_error("breakdown at t = " + std::to_string(res.t_last));
    std::vector<Field> out;
    for (double t : times) {
      auto it = std::find_if(res.snapshots.begin(), res.snapshots.end(), [&](const auto& p) { return p.first == t; });
      if (it == res.snapshots.end()) throw std::runtime_error("missing snapshot");
      out.push_back(it->second);
    }
    return out;
  };

  auto perturbed = [&](double e) {
    Field v = u0;
    for (std::size_t j = 0; j < v.size(); ++j) v[j] += e * direction[j];
    return v;
  };

  try {
    const auto base = snapshots_of(u0);
    auto run = [&](double e) {
      const auto v0 = perturbed(e);
      const auto vs = snapshots_of(v0);
      Field d0 = v0;
      for (std::size_t j = 0; j < d0.size(); ++j) d0[j] -= u0[j];
      double worst = 0.0;
      for (std::size_t i = 0; i < times.size(); ++i) {
        Field d = vs[i];
        for (std::size_t j = 0; j < d.size(); ++j) d[j] -= base[i][j];
        worst = std::max(worst, sobolev_norm(d, r));
      }
      return std::pair<double, double>{sobolev_norm(d0, r), worst};
    };
    std::vector<std::pair<double, double>> out(opts.eps.size());
    if (opts.jobs > 1) {
      std::vector<std::future<std::pair<double, double>>> fut;
      for (double e : opts.eps) fut.push_back(std::async(std::launch::async, run, e));
      for (std::size_t i = 0; i < fut.size(); ++i) out[i] = fut[i].get();
    } else {
      for (std::size_t i = 0; i < opts.eps.size(); ++i) out[i] = run(opts.eps[i]);
    }
    for (const auto& [a, b] : out) {
      rep.data_distance.push_back(a);
      rep.solution_distance.push_back(b);
    }
  } catch (const std::exception& e) {
    rep.aborted = true;
    rep.detail = std::string("probe aborted: ") + e.what();
    return rep;
  }

  // Least-squares slope of log(solution distance) against log(data distance).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t cnt = 0;
  for (std::size_t i = 0; i < rep.eps.size(); ++i) {
    if (!(rep.data_distance[i] > 0.0) || !(rep.solution_distance[i] > 0.0)) continue;
    const double x = std::log(rep.data_distance[i]), y = std::log(rep.solution_distance[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  if (cnt >= 2) {
    const double c = static_cast<double>(cnt);
    rep.fitted_slope = (c * sxy - sx * sy) / (c * sxx - sx * sx);
  } else {
    rep.detail = "zero differences: slope undefined";
    rep.fitted_slope = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

}  // namespace mchn
