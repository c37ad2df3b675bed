#include "mchn/breaking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mchn/kernels.hpp"
#include "mchn/ode.hpp"
#include "mchn/spectral.hpp"

namespace mchn {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

InequalityCheck check(std::string name, double lhs, double rhs, bool strict = true) {
  InequalityCheck c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.rhs = rhs;
  c.strict = strict;
  // Non-strict checks tolerate the rounding of an rhs built from the lhs itself.
  c.holds = strict ? lhs < rhs : lhs <= rhs + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(rhs);
  return c;
}

struct MomentumSummary {
  Field m0;
  double min = 0.0, sup = 0.0;
  bool nonnegative = false;
};

MomentumSummary momentum_summary(const Field& u0) {
  MomentumSummary s;
  s.m0 = helmholtz_apply(u0);
  s.min = s.m0.min();
  s.sup = s.m0.max();
  s.nonnegative = s.min >= -helmholtz_roundoff(u0.grid) * std::max(1.0, s.m0.sup_norm());
  return s;
}

// Gradient thresholds of the four cases (one per gamma branch in case 1).
struct Thresholds {
  int case_no = 0;
  std::vector<std::pair<std::string, double>> values;
};

Thresholds gradient_thresholds(const PointData& at, const ModelParams& k, double* gamma_plus, double* gamma_minus,
                               double* alpha_floor, double* alpha) {
  Thresholds t;
  const double K = std::sqrt((2.0 * k.k1 + 3.0 * k.k2) / (2.0 * k.k1));
  const double r2 = std::sqrt(2.0);
  if (k.k2 > 0.0 && k.k3 > 0.0) {
    t.case_no = 1;
    const double root = std::sqrt(4.0 * k.k1 * k.k1 + 6.0 * k.k1 * k.k2);
    const double gp = k.k3 / (3.0 * k.k2 * k.k2) * (4.0 * k.k1 + 3.0 * k.k2 + 2.0 * root);
    const double gm = k.k3 / (3.0 * k.k2 * k.k2) * (4.0 * k.k1 + 3.0 * k.k2 - 2.0 * root);
    const double a = 2.0 + 4.0 * k.k1 / (3.0 * k.k2);
    if (gamma_plus) *gamma_plus = gp;
    if (gamma_minus) *gamma_minus = gm;
    if (alpha_floor) *alpha_floor = a;
    if (alpha) *alpha = a;
    for (auto [name, g] : {std::pair<const char*, double>{"gradient (gamma+)", gp}, {"gradient (gamma-)", gm}}) {
      const double bracket = at.u + (3.0 * k.k2 * g + 3.0 * k.k3) / (2.0 * (2.0 * k.k1 + 3.0 * k.k2));
      t.values.emplace_back(name, -a / r2 * K * bracket);
    }
  } else if (k.k2 == 0.0 && k.k3 > 0.0) {
    t.case_no = 2;
    if (alpha) *alpha = 1.0;
    t.values.emplace_back("gradient", -1.0 / r2 * (at.u + 3.0 * k.k3 / (4.0 * k.k1)));
  } else if (k.k2 > 0.0 && k.k3 == 0.0) {
    t.case_no = 3;
    t.values.emplace_back("gradient", -K / r2 * at.u);
  } else {
    t.case_no = 4;
    t.values.emplace_back("gradient", -at.u / r2);
  }
  return t;
}

double thm17_margin(const PointData& at, const ModelParams& k) {
  const auto th = gradient_thresholds(at, k, nullptr, nullptr, nullptr, nullptr);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& [name, v] : th.values) best = std::max(best, v - at.ux);
  return best;
}

struct RateConstants {
  double C0, C1, C2, C3;
};

double h1_coefficient(const ModelParams& k) { return 38.0 / 3.0 * k.k1 + 23.0 * k.k2 + 12.5 * k.k3; }

RateConstants rate_constants(const PointData& at, const ModelParams& k, double h1, double C2) {
  RateConstants c;
  c.C2 = (std::isfinite(C2) && C2 > 0.0) ? C2 : (at.u + 1.0) / at.m;
  c.C0 = -at.ux * (2.0 * k.k1 + (3.0 * k.k2 * at.u + 2.0 * k.k3) / at.m);
  c.C1 = h1_coefficient(k) * (h1 * h1 + h1 * h1 * h1);
  c.C3 = 0.5 * (2.0 * k.k1 + (3.0 * k.k2 + 2.0 * k.k3) * c.C2) * c.C1;
  return c;
}

}  // namespace

Field blowup_quantity(const Field& u, const ModelParams& k) {
  const auto ux = spectral_derivative(u);
  const auto m = helmholtz_apply(u);
  Field M(u.grid, std::vector<double>(u.size()), Role::M);
  for (std::size_t j = 0; j < u.size(); ++j) M[j] = blowup_quantity(u[j], ux[j], m[j], k);
  return M;
}

double characteristic_rhs(double q, const Field& u, const ModelParams& k) {
  Spectral sp(u.grid);
  const auto c = sp.forward(u.values);
  const auto v = sp.evaluate(c, q);
  return characteristic_speed(v.f, v.fx, k);
}

PointData point_data(const Field& u0, double x) {
  Spectral sp(u0.grid);
  const auto c = sp.forward(u0.values);
  const auto v = sp.evaluate(c, x);
  return {x, v.f, v.fx, v.f - v.fxx};
}

std::vector<CharacteristicTrace> trace_characteristics(const std::vector<double>& seeds, const FieldTrajectory& traj,
                                                       const ModelParams& k, const TraceOptions& opts) {
  if (traj.empty()) throw std::invalid_argument("trace_characteristics: empty trajectory");
  if (!(opts.fd_delta > 0.0)) throw std::invalid_argument("trace_characteristics: fd_delta must be positive");
  const std::size_t ns = seeds.size();
  const Spectral sp(traj.grid);
  const GridSpec& g = traj.grid;
  const bool boxed = opts.domain == Domain::line;
  const double lo = g.origin + opts.window_margin, hi = g.origin + g.period - opts.window_margin;

  // Per seed: q(x0 - d), q(x0), q(x0 + d), A = int (2k1 m + 2k2 u + k3) u_x, B = int (2k1 m + 3k2 u + 2k3) u_x.
  constexpr std::size_t stride = 5;
  std::vector<double> y0(stride * ns);
  for (std::size_t s = 0; s < ns; ++s) {
    y0[stride * s] = seeds[s] - opts.fd_delta;
    y0[stride * s + 1] = seeds[s];
    y0[stride * s + 2] = seeds[s] + opts.fd_delta;
  }

  std::vector<CharacteristicTrace> traces(ns);
  {
    const auto c0 = sp.forward(traj.u.front());
    for (std::size_t s = 0; s < ns; ++s) {
      traces[s].x0 = seeds[s];
      const auto v = sp.evaluate(c0, seeds[s]);
      traces[s].m0 = v.f - v.fxx;
    }
  }

  OdeRhs rhs = [&](double t, std::span<const double> y, std::span<double> dy) {
    const auto c = traj.coefficients_at(t);
    for (std::size_t s = 0; s < ns; ++s) {
      for (std::size_t j = 0; j < 3; ++j) {
        const auto v = sp.evaluate(c, y[stride * s + j]);
        dy[stride * s + j] = characteristic_speed(v.f, v.fx, k);
        if (j == 1) {
          const double m = v.f - v.fxx;
          dy[stride * s + 3] = (2.0 * k.k1 * m + 2.0 * k.k2 * v.f + k.k3) * v.fx;
          dy[stride * s + 4] = (2.0 * k.k1 * m + 3.0 * k.k2 * v.f + 2.0 * k.k3) * v.fx;
        }
      }
    }
  };

  auto sample = [&](double t, std::span<const double> y) {
    const auto c = traj.coefficients_at(t);
    for (std::size_t s = 0; s < ns; ++s) {
      auto& tr = traces[s];
      if (tr.truncated) continue;
      const double q = y[stride * s + 1];
      if (boxed && (q < lo || q > hi)) {
        tr.truncated = true;
        continue;
      }
      const auto v = sp.evaluate(c, q);
      CharacteristicSample cs;
      cs.t = t;
      cs.q = q;
      cs.qx_neighbours = (y[stride * s + 2] - y[stride * s]) / (2.0 * opts.fd_delta);
      cs.qx_exp = std::exp(y[stride * s + 3]);
      cs.u = v.f;
      cs.ux = v.fx;
      cs.m_direct = v.f - v.fxx;
      cs.m_exp = tr.m0 * std::exp(-y[stride * s + 4]);
      cs.M = blowup_quantity(v.f, v.fx, cs.m_direct, k);
      tr.qx_positive = tr.qx_positive && cs.qx_neighbours > 0.0 && cs.qx_exp > 0.0;
      tr.max_qx_rel_error = std::max(tr.max_qx_rel_error, std::abs(cs.qx_neighbours - cs.qx_exp) / cs.qx_exp);
      if (std::abs(tr.m0) > opts.m_sign_floor) {
        tr.max_m_rel_error = std::max(tr.max_m_rel_error, std::abs(cs.m_direct - cs.m_exp) / std::abs(cs.m_exp));
        if ((cs.m_direct > 0.0) != (tr.m0 > 0.0)) tr.m_sign_constant = false;
      }
      tr.samples.push_back(cs);
    }
  };

  std::vector<double> stops(traj.t.begin(), traj.t.end());
  stops.insert(stops.end(), opts.sample_times.begin(), opts.sample_times.end());
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
  std::vector<double> wanted = opts.sample_times.empty() ? std::vector<double>(traj.t) : opts.sample_times;
  std::sort(wanted.begin(), wanted.end());

  sample(traj.t_begin(), y0);
  OdeOptions o;
  o.atol = opts.atol;
  o.rtol = opts.rtol;
  o.output_times = stops;
  auto on_step = [&](const StepInfo& info) {
    if (std::binary_search(wanted.begin(), wanted.end(), info.t)) sample(info.t, info.y);
    return true;
  };
  const auto res = integrate_dopri5(rhs, traj.t_begin(), y0, traj.t_end(), o, on_step);
  if (res.status != OdeStatus::completed)
    for (auto& tr : traces) tr.truncated = true;
  return traces;
}

QuadraticRoots rate_time_roots(double C0, double C3, double m0) {
  const double b = C0 / C3, c = 1.0 / (C3 * m0);
  QuadraticRoots r;
  r.discriminant = b * b - 4.0 * c;
  if (r.discriminant >= 0.0) {
    const double sq = std::sqrt(r.discriminant);
    const double big = 0.5 * (b + (b >= 0.0 ? sq : -sq));
    const double small = big != 0.0 ? c / big : 0.0;
    r.lower = std::min(big, small);
    r.upper = std::max(big, small);
  } else {
    const double im = 0.5 * std::sqrt(-r.discriminant);
    r.lower = {0.5 * b, -im};
    r.upper = {0.5 * b, im};
  }
  return r;
}

namespace {

void finish_thm17(BreakingCertificate& cert, const ModelParams& k, bool m0_nonnegative) {
  cert.m0_nonnegative = m0_nonnegative;
  const auto th = gradient_thresholds(cert.at, k, &cert.gamma_plus, &cert.gamma_minus, &cert.alpha_floor, &cert.alpha);
  cert.theorem = "T1.7-case" + std::to_string(th.case_no);
  bool any = false;
  for (const auto& [name, v] : th.values) {
    cert.checks.push_back(check(name, cert.at.ux, v));
    any = any || cert.checks.back().holds;
  }
  cert.checks.push_back(check("m0(x0) > 0", 0.0, cert.at.m));

  if (!m0_nonnegative) {
    cert.status = "precondition-failed";
    cert.reason = "m0 takes negative values on the grid";
  } else if (!(cert.at.m > 0.0)) {
    cert.status = "precondition-failed";
    cert.reason = "m0(x0) <= 0";
  } else if (!any) {
    cert.status = "not-satisfied";
    cert.reason = "gradient inequality fails";
  } else {
    cert.status = "satisfied";
    cert.satisfied = true;
    cert.T_upper = -1.0 / (2.0 * k.k1 * cert.at.m * cert.at.ux);
  }
}

}  // namespace

BreakingCertificate thm17_certificate(const Field& u0, double x0, const ModelParams& k, PointSearch search) {
  k.validate();
  u0.grid.validate();
  BreakingCertificate cert;
  cert.theorem = "T1.7";
  if (!k.gradient_breaking_signs()) {
    cert.status = "not-applicable";
    cert.reason = "requires k1 > 0, k2 >= 0, k3 >= 0";
    return cert;
  }
  const auto ms = momentum_summary(u0);
  cert.m0_min = ms.min;
  cert.m0_sup = ms.sup;
  cert.m0_nonnegative = ms.nonnegative;
  cert.h1_norm = sobolev_norm(u0, 1.0);

  if (search == PointSearch::max_margin) {
    const auto ux = spectral_derivative(u0);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < u0.size(); ++j) {
      if (!(ms.m0[j] > 0.0)) continue;
      const double margin = thm17_margin({u0.grid.x(j), u0[j], ux[j], ms.m0[j]}, k);
      if (margin > best) {
        best = margin;
        x0 = u0.grid.x(j);
      }
    }
  }
  cert.at = point_data(u0, x0);
  finish_thm17(cert, k, ms.nonnegative);
  return cert;
}

BreakingCertificate thm17_certificate(const PointData& at, const ModelParams& k) {
  k.validate();
  BreakingCertificate cert;
  cert.theorem = "T1.7";
  if (!k.gradient_breaking_signs()) {
    cert.status = "not-applicable";
    cert.reason = "requires k1 > 0, k2 >= 0, k3 >= 0";
    return cert;
  }
  cert.at = at;
  cert.m0_min = cert.m0_sup = kNaN;
  cert.h1_norm = kNaN;
  finish_thm17(cert, k, true);
  return cert;
}

namespace {

void finish_thm18(BreakingCertificate& cert, const ModelParams& k, double C2, bool m0_nonnegative) {
  cert.m0_nonnegative = m0_nonnegative;
  cert.checks.push_back(check("m0(x1) > 0", 0.0, cert.at.m));
  if (!m0_nonnegative || !(cert.at.m > 0.0)) {
    cert.status = "precondition-failed";
    cert.reason = !m0_nonnegative ? "m0 takes negative values on the grid" : "m0(x1) <= 0";
    return;
  }

  const auto c = rate_constants(cert.at, k, cert.h1_norm, C2);
  cert.C0 = c.C0;
  cert.C1 = c.C1;
  cert.C2 = c.C2;
  cert.C3 = c.C3;
  const double m = cert.at.m;
  cert.checks.push_back(check("u0(x1) + 1 <= C2 m0(x1)", cert.at.u + 1.0, c.C2 * m, false));
  const double lhs = (2.0 * k.k1 + (3.0 * k.k2 * cert.at.u + 2.0 * k.k3) / m) * cert.at.ux;
  const double rhs = -std::sqrt((2.0 * k.k1 + (3.0 * k.k2 + 2.0 * k.k3) * c.C2) * c.C1 / m);
  cert.checks.push_back(check("final condition", lhs, rhs));

  const auto roots = rate_time_roots(c.C0, c.C3, m);
  cert.discriminant = roots.discriminant;
  cert.t_minus = roots.lower;
  cert.t_plus = roots.upper;
  const double b = c.C0 / c.C3;
  cert.discriminant_printed = b * b - 2.0 / (c.C3 * m);
  if (cert.discriminant_printed >= 0.0) cert.t_minus_printed = 0.5 * b - 0.5 * std::sqrt(cert.discriminant_printed);
  cert.checks.push_back(check("root discriminant > 0", 0.0, cert.discriminant));

  bool ok = true;
  for (const auto& ch : cert.checks) ok = ok && ch.holds;
  if (ok && roots.lower.real() > 0.0) {
    cert.status = "satisfied";
    cert.satisfied = true;
    cert.T_upper = roots.lower.real();
  } else {
    cert.status = "not-satisfied";
    for (const auto& ch : cert.checks)
      if (!ch.holds) {
        cert.reason = ch.name + " fails";
        break;
      }
  }
}

}  // namespace

BreakingCertificate thm18_certificate(const Field& u0, double x1, const ModelParams& k, double C2,
                                      PointSearch search) {
  k.validate();
  u0.grid.validate();
  BreakingCertificate cert;
  cert.theorem = "T1.8";
  cert.rate_target = -0.5;
  if (!k.rate_breaking_signs()) {
    cert.status = "not-applicable";
    cert.reason = "requires k1, k2, k3 > 0";
    return cert;
  }
  const auto ms = momentum_summary(u0);
  cert.m0_min = ms.min;
  cert.m0_sup = ms.sup;
  cert.m0_nonnegative = ms.nonnegative;
  cert.h1_norm = sobolev_norm(u0, 1.0);

  if (search == PointSearch::max_margin) {
    const auto ux = spectral_derivative(u0);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < u0.size(); ++j) {
      if (!(ms.m0[j] > 0.0)) continue;
      const PointData p{u0.grid.x(j), u0[j], ux[j], ms.m0[j]};
      const auto c = rate_constants(p, k, cert.h1_norm, C2);
      const double margin = c.C0 - 2.0 * std::sqrt(c.C3 / p.m);
      if (margin > best) {
        best = margin;
        x1 = p.x;
      }
    }
  }
  cert.at = point_data(u0, x1);
  finish_thm18(cert, k, C2, ms.nonnegative);
  return cert;
}

BreakingCertificate thm18_certificate(const PointData& at, double h1_norm, const ModelParams& k, double C2) {
  k.validate();
  BreakingCertificate cert;
  cert.theorem = "T1.8";
  cert.rate_target = -0.5;
  if (!k.rate_breaking_signs()) {
    cert.status = "not-applicable";
    cert.reason = "requires k1, k2, k3 > 0";
    return cert;
  }
  cert.at = at;
  cert.m0_min = cert.m0_sup = kNaN;
  cert.h1_norm = h1_norm;
  finish_thm18(cert, k, C2, true);
  return cert;
}

double m_upper_bound(const Field& u0, const ModelParams& k) {
  const double h = sobolev_norm(u0, 1.0);
  const double sup_m0 = helmholtz_apply(u0).max();
  return 2.0 * k.k1 * h * sup_m0 + 3.0 * k.k2 * h * h + 2.0 * k.k3 * h;
}

std::vector<double> blowup_criterion_integral(const DiagnosticsSeries& series) {
  std::vector<double> out;
  out.reserve(series.samples().size());
  for (const auto& s : series.samples()) out.push_back(s.criterion_integral);
  return out;
}

TerminalGrowth terminal_growth(const DiagnosticsSeries& series) {
  TerminalGrowth g;
  const auto& s = series.samples();
  if (s.size() < 3) return g;
  const double t0 = s.front().t, T = s.back().t;
  if (!(T > t0)) return g;
  const double ta = T - 0.1 * (T - t0);
  // Linear interpolation of the running integral at ta.
  auto it = std::lower_bound(s.begin(), s.end(), ta, [](const DiagnosticsSample& d, double t) { return d.t < t; });
  double Ia = s.front().criterion_integral;
  if (it != s.begin() && it != s.end()) {
    const auto& b = *it;
    const auto& a = *(it - 1);
    Ia = a.criterion_integral + (ta - a.t) / (b.t - a.t) * (b.criterion_integral - a.criterion_integral);
  }
  g.overall_slope = (s.back().criterion_integral - s.front().criterion_integral) / (T - t0);
  g.terminal_slope = (s.back().criterion_integral - Ia) / (T - ta);
  g.ratio = g.overall_slope > 0.0 ? g.terminal_slope / g.overall_slope : kNaN;
  g.super_linear = g.ratio > 2.0;
  return g;
}

double rate_product(const PdeResult& r) {
  if (!r.breakdown || r.diagnostics.empty()) return kNaN;
  return (r.t_breakdown_estimate - r.t_last) * r.diagnostics.back().M_min;
}

}  // namespace mchn
