#include "mchn/peakon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mchn {

namespace {

const double kSinhHalf = std::sinh(0.5);
const double kCoshHalf = std::cosh(0.5);

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

double frac(double x) {
  const double f = x - std::floor(x);
  return f >= 1.0 ? 0.0 : f;
}

std::vector<std::size_t> circle_order(const std::vector<double>& q) {
  std::vector<std::size_t> idx(q.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return frac(q[a]) < frac(q[b]); });
  return idx;
}

}  // namespace

void ModelParams::validate() const {
  if (!std::isfinite(k1) || !std::isfinite(k2) || !std::isfinite(k3))
    throw std::invalid_argument("model coefficients k1, k2, k3 must be finite");
}

std::string ModelParams::family_name() const {
  const bool a = k1 != 0.0, b = k2 != 0.0, c = k3 != 0.0;
  if (a && b && c) return "mCH-Novikov-CH";
  if (a && b) return "mCH-Novikov";
  if (a && c) return "mCH-CH";
  if (b && c) return "Novikov-CH";
  if (a) return "mCH";
  if (b) return "Novikov";
  if (c) return "CH";
  return "trivial";
}

double PeakonState::min_gap() const {
  const std::size_t n = q.size();
  if (n < 2) return domain == Domain::circle ? 1.0 : std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < n; ++i) gap = std::min(gap, q[i + 1] - q[i]);
  if (domain == Domain::circle) gap = std::min(gap, 1.0 - q[n - 1] + q[0]);
  return gap;
}

void PeakonState::validate(double eps_collide) const {
  if (p.empty()) throw std::invalid_argument("peakon state needs N >= 1");
  if (p.size() != q.size()) throw std::invalid_argument("peakon state: p and q sizes differ");
  for (std::size_t i = 0; i < p.size(); ++i)
    if (!std::isfinite(p[i]) || !std::isfinite(q[i])) throw std::invalid_argument("peakon state: non-finite entry");
  if (domain == Domain::circle)
    for (double x : q)
      if (x < 0.0 || x >= 1.0) throw std::invalid_argument("circle peakon positions must lie in [0, 1)");
  if (!(min_gap() > eps_collide)) throw CollisionError("peak positions not strictly ordered beyond the collision threshold");
}

SpeedRelation speed_relation(const ModelParams& k, Domain domain) {
  if (domain == Domain::line) return {2.0 * k.k1 / 3.0 + k.k2, k.k3};
  return {k.k1 / 3.0 + kCoshHalf * kCoshHalf * (2.0 * k.k1 / 3.0 + k.k2), kCoshHalf * k.k3};
}

double single_peakon_speed(double a, const ModelParams& k, Domain domain) {
  const auto r = speed_relation(k, domain);
  return r.quadratic * a * a + r.linear * a;
}

std::string to_string(AmplitudeSolution::Branch b) {
  switch (b) {
    case AmplitudeSolution::Branch::two_real: return "two_real";
    case AmplitudeSolution::Branch::double_root: return "double_root";
    case AmplitudeSolution::Branch::complex_pair: return "complex_pair";
    case AmplitudeSolution::Branch::linear: return "linear";
    case AmplitudeSolution::Branch::any_amplitude: return "any_amplitude";
    case AmplitudeSolution::Branch::none: return "none";
  }
  return "unknown";
}

AmplitudeSolution amplitudes_for_speed(double c, const ModelParams& k, Domain domain) {
  auto [A, B] = speed_relation(k, domain);
  // A is a difference of k1 and k2 terms; below their rounding it counts as zero
  // (the circle's f(k1, k2) = 0 is never exactly representable).
  const double scale = domain == Domain::line
                           ? 2.0 * std::abs(k.k1) / 3.0 + std::abs(k.k2)
                           : std::abs(k.k1) / 3.0 + kCoshHalf * kCoshHalf * (2.0 * std::abs(k.k1) / 3.0 + std::abs(k.k2));
  if (std::abs(A) <= 8.0 * std::numeric_limits<double>::epsilon() * scale) A = 0.0;
  AmplitudeSolution s;
  if (A == 0.0) {
    if (B != 0.0) {
      s.branch = AmplitudeSolution::Branch::linear;
      s.real_roots = {c / B};
    } else {
      s.branch = c == 0.0 ? AmplitudeSolution::Branch::any_amplitude : AmplitudeSolution::Branch::none;
    }
    return s;
  }
  s.discriminant = B * B + 4.0 * A * c;
  if (s.discriminant < 0.0) {
    s.branch = AmplitudeSolution::Branch::complex_pair;
    const double re = -B / (2.0 * A);
    const double im = std::sqrt(-s.discriminant) / (2.0 * std::abs(A));
    s.complex_roots = {{re, -im}, {re, im}};
    return s;
  }
  if (s.discriminant == 0.0) {
    s.branch = AmplitudeSolution::Branch::double_root;
    s.real_roots = {-B / (2.0 * A)};
    return s;
  }
  // Cancellation-free pair: q = -(B + sgn(B) sqrt(D)) / 2, roots q / A and c' / q with c' = -c.
  const double sq = std::sqrt(s.discriminant);
  const double qq = -0.5 * (B + (B >= 0.0 ? sq : -sq));
  double r1 = qq / A;
  double r2 = qq != 0.0 ? -c / qq : -r1;
  if (r1 > r2) std::swap(r1, r2);
  s.branch = AmplitudeSolution::Branch::two_real;
  s.real_roots = {r1, r2};
  return s;
}

PeakonPoint peakon_field_eval(const PeakonState& s, double x) {
  PeakonPoint out{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double a = s.p[i];
    if (s.domain == Domain::line) {
      const double d = x - s.q[i];
      const double e = a * std::exp(-std::abs(d));
      out.u += e;
      if (d > 0.0) {
        out.ux_left -= e;
        out.ux_right -= e;
      } else if (d < 0.0) {
        out.ux_left += e;
        out.ux_right += e;
      } else {
        out.ux_left += a;
        out.ux_right -= a;
      }
    } else {
      const double f = frac(x - s.q[i]);
      out.u += a * std::cosh(0.5 - f);
      if (f == 0.0) {
        out.ux_left += a * kSinhHalf;
        out.ux_right -= a * kSinhHalf;
      } else {
        const double slope = -a * std::sinh(0.5 - f);
        out.ux_left += slope;
        out.ux_right += slope;
      }
    }
  }
  return out;
}

PeakonRhs rhs_line(const PeakonState& s, const ModelParams& k, double eps_collide) {
  const std::size_t n = s.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!(s.q[i + 1] - s.q[i] > eps_collide)) throw CollisionError("line peakons out of order or collided");

  // left[i] = sum_{j<i} p_j e^{-(q_i - q_j)}, right[i] = sum_{j>i} p_j e^{-(q_j - q_i)}.
  std::vector<double> left(n, 0.0), right(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) left[i] = std::exp(-(s.q[i] - s.q[i - 1])) * (left[i - 1] + s.p[i - 1]);
  for (std::size_t i = n - 1; i-- > 0;) right[i] = std::exp(-(s.q[i + 1] - s.q[i])) * (right[i + 1] + s.p[i + 1]);

  PeakonRhs r{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const double u = s.p[i] + left[i] + right[i];       // sum_j p_j e^{-|q_i - q_j|}
    const double slope_sum = left[i] - right[i];        // sum_j p_j sgn(q_i - q_j) e^{-|q_i - q_j|}
    r.p_dot[i] = s.p[i] * slope_sum * (k.k2 * u + k.k3);
    r.q_dot[i] = -k.k1 / 3.0 * s.p[i] * s.p[i] - k.k1 * slope_sum * slope_sum + (k.k1 + k.k2) * u * u + k.k3 * u;
  }
  return r;
}

PeakonRhs rhs_periodic(const PeakonState& s, const ModelParams& k, double eps_collide) {
  const std::size_t n = s.size();
  for (double x : s.q)
    if (x < 0.0 || x >= 1.0) throw std::invalid_argument("rhs_periodic: positions must lie in [0, 1)");
  if (n > 1 && !(s.min_gap() > eps_collide)) throw CollisionError("circle peakons out of order or collided");

  const double sh = kSinhHalf;
  const auto& p = s.p;
  const auto& q = s.q;
  PeakonRhs r{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  double sum_p2 = 0.0;
  for (double v : p) sum_p2 += v * v;

  for (std::size_t m = 0; m < n; ++m) {
    auto xi = [&](std::size_t j) { return q[j] - q[m]; };

    // Pairwise sums over j != m.
    double pair_p = 0.0, pair_q_k1k2 = 0.0, pair_q_k2 = 0.0, k3_p = 0.0, k3_q = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double x = xi(j);
      const double ax = std::abs(x);
      k3_p += p[j] * sgn(x) * (std::cosh(ax) - std::cosh(1.0 - ax));
      k3_q += p[j] * (std::sinh(ax) + std::sinh(1.0 - ax));
      if (j == m) continue;
      pair_p += p[j] * sgn(x) *
                (p[m] * (std::cosh(0.5 + ax) - std::cosh(1.5 - ax)) +
                 p[j] * (std::cosh(0.5 - 2.0 * ax) - std::cosh(1.5 - 2.0 * ax)));
      pair_q_k1k2 += p[j] * (std::sinh(0.5 + ax) + std::sinh(1.5 - ax));
      pair_q_k2 += 0.5 * p[j] * p[j] * (std::sinh(1.5 - 2.0 * ax) - std::sinh(0.5 - 2.0 * ax));
    }

    // Ordered triple sums: j < m < k, and m < j < k minus/plus j < k < m.
    double split_sinh = 0.0, split_q1 = 0.0, split_cosh = 0.0;
    double side_p = 0.0, side_cosh = 0.0, side_sinh = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t kk = j + 1; kk < n; ++kk) {
        const double xj = xi(j), xk = xi(kk);
        const double w = p[j] * p[kk];
        if (j < m && m < kk) {
          split_sinh += w * std::sinh(xj + xk);
          split_q1 += w * (std::sinh(1.5 + xj - xk) - std::sinh(0.5 + xj - xk));
          split_cosh += w * std::cosh(xj + xk);
        } else if (m < j || kk < m) {
          const double sign = (m < j) ? 1.0 : -1.0;  // m < j < k versus j < k < m
          const double a = std::abs(xj) + std::abs(xk);
          side_p += sign * w * (std::cosh(0.5 - a) - std::cosh(1.5 - a));
          side_cosh += w * std::cosh(xj - xk);
          side_sinh += w * (std::sinh(1.5 - a) - std::sinh(0.5 - a));
        }
      }
    }

    r.p_dot[m] = k.k2 * p[m] / (2.0 * sh) * (0.5 * pair_p + 2.0 * sh * split_sinh + side_p) +
                 k.k3 * p[m] / (2.0 * sh) * k3_p;

    r.q_dot[m] = ((2.0 * k.k1 / 3.0 + k.k2) * sh * sh + 0.5 * k.k2) * p[m] * p[m] +
                 (k.k1 + k.k2) * p[m] / (2.0 * sh) * pair_q_k1k2 +
                 (2.0 * k.k1 + k.k2) / (2.0 * sh) * (split_q1 + sh * (sum_p2 + 2.0 * side_cosh)) +
                 k.k2 / (2.0 * sh) * (pair_q_k2 + 2.0 * sh * split_cosh + side_sinh) +
                 k.k3 / (2.0 * sh) * k3_q;
  }
  return r;
}

PeakonRhs peakon_rhs(const PeakonState& s, const ModelParams& k, double eps_collide) {
  return s.domain == Domain::line ? rhs_line(s, k, eps_collide) : rhs_periodic(s, k, eps_collide);
}

TransformedRhs two_peakon_transformed_rhs(const PeakonState& s, const ModelParams& k) {
  if (s.size() != 2 || s.domain != Domain::line)
    throw std::invalid_argument("two_peakon_transformed_rhs needs a two-peakon line state");
  const double Pp = s.p[0] + s.p[1];
  const double Pm = s.p[0] - s.p[1];
  const double Qm = s.q[0] - s.q[1];
  const double E = std::exp(-std::abs(Qm));
  const double sigma = sgn(Qm);
  const double sum_sq = Pp * Pp + Pm * Pm;   // 2 (p1^2 + p2^2)
  const double diff_sq = Pp * Pp - Pm * Pm;  // 4 p1 p2
  TransformedRhs r{};
  r.P_plus_dot = sigma * 0.25 * k.k2 * diff_sq * Pm * E * (1.0 - E);
  r.P_minus_dot = sigma * 0.25 * diff_sq * E * (k.k2 * Pp * (1.0 + E) + 2.0 * k.k3);
  r.Q_plus_dot = sum_sq * (k.k1 / 3.0 + 0.5 * k.k2 * (1.0 + E * E)) + (k.k1 + k.k2) * diff_sq * E +
                 k.k3 * Pp * (1.0 + E);
  r.Q_minus_dot = Pp * Pm * (2.0 * k.k1 / 3.0 + k.k2 * (1.0 - E * E)) + k.k3 * Pm * (1.0 - E);
  return r;
}

double peakon_energy(const PeakonState& s) {
  double sum = 0.0;
  if (s.domain == Domain::line) {
    const std::size_t n = s.size();
    // Gram sum with the same prefix recursions as rhs_line (positions sorted).
    std::vector<double> left(n, 0.0), right(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) left[i] = std::exp(-(s.q[i] - s.q[i - 1])) * (left[i - 1] + s.p[i - 1]);
    for (std::size_t i = n - 1; i-- > 0;) right[i] = std::exp(-(s.q[i + 1] - s.q[i])) * (right[i + 1] + s.p[i + 1]);
    for (std::size_t i = 0; i < n; ++i) sum += s.p[i] * (s.p[i] + left[i] + right[i]);
    return 2.0 * sum;
  }
  for (std::size_t i = 0; i < s.size(); ++i) sum += s.p[i] * peakon_field_eval(s, s.q[i]).u;
  return 2.0 * kSinhHalf * sum;
}

PeakonState canonical_circle_state(const PeakonState& s) {
  PeakonState out;
  out.t = s.t;
  out.domain = Domain::circle;
  const auto order = circle_order(s.q);
  for (std::size_t idx : order) {
    out.p.push_back(s.p[idx]);
    out.q.push_back(frac(s.q[idx]));
  }
  return out;
}

PeakonState PeakonTrajectory::from_raw(double t, const std::vector<double>& y) const {
  const std::size_t n = y.size() / 2;
  PeakonState s;
  s.t = t;
  s.domain = domain;
  s.p.assign(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n));
  s.q.assign(y.begin() + static_cast<std::ptrdiff_t>(n), y.end());
  return s;
}

PeakonState PeakonTrajectory::unwrapped_at(double t) const {
  if (sample_times_.empty()) throw std::logic_error("empty trajectory");
  const double slack = 1e-12 * std::max(1.0, std::abs(t));
  if (t < sample_times_.front() - slack || t > sample_times_.back() + slack)
    throw std::out_of_range("trajectory time outside the integrated window");
  auto it = std::lower_bound(sample_times_.begin(), sample_times_.end(), t);
  if (it != sample_times_.end() && *it == t)
    return from_raw(t, raw_[static_cast<std::size_t>(it - sample_times_.begin())]);
  std::size_t i = static_cast<std::size_t>(it - sample_times_.begin());
  i = i == 0 ? 0 : i - 1;
  i = std::min(i, segments_.size() - 1);
  return from_raw(t, segments_[i].evaluate(t));
}

PeakonTrajectory PeakonTrajectory::frozen(const PeakonState& s, double t_end) {
  PeakonTrajectory traj;
  traj.domain = s.domain;
  traj.completed = true;
  std::vector<double> y(s.p);
  y.insert(y.end(), s.q.begin(), s.q.end());
  DenseSegment seg;
  seg.t0 = s.t;
  seg.h = t_end - s.t;
  seg.r1 = y;
  seg.r2.assign(y.size(), 0.0);
  seg.r3 = seg.r4 = seg.r5 = seg.r2;
  traj.segments_.push_back(seg);
  for (double t : {s.t, t_end}) {
    traj.sample_times_.push_back(t);
    traj.raw_.push_back(y);
    auto st = s;
    st.t = t;
    traj.samples.push_back(st);
  }
  traj.events.push_back({t_end, "completed", "frozen"});
  return traj;
}

PeakonState PeakonTrajectory::state_at(double t) const {
  auto s = unwrapped_at(t);
  return domain == Domain::circle ? canonical_circle_state(s) : s;
}

PeakonTrajectory integrate_peakons(const PeakonState& s0, const ModelParams& k, double t_end,
                                   const PeakonOptions& opts) {
  k.validate();
  s0.validate(opts.eps_collide);
  const std::size_t n = s0.size();
  const Domain domain = s0.domain;

  PeakonTrajectory traj;
  traj.domain = domain;
  traj.atol = opts.atol;
  traj.rtol = opts.rtol;

  std::vector<double> y0(2 * n);
  std::copy(s0.p.begin(), s0.p.end(), y0.begin());
  std::copy(s0.q.begin(), s0.q.end(), y0.begin() + static_cast<std::ptrdiff_t>(n));

  auto unpack = [&](double t, std::span<const double> y) {
    PeakonState s;
    s.t = t;
    s.domain = domain;
    s.p.assign(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n));
    s.q.assign(y.begin() + static_cast<std::ptrdiff_t>(n), y.end());
    return s;
  };

  OdeRhs rhs = [&](double t, std::span<const double> y, std::span<double> dy) {
    auto s = unpack(t, y);
    if (domain == Domain::line) {
      auto r = rhs_line(s, k, 0.0);
      std::copy(r.p_dot.begin(), r.p_dot.end(), dy.begin());
      std::copy(r.q_dot.begin(), r.q_dot.end(), dy.begin() + static_cast<std::ptrdiff_t>(n));
      return;
    }
    // Evaluate on the canonical labelling and map back.
    const auto order = circle_order(s.q);
    PeakonState c;
    c.domain = Domain::circle;
    for (std::size_t idx : order) {
      c.p.push_back(s.p[idx]);
      c.q.push_back(frac(s.q[idx]));
    }
    auto r = rhs_periodic(c, k, 0.0);
    for (std::size_t a = 0; a < n; ++a) {
      dy[order[a]] = r.p_dot[a];
      dy[n + order[a]] = r.q_dot[a];
    }
  };

  auto record = [&](double t, const std::vector<double>& y) {
    traj.sample_times_.push_back(t);
    traj.raw_.push_back(y);
    auto s = unpack(t, y);
    traj.samples.push_back(domain == Domain::circle ? canonical_circle_state(s) : s);
  };
  record(s0.t, y0);

  auto gap_of = [&](double t, const std::vector<double>& y) {
    auto s = unpack(t, y);
    if (domain == Domain::circle) s = canonical_circle_state(s);
    return s.min_gap();
  };

  OdeOptions o;
  o.atol = opts.atol;
  o.rtol = opts.rtol;
  o.max_steps = opts.max_steps;
  o.dense = true;
  o.output_times = opts.output_times;

  bool collided = false;
  auto on_step = [&](const StepInfo& info) {
    traj.segments_.push_back(*info.dense);
    std::vector<double> y(info.y.begin(), info.y.end());
    if (n > 1 && gap_of(info.t, y) < opts.eps_collide) {
      // Bisect the first crossing of gap = eps_collide on this step.
      const auto& seg = traj.segments_.back();
      double lo = info.t_prev, hi = info.t;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (gap_of(mid, seg.evaluate(mid)) < opts.eps_collide)
          hi = mid;
        else
          lo = mid;
      }
      record(hi, seg.evaluate(hi));
      traj.events.push_back({hi, "collision", "neighbouring peaks closer than " + std::to_string(opts.eps_collide)});
      collided = true;
      return false;
    }
    record(info.t, y);
    return true;
  };

  auto res = integrate_dopri5(rhs, s0.t, y0, t_end, o, on_step);
  if (collided) return traj;
  switch (res.status) {
    case OdeStatus::completed:
      traj.completed = true;
      traj.events.push_back({res.t, "completed", ""});
      break;
    case OdeStatus::step_underflow:
      traj.events.push_back({res.t, "step_underflow", "stiffness or imminent collision: " + res.message});
      break;
    case OdeStatus::max_steps:
      traj.events.push_back({res.t, "max_steps", res.message});
      break;
    case OdeStatus::stopped:
      break;
  }
  return traj;
}

}  // namespace mchn
