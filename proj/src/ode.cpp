#include "mchn/ode.hpp"

#include <algorithm>
#include <cmath>

namespace mchn {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

double scaled_rms(std::span<const double> v, std::span<const double> ref, const OdeOptions& o) {
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double sc = o.atol + o.rtol * std::abs(ref[i]);
    sum += (v[i] / sc) * (v[i] / sc);
  }
  return v.empty() ? 0.0 : std::sqrt(sum / static_cast<double>(v.size()));
}

bool finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

void DenseSegment::evaluate(double t, std::span<double> out) const {
  const double s = (t - t0) / h;
  const double s1 = 1.0 - s;
  for (std::size_t i = 0; i < r1.size(); ++i)
    out[i] = r1[i] + s * (r2[i] + s1 * (r3[i] + s * (r4[i] + s1 * r5[i])));
}

std::vector<double> DenseSegment::evaluate(double t) const {
  std::vector<double> out(r1.size());
  evaluate(t, out);
  return out;
}

OdeResult integrate_dopri5(const OdeRhs& rhs, double t0, std::vector<double> y0, double t_end,
                           const OdeOptions& opts, const std::function<bool(const StepInfo&)>& on_step) {
  const std::size_t n = y0.size();
  OdeResult res;
  res.t = t0;
  res.y = std::move(y0);
  if (!(t_end > t0)) return res;

  std::vector<double> outputs;
  for (double to : opts.output_times)
    if (to > t0 && to < t_end) outputs.push_back(to);
  std::sort(outputs.begin(), outputs.end());
  outputs.erase(std::unique(outputs.begin(), outputs.end()), outputs.end());
  std::size_t next_output = 0;

  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), err(n), ref(n);
  auto& y = res.y;
  double t = t0;

  try {
    rhs(t, y, k1);
  } catch (const RhsDomainError& e) {
    res.status = OdeStatus::step_underflow;
    res.message = std::string("right-hand side failed at the initial state: ") + e.what();
    return res;
  }

  double h = opts.initial_step;
  if (h <= 0.0) {
    for (std::size_t i = 0; i < n; ++i) ref[i] = std::abs(y[i]);
    const double dy0 = scaled_rms(y, ref, opts);
    const double df0 = scaled_rms(k1, ref, opts);
    double h0 = (dy0 < 1e-5 || df0 < 1e-5) ? 1e-6 : 0.01 * dy0 / df0;
    h0 = std::min(h0, t_end - t0);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h0 * k1[i];
    double ddf = 0.0;
    try {
      rhs(t + h0, ytmp, k2);
      for (std::size_t i = 0; i < n; ++i) err[i] = k2[i] - k1[i];
      ddf = scaled_rms(err, ref, opts) / h0;
    } catch (const RhsDomainError&) {
      ddf = 1.0 / (h0 * h0);
    }
    const double big = std::max(df0, ddf);
    const double h1 = big <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / big, 0.2);
    h = std::min(100.0 * h0, h1);
  }
  h = std::min({h, opts.max_step, t_end - t0});
  if (opts.step_limit) h = std::min(h, opts.step_limit(t0, y));

  DenseSegment seg;
  bool last_rejected = false;
  double err_prev = 1e-4;
  while (t < t_end) {
    if (res.accepted + res.rejected >= opts.max_steps) {
      res.status = OdeStatus::max_steps;
      res.message = "maximum number of steps reached";
      break;
    }
    const double hmin = opts.min_step * std::max(1.0, std::abs(t));
    if (h < hmin) {
      res.status = OdeStatus::step_underflow;
      if (res.message.empty()) res.message = "step size underflow";
      break;
    }

    // Land exactly on the next requested output time or on t_end.
    double target = t_end;
    while (next_output < outputs.size() && outputs[next_output] <= t) ++next_output;
    if (next_output < outputs.size()) target = outputs[next_output];
    bool hits_target = false;
    const double h_try = h;
    if (t + h >= target || target - (t + h) < 1e-12 * std::max(1.0, std::abs(target))) {
      h = target - t;
      hits_target = true;
    }

    bool ok = true;
    try {
      for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
      rhs(t + c2 * h, ytmp, k2);
      for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
      rhs(t + c3 * h, ytmp, k3);
      for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      rhs(t + c4 * h, ytmp, k4);
      for (std::size_t i = 0; i < n; ++i)
        ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      rhs(t + c5 * h, ytmp, k5);
      for (std::size_t i = 0; i < n; ++i)
        ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
      rhs(t + h, ytmp, k6);
      for (std::size_t i = 0; i < n; ++i)
        ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
      rhs(t + h, ynew, k7);
    } catch (const RhsDomainError& e) {
      ok = false;
      res.message = e.what();
    }

    double err_norm = std::numeric_limits<double>::infinity();
    if (ok && finite(ynew) && finite(k7)) {
      for (std::size_t i = 0; i < n; ++i) {
        err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        ref[i] = std::max(std::abs(y[i]), std::abs(ynew[i]));
      }
      err_norm = scaled_rms(err, ref, opts);
    }

    if (!(err_norm <= 1.0)) {
      ++res.rejected;
      const double fac = std::isfinite(err_norm) ? std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 1.0) : 0.25;
      h *= fac;
      last_rejected = true;
      continue;
    }

    if (opts.dense) {
      seg.t0 = t;
      seg.h = h;
      seg.r1 = y;
      seg.r2.resize(n);
      seg.r3.resize(n);
      seg.r4.resize(n);
      seg.r5.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        seg.r2[i] = ynew[i] - y[i];
        seg.r3[i] = h * k1[i] - seg.r2[i];
        seg.r4[i] = seg.r2[i] - h * k7[i] - seg.r3[i];
        seg.r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
      }
    }

    const double t_prev = t;
    t = hits_target ? target : t + h;
    y.swap(ynew);
    k1.swap(k7);
    ++res.accepted;
    res.last_step = h;
    res.t = t;
    res.message.clear();

    if (on_step) {
      StepInfo info{t_prev, t, h, y, k1, opts.dense ? &seg : nullptr};
      if (!on_step(info)) {
        res.status = OdeStatus::stopped;
        return res;
      }
    }

    // PI control damps step-size oscillation when the step is stability-limited.
    const double e = std::max(err_norm, 1e-10);
    double fac = std::clamp(0.9 * std::pow(e, -(0.2 - 0.75 * opts.pi_beta)) * std::pow(err_prev, opts.pi_beta), 0.2, 5.0);
    err_prev = e;
    if (last_rejected) fac = std::min(fac, 1.0);
    last_rejected = false;
    // A step clipped to land on a target does not shrink the next one.
    h = h * fac;
    if (hits_target) h = std::max(h, h_try);
    h = std::min(h, opts.max_step);
    if (opts.step_limit) h = std::min(h, opts.step_limit(t, y));
    if (t < t_end) h = std::min(h, t_end - t);
  }
  res.t = t;
  return res;
}

}  // namespace mchn
