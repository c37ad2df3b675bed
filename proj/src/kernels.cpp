#include "mchn/kernels.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "mchn/spectral.hpp"

namespace mchn {

namespace {

void require_finite(const Field& f, const char* what) {
  if (!f.all_finite()) throw std::invalid_argument(std::string(what) + ": non-finite input sample");
}

// Running integral A_j = int_{-inf}^{x_j} e^{-(x_j - y)} f(y) dy over the periodic
// extension of the linear interpolant of f.
std::vector<double> causal_sweep(const std::vector<double>& f, double h, double period) {
  const std::size_t n = f.size();
  const double decay = std::exp(-h);
  const double w_far = (1.0 - decay * (1.0 + h)) / h;
  const double w_near = (1.0 - decay) - w_far;

  // One period (x_0, x_0 + period] seen from its right end.
  double acc = 0.0;
  for (std::size_t j = 1; j <= n; ++j) acc = decay * acc + w_far * f[j - 1] + w_near * f[j % n];
  // Earlier periods contribute a geometric series.
  std::vector<double> a(n);
  a[0] = acc / (1.0 - std::exp(-period));
  for (std::size_t j = 1; j < n; ++j) a[j] = decay * a[j - 1] + w_far * f[j - 1] + w_near * f[j];
  return a;
}

}  // namespace

double kernel_eval(double x, Domain domain) {
  if (domain == Domain::line) return 0.5 * std::exp(-std::abs(x));
  const double frac = x - std::floor(x);
  return 0.5 / std::sinh(0.5) * std::cosh(frac - 0.5);
}

Field helmholtz_solve(const Field& m) {
  require_finite(m, "helmholtz_solve");
  Spectral sp(m.grid);
  auto u = apply_multiplier(sp, m.values, [&](std::size_t k) {
    const double xi = sp.wavenumber(k);
    return 1.0 / (1.0 + xi * xi);
  });
  return Field(m.grid, std::move(u), Role::u);
}

double helmholtz_roundoff(const GridSpec& grid) {
  const double xi = 2.0 * std::numbers::pi * static_cast<double>(grid.n / 2) / grid.period;
  return 16.0 * std::numeric_limits<double>::epsilon() * (1.0 + xi * xi);
}

Field helmholtz_apply(const Field& u) {
  require_finite(u, "helmholtz_apply");
  Spectral sp(u.grid);
  auto m = apply_multiplier(sp, u.values, [&](std::size_t k) {
    const double xi = sp.wavenumber(k);
    return 1.0 + xi * xi;
  });
  return Field(u.grid, std::move(m), Role::m);
}

Field spectral_derivative(const Field& f) {
  require_finite(f, "spectral_derivative");
  Spectral sp(f.grid);
  auto d = apply_multiplier(sp, f.values, [&](std::size_t k) { return Complex(0.0, sp.derivative_wavenumber(k)); });
  return Field(f.grid, std::move(d), f.role == Role::u ? Role::u_x : Role::generic);
}

Field oneside_convolve(const Field& m, Side side, OneSidedMethod method) {
  require_finite(m, "oneside_convolve");
  if (method == OneSidedMethod::spectral) {
    Spectral sp(m.grid);
    const double sign = side == Side::plus ? 1.0 : -1.0;
    const std::size_t nyq = m.grid.n / 2;
    auto out = apply_multiplier(sp, m.values, [&](std::size_t k) -> Complex {
      // At Nyquist the pair must still sum to 1/(1 + xi^2) with zero difference.
      if (k == nyq) return 0.5 / (1.0 + sp.wavenumber(k) * sp.wavenumber(k));
      return 0.5 / Complex(1.0, sign * sp.wavenumber(k));
    });
    return Field(m.grid, std::move(out), Role::generic);
  }

  const double h = m.grid.spacing();
  const std::size_t n = m.grid.n;
  std::vector<double> out;
  if (side == Side::plus) {
    out = causal_sweep(m.values, h, m.grid.period);
  } else {
    // p_minus * f (x) = p_plus * g (-x) with g(y) = f(-y): reverse the node order.
    std::vector<double> rev(n);
    for (std::size_t j = 0; j < n; ++j) rev[j] = m.values[n - 1 - j];
    auto a = causal_sweep(rev, h, m.grid.period);
    out.resize(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = a[n - 1 - j];
  }
  for (double& v : out) v *= 0.5;
  return Field(m.grid, std::move(out), Role::generic);
}

double sobolev_norm(const Field& f, double s) {
  if (!(s >= 0.0)) throw std::invalid_argument("sobolev_norm: s must be >= 0");
  require_finite(f, "sobolev_norm");
  Spectral sp(f.grid);
  const auto c = sp.forward(f.values);
  const std::size_t nyq = f.grid.n / 2;
  double sum = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double xi = sp.derivative_wavenumber(k);
    const double weight = (k == 0 || k == nyq) ? 1.0 : 2.0;
    sum += weight * std::pow(1.0 + xi * xi, s) * std::norm(c[k]);
  }
  return std::sqrt(sum * f.grid.period);
}

double periodic_integral(const Field& f) {
  double sum = 0.0;
  for (double v : f.values) sum += v;
  return sum * f.grid.spacing();
}

}  // namespace mchn
