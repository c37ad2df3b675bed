#include "mchn/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace mchn {

namespace {

struct PlanPair {
  fftw_plan forward;
  fftw_plan inverse;
};

// The FFTW planner is not thread-safe; execution with new arrays is.
PlanPair plans_for(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, PlanPair> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  const int ni = static_cast<int>(n);
  auto* real_buf = fftw_alloc_real(n);
  auto* cplx_buf = fftw_alloc_complex(n / 2 + 1);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair p{fftw_plan_dft_r2c_1d(ni, real_buf, cplx_buf, flags),
             fftw_plan_dft_c2r_1d(ni, cplx_buf, real_buf, flags | FFTW_DESTROY_INPUT)};
  fftw_free(real_buf);
  fftw_free(cplx_buf);
  if (!p.forward || !p.inverse) throw std::runtime_error("FFTW plan creation failed");
  cache.emplace(n, p);
  return p;
}

}  // namespace

std::string to_string(Domain d) { return d == Domain::line ? "line" : "circle"; }

std::vector<double> GridSpec::nodes() const {
  std::vector<double> xs(n);
  for (std::size_t j = 0; j < n; ++j) xs[j] = x(j);
  return xs;
}

void GridSpec::validate() const {
  if (n < 8 || (n & (n - 1)) != 0)
    throw std::invalid_argument("grid size must be a power of two >= 8, got " + std::to_string(n));
  if (!(period > 0.0) || !std::isfinite(period))
    throw std::invalid_argument("grid period must be positive and finite");
  if (!std::isfinite(origin)) throw std::invalid_argument("grid origin must be finite");
}

Field::Field(GridSpec g, std::vector<double> v, Role r) : grid(g), values(std::move(v)), role(r) {
  if (values.size() != grid.n) throw std::invalid_argument("field size does not match grid");
}

bool Field::all_finite() const {
  for (double v : values)
    if (!std::isfinite(v)) return false;
  return true;
}

double Field::min() const {
  double m = values.at(0);
  for (double v : values) m = std::min(m, v);
  return m;
}

double Field::max() const {
  double m = values.at(0);
  for (double v : values) m = std::max(m, v);
  return m;
}

double Field::sup_norm() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

Spectral::Spectral(const GridSpec& grid) : grid_(grid) {
  grid_.validate();
  xi_.resize(modes());
  for (std::size_t k = 0; k < xi_.size(); ++k)
    xi_[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / grid_.period;
  auto p = plans_for(grid_.n);
  forward_plan_ = p.forward;
  inverse_plan_ = p.inverse;
}

std::vector<Complex> Spectral::forward(std::span<const double> f) const {
  if (f.size() != grid_.n) throw std::invalid_argument("Spectral::forward: size mismatch");
  std::vector<double> in(f.begin(), f.end());
  std::vector<Complex> out(modes());
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), in.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / static_cast<double>(grid_.n);
  for (auto& c : out) c *= scale;
  return out;
}

std::vector<double> Spectral::inverse(std::span<const Complex> c) const {
  if (c.size() != modes()) throw std::invalid_argument("Spectral::inverse: size mismatch");
  std::vector<Complex> in(c.begin(), c.end());
  // A real field has real DC and Nyquist coefficients.
  in.front() = in.front().real();
  in.back() = in.back().real();
  std::vector<double> out(grid_.n);
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_), reinterpret_cast<fftw_complex*>(in.data()),
                       out.data());
  return out;
}

void Spectral::truncate_two_thirds(std::span<Complex> c) const {
  const std::size_t cutoff = grid_.n / 3;
  for (std::size_t k = cutoff + 1; k < c.size(); ++k) c[k] = 0.0;
}

Spectral::PointValue Spectral::evaluate(std::span<const Complex> c, double x) const {
  const std::size_t nyq = grid_.n / 2;
  const double s = x - grid_.origin;
  const double theta = 2.0 * std::numbers::pi * s / grid_.period;
  const Complex z = std::polar(1.0, theta);
  Complex zk = z;
  PointValue v{c[0].real(), 0.0, 0.0};
  for (std::size_t k = 1; k < nyq; ++k) {
    const Complex term = c[k] * zk;
    const double xi = xi_[k];
    v.f += 2.0 * term.real();
    v.fx += -2.0 * xi * term.imag();
    v.fxx += -2.0 * xi * xi * term.real();
    // Refresh the power every 64 steps to keep rounding drift bounded.
    zk = (k % 64 == 63) ? std::polar(1.0, theta * static_cast<double>(k + 1)) : zk * z;
  }
  const double xn = xi_[nyq];
  const double cn = c[nyq].real();
  v.f += cn * std::cos(xn * s);
  v.fx += -xn * cn * std::sin(xn * s);
  v.fxx += -xn * xn * cn * std::cos(xn * s);
  return v;
}

}  // namespace mchn
