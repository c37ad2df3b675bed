#include "mchn/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace mchn {

namespace {

QuadratureRule compute_gauss_legendre(std::size_t n) {
  QuadratureRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const double dn = static_cast<double>(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (dn + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double dk = static_cast<double>(k);
        const double p2 = ((2.0 * dk - 1.0) * x * p1 - (dk - 1.0) * p0) / dk;
        p0 = p1;
        p1 = p2;
      }
      dp = dn * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

}  // namespace

QuadratureRule gauss_legendre(std::size_t n) {
  if (n == 0) throw std::invalid_argument("gauss_legendre: n must be positive");
  static std::mutex mutex;
  static std::map<std::size_t, QuadratureRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

QuadratureRule composite_gauss(double a, double b, std::vector<double> breakpoints, double max_panel,
                               std::size_t points_per_panel) {
  if (!(b > a)) throw std::invalid_argument("composite_gauss: empty interval");
  std::vector<double> cuts{a, b};
  for (double x : breakpoints)
    if (x > a && x < b) cuts.push_back(x);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const auto base = gauss_legendre(points_per_panel);
  QuadratureRule out;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double lo = cuts[c], hi = cuts[c + 1];
    if (!(hi > lo)) continue;
    const auto panels = static_cast<std::size_t>(std::max(1.0, std::ceil((hi - lo) / max_panel)));
    const double len = (hi - lo) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
      const double pa = lo + len * static_cast<double>(p);
      const double mid = pa + 0.5 * len;
      for (std::size_t i = 0; i < base.nodes.size(); ++i) {
        out.nodes.push_back(mid + 0.5 * len * base.nodes[i]);
        out.weights.push_back(0.5 * len * base.weights[i]);
      }
    }
  }
  return out;
}

}  // namespace mchn
