#pragma once

#include <cstddef>
#include <vector>

namespace mchn {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
QuadratureRule gauss_legendre(std::size_t n);

/// Composite Gauss-Legendre rule on [a, b] with the given interior breakpoints
/// (need not be sorted; points outside (a, b) are ignored). Each piece is split
/// into equal panels no longer than max_panel.
QuadratureRule composite_gauss(double a, double b, std::vector<double> breakpoints, double max_panel,
                               std::size_t points_per_panel);

}  // namespace mchn
