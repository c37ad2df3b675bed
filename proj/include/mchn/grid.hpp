#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace mchn {

enum class Domain { line, circle };

std::string to_string(Domain d);

/// Uniform periodic grid x_j = origin + j * period / n.
///
/// Circle problems use period 1 and origin 0. Line problems live on the
/// truncated box [-L, L) with period 2L and origin -L.
struct GridSpec {
  double period = 1.0;
  std::size_t n = 256;
  double origin = 0.0;

  static GridSpec circle(std::size_t n) { return {1.0, n, 0.0}; }
  static GridSpec line_box(double half_length, std::size_t n) {
    return {2.0 * half_length, n, -half_length};
  }

  double spacing() const { return period / static_cast<double>(n); }
  double x(std::size_t j) const { return origin + static_cast<double>(j) * spacing(); }
  std::vector<double> nodes() const;

  /// Throws std::invalid_argument unless n >= 8 is a power of two and period > 0.
  void validate() const;
};

enum class Role { u, u_x, m, M, generic };

struct Field {
  GridSpec grid;
  std::vector<double> values;
  Role role = Role::generic;

  Field() = default;
  Field(GridSpec g, std::vector<double> v, Role r = Role::generic);

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t j) const { return values[j]; }
  double& operator[](std::size_t j) { return values[j]; }

  bool all_finite() const;
  double min() const;
  double max() const;
  double sup_norm() const;
};

/// Samples f on the grid nodes.
template <class F>
Field sample(const GridSpec& g, F&& f, Role role = Role::generic) {
  std::vector<double> v(g.n);
  for (std::size_t j = 0; j < g.n; ++j) v[j] = f(g.x(j));
  return Field(g, std::move(v), role);
}

}  // namespace mchn
