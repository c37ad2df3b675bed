#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mchn/diagnostics.hpp"
#include "mchn/pde.hpp"

namespace mchn {

struct HolderProbeOptions {
  /// Perturbation sizes; v0 = u0 + eps * (v0_direction).
  std::vector<double> eps = {1e-2, 5e-3, 2.5e-3, 1.25e-3};
  std::size_t comparison_times = 8;  // evenly spaced in (0, t_end]
  unsigned jobs = 1;
  PdeOptions pde;
};

struct HolderProbeReport {
  double s = 0.0, r = 0.0;
  HolderClass predicted;
  std::vector<double> eps;
  std::vector<double> data_distance;      // ||u0 - v0||_{H^r}
  std::vector<double> solution_distance;  // max over comparison times of ||u - v||_{H^r}
  double fitted_slope = 0.0;              // least squares of log distance vs log data distance
  bool aborted = false;
  std::string detail;
};

/// Paired runs from u0 and u0 + eps * direction over a ladder of eps. Reports
/// the fitted exponent next to the classifier's beta; the bound is one-sided,
/// so the report carries no verdict.
HolderProbeReport holder_probe(const Field& u0, const Field& direction, double s, double r, double t_end,
                               const ModelParams& k, const HolderProbeOptions& opts = {});

}  // namespace mchn
