#pragma once

#include <complex>
#include <string>
#include <vector>

#include "mchn/grid.hpp"
#include "mchn/model.hpp"
#include "mchn/peakon.hpp"

namespace mchn {

/// One special case of the single-peakon speed relation with its amplitude
/// written out in closed form (independently of amplitudes_for_speed).
struct ReductionCase {
  std::string name;
  ModelParams k;
  Domain domain = Domain::line;
  double c = 0.0;
  AmplitudeSolution::Branch branch = AmplitudeSolution::Branch::none;
  std::vector<double> closed_real;                 // ascending
  std::vector<std::complex<double>> closed_complex;  // ascending imaginary part
};

/// CH, mCH, Novikov, mCH-CH, mCH-Novikov, Novikov-CH and the full family on
/// the line and on the circle, including the degenerate a = c/k3 branches and
/// complex amplitudes.
std::vector<ReductionCase> reduction_cases();

struct ReductionCheck {
  ReductionCase expected;
  AmplitudeSolution computed;
  double max_error = 0.0;  // over roots, relative to max(1, |root|)
  bool branch_matches = false;
  bool passed(double tol) const { return branch_matches && max_error <= tol; }
};

ReductionCheck check_reduction(const ReductionCase& rc);

}  // namespace mchn
