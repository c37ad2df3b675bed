#include "mchn/reductions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mchn {

namespace {

using Branch = AmplitudeSolution::Branch;

ReductionCase real_pair(std::string name, ModelParams k, Domain d, double c, double r1, double r2) {
  ReductionCase rc{std::move(name), k, d, c, Branch::two_real, {std::min(r1, r2), std::max(r1, r2)}, {}};
  return rc;
}

ReductionCase single(std::string name, ModelParams k, Domain d, double c, Branch b, double r) {
  return {std::move(name), k, d, c, b, {r}, {}};
}

// (-b +- sqrt(disc)) / den for disc of either sign.
ReductionCase quadratic(std::string name, ModelParams k, Domain d, double c, double b, double disc, double den) {
  if (disc > 0.0) return real_pair(std::move(name), k, d, c, (-b + std::sqrt(disc)) / den, (-b - std::sqrt(disc)) / den);
  ReductionCase rc{std::move(name), k, d, c, Branch::complex_pair, {}, {}};
  const double re = -b / den, im = std::abs(std::sqrt(-disc) / den);
  rc.closed_complex = {{re, -im}, {re, im}};
  return rc;
}

}  // namespace

std::vector<ReductionCase> reduction_cases() {
  const Domain L = Domain::line, S = Domain::circle;
  const double ch = std::cosh(0.5), sech = 1.0 / ch;
  std::vector<ReductionCase> out;

  // Line, single peakon speed c = (2k1/3 + k2) a^2 + k3 a.
  out.push_back(single("CH", {0, 0, 1}, L, 1.7, Branch::linear, 1.7));
  out.push_back(real_pair("mCH", {1, 0, 0}, L, 2.0 / 3.0, std::sqrt(3.0 * (2.0 / 3.0) / 2.0),
                          -std::sqrt(3.0 * (2.0 / 3.0) / 2.0)));
  out.push_back(real_pair("Novikov", {0, 1, 0}, L, 4.0, 2.0, -2.0));
  {
    const double k1 = 1.5, k3 = 0.7, c = 2.0;
    out.push_back(quadratic("mCH-CH", {k1, 0, k3}, L, c, 3 * k3, 9 * k3 * k3 + 24 * c * k1, 4 * k1));
  }
  {
    const double k1 = 1.0, k2 = 2.0, c = 3.0;
    const double a = std::sqrt(3 * c / (2 * k1 + 3 * k2));
    out.push_back(real_pair("mCH-Novikov", {k1, k2, 0}, L, c, a, -a));
  }
  {
    const double k2 = 0.8, k3 = 1.3, c = 0.9;
    out.push_back(quadratic("Novikov-CH", {0, k2, k3}, L, c, k3, k3 * k3 + 4 * c * k2, 2 * k2));
  }
  {
    const double k1 = 1, k2 = 1, k3 = 1, c = 2.5, f = 2 * k1 + 3 * k2;
    out.push_back(quadratic("mCH-Novikov-CH", {k1, k2, k3}, L, c, 3 * k3, 9 * k3 * k3 + 12 * c * f, 2 * f));
  }
  {
    const double k1 = 1, k2 = 1, k3 = 1, c = -1.0, f = 2 * k1 + 3 * k2;
    out.push_back(quadratic("mCH-Novikov-CH complex", {k1, k2, k3}, L, c, 3 * k3, 9 * k3 * k3 + 12 * c * f, 2 * f));
  }
  out.push_back(single("degenerate 2k1+3k2=0", {3, -2, 1}, L, 5.0, Branch::linear, 5.0));
  out.push_back(single("degenerate 2k1+3k2=0, k3=2", {1.5, -1, 2}, L, -3.0, Branch::linear, -1.5));

  // Circle, c = [k1/3 + cosh^2(1/2)(2k1/3 + k2)] a^2 + cosh(1/2) k3 a.
  out.push_back(single("CH", {0, 0, 1}, S, 1.7, Branch::linear, sech * 1.7));
  {
    const double c = 2.0, a = std::sqrt(3 * c / (2 + std::cosh(1.0)));
    out.push_back(real_pair("mCH", {1, 0, 0}, S, c, a, -a));
  }
  out.push_back(real_pair("Novikov", {0, 1, 0}, S, 4.0, 2.0 * sech, -2.0 * sech));
  {
    const double k1 = 1.5, k3 = 0.7, c = 2.0;
    const double disc = 12 * c * k1 + 3 * ch * ch * (3 * k3 * k3 + 8 * c * k1);
    out.push_back(quadratic("mCH-CH", {k1, 0, k3}, S, c, 3 * ch * k3, disc, (4 + 2 * std::cosh(1.0)) * k1));
  }
  {
    const double k1 = 1.0, k2 = 2.0, c = 3.0;
    const double a = std::sqrt(3 * c / (k1 + ch * ch * (2 * k1 + 3 * k2)));
    out.push_back(real_pair("mCH-Novikov", {k1, k2, 0}, S, c, a, -a));
  }
  {
    const double k2 = 0.8, k3 = 1.3, c = 0.9;
    const double r = std::sqrt(k3 * k3 + 4 * c * k2);
    out.push_back(real_pair("Novikov-CH", {0, k2, k3}, S, c, sech * (-k3 + r) / (2 * k2), sech * (-k3 - r) / (2 * k2)));
  }
  {
    const double k1 = 1, k2 = 1, k3 = 1, c = 2.5, f = (2 + std::cosh(1.0)) * k1 + 3 * ch * ch * k2;
    out.push_back(quadratic("mCH-Novikov-CH", {k1, k2, k3}, S, c, 3 * ch * k3, 9 * ch * ch * k3 * k3 + 12 * c * f, 2 * f));
  }
  {
    const double k1 = 1, k2 = 1, k3 = 1, c = -1.0, f = (2 + std::cosh(1.0)) * k1 + 3 * ch * ch * k2;
    out.push_back(
        quadratic("mCH-Novikov-CH complex", {k1, k2, k3}, S, c, 3 * ch * k3, 9 * ch * ch * k3 * k3 + 12 * c * f, 2 * f));
  }
  {
    // f(k1, k2) = (2 + cosh 1) k1 + 3 cosh^2(1/2) k2 = 0.
    const double k1 = 3 * ch * ch, k2 = -(2 + std::cosh(1.0)), k3 = 1.0, c = 5.0;
    out.push_back(single("degenerate f=0", {k1, k2, k3}, S, c, Branch::linear, sech * c / k3));
  }
  return out;
}

ReductionCheck check_reduction(const ReductionCase& rc) {
  ReductionCheck r;
  r.expected = rc;
  r.computed = amplitudes_for_speed(rc.c, rc.k, rc.domain);
  r.branch_matches = r.computed.branch == rc.branch && r.computed.real_roots.size() == rc.closed_real.size() &&
                     r.computed.complex_roots.size() == rc.closed_complex.size();
  if (!r.branch_matches) {
    r.max_error = std::numeric_limits<double>::infinity();
    return r;
  }
  for (std::size_t i = 0; i < rc.closed_real.size(); ++i)
    r.max_error = std::max(r.max_error, std::abs(r.computed.real_roots[i] - rc.closed_real[i]) /
                                            std::max(1.0, std::abs(rc.closed_real[i])));
  auto cz = r.computed.complex_roots;
  std::sort(cz.begin(), cz.end(), [](auto a, auto b) { return a.imag() < b.imag(); });
  for (std::size_t i = 0; i < rc.closed_complex.size(); ++i)
    r.max_error = std::max(r.max_error, std::abs(cz[i] - rc.closed_complex[i]) /
                                            std::max(1.0, std::abs(rc.closed_complex[i])));
  return r;
}

}  // namespace mchn
