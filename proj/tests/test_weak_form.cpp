#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "mchn/weak_form.hpp"

using namespace mchn;

namespace {

PeakonTrajectory run(const PeakonState& s, const ModelParams& k, double t_end, const std::vector<TestFunction>& phis) {
  PeakonOptions o;
  o.atol = o.rtol = 1e-11;
  for (const auto& phi : phis) {
    const auto n = weak_residual_time_nodes(phi);
    o.output_times.insert(o.output_times.end(), n.begin(), n.end());
  }
  return integrate_peakons(s, k, t_end, o);
}

}  // namespace

TEST_CASE("bump profile") {
  TestFunction phi;
  phi.x_center = 1.0;
  phi.x_radius = 2.0;
  CHECK(phi.space_factor(1.0) == 1.0);
  CHECK(phi.space_factor(3.0) == 0.0);
  CHECK(phi.space_factor(-1.5) == 0.0);
  const double x = 1.7, h = 1e-6;
  CHECK(phi.space_factor_dx(x) == doctest::Approx((phi.space_factor(x + h) - phi.space_factor(x - h)) / (2 * h)).epsilon(1e-7));
  const double t = 0.6;
  CHECK(phi.time_factor_dt(t) == doctest::Approx((phi.time_factor(t + h) - phi.time_factor(t - h)) / (2 * h)).epsilon(1e-7));

  phi.order = 1;
  CHECK_THROWS_AS(phi.validate(), std::invalid_argument);
  phi.order = 6;
  phi.x_radius = 0.0;
  CHECK_THROWS_AS(phi.validate(), std::invalid_argument);
}

TEST_CASE("single peakon is a weak solution") {
  const ModelParams k{0.8, 0.5, 0.7};
  PeakonState s;
  s.p = {1.1};
  s.q = {0.0};
  std::vector<TestFunction> phis;
  for (double xc : {-0.5, 0.3, 1.0}) {
    TestFunction phi;
    phi.x_center = xc;
    phi.x_radius = 1.2;
    phis.push_back(phi);
  }
  const auto tr = run(s, k, 1.0, phis);
  for (const auto& phi : phis) {
    const auto r = weak_residual(tr, k, phi);
    CHECK(r.within_bound());
    CHECK(r.bound < 1e-6);
  }
}

TEST_CASE("frozen two-peakon trajectory is not") {
  const ModelParams k{1.0, 0.5, 0.3};
  PeakonState s;
  s.p = {1.0, 0.6};
  s.q = {-0.5, 0.8};
  TestFunction phi;
  phi.x_center = -0.3;
  phi.x_radius = 1.0;
  const auto good = weak_residual(run(s, k, 1.0, {phi}), k, phi);
  const auto bad = weak_residual(PeakonTrajectory::frozen(s, 1.0), k, phi);
  CHECK(good.within_bound());
  CHECK(std::abs(bad.residual) > 100.0 * good.bound);
  CHECK(std::abs(bad.residual) > 100.0 * bad.bound);
}

TEST_CASE("zero coefficients: frozen trajectory has zero residual") {
  PeakonState s;
  s.p = {1.0, -0.4};
  s.q = {-0.5, 0.8};
  TestFunction phi;
  const auto r = weak_residual(PeakonTrajectory::frozen(s, 1.0), {0, 0, 0}, phi);
  CHECK(std::abs(r.residual) < 1e-14);
}

TEST_CASE("input errors") {
  PeakonState s;
  s.p = {1.0};
  s.q = {0.0};
  TestFunction phi;
  phi.t_center = 0.9;
  phi.t_radius = 0.3;  // reaches past t_end = 1
  CHECK_THROWS_AS(weak_residual(PeakonTrajectory::frozen(s, 1.0), {1, 0, 0}, phi), std::invalid_argument);

  PeakonState c;
  c.domain = Domain::circle;
  c.p = {1.0};
  c.q = {0.5};
  CHECK_THROWS_AS(weak_residual(PeakonTrajectory::frozen(c, 1.0), {1, 0, 0}, TestFunction{}), std::invalid_argument);
}
