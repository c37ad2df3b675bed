#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "mchn/ode.hpp"

using namespace mchn;

TEST_CASE("exponential decay to tolerance") {
  OdeRhs f = [](double, std::span<const double> y, std::span<double> dy) { dy[0] = -y[0]; };
  OdeOptions o;
  o.atol = o.rtol = 1e-12;
  const auto r = integrate_dopri5(f, 0.0, {1.0}, 5.0, o);
  CHECK(r.status == OdeStatus::completed);
  CHECK(r.t == 5.0);
  CHECK(std::abs(r.y[0] - std::exp(-5.0)) < 1e-11);
}

TEST_CASE("lands exactly on output times") {
  OdeRhs f = [](double, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1];
    dy[1] = -y[0];
  };
  OdeOptions o;
  o.output_times = {2.5, 0.5, 1.0 / 3.0};
  std::vector<double> hit;
  integrate_dopri5(f, 0.0, {0.0, 1.0}, 3.0, o, [&](const StepInfo& s) {
    hit.push_back(s.t);
    return true;
  });
  for (double t : {1.0 / 3.0, 0.5, 2.5}) CHECK(std::find(hit.begin(), hit.end(), t) != hit.end());
}

TEST_CASE("dense output is fourth order accurate") {
  OdeRhs f = [](double, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1];
    dy[1] = -y[0];
  };
  OdeOptions o;
  o.dense = true;
  o.atol = o.rtol = 1e-12;
  double worst = 0.0;
  integrate_dopri5(f, 0.0, {0.0, 1.0}, 6.0, o, [&](const StepInfo& s) {
    REQUIRE(s.dense != nullptr);
    for (double th : {0.17, 0.5, 0.83}) {
      const double t = s.t_prev + th * s.h;
      const auto y = s.dense->evaluate(t);
      worst = std::max(worst, std::abs(y[0] - std::sin(t)));
    }
    return true;
  });
  CHECK(worst < 1e-10);
}

TEST_CASE("on_step can stop the run") {
  OdeRhs f = [](double, std::span<const double>, std::span<double> dy) { dy[0] = 1.0; };
  const auto r = integrate_dopri5(f, 0.0, {0.0}, 10.0, {}, [](const StepInfo& s) { return s.t < 1.0; });
  CHECK(r.status == OdeStatus::stopped);
  CHECK(r.t >= 1.0);
  CHECK(r.t < 10.0);
}

TEST_CASE("domain errors shrink the step") {
  // Singular at t = 1: y' = 1/(1-t). The integrator must not step past it.
  OdeRhs f = [](double t, std::span<const double>, std::span<double> dy) {
    if (t >= 1.0) throw RhsDomainError("past the pole");
    dy[0] = 1.0 / (1.0 - t);
  };
  OdeOptions o;
  o.max_steps = 100000;
  const auto r = integrate_dopri5(f, 0.0, {0.0}, 2.0, o);
  CHECK(r.status != OdeStatus::completed);
  CHECK(r.t < 1.0);
}

TEST_CASE("step limit is respected") {
  OdeRhs f = [](double, std::span<const double>, std::span<double> dy) { dy[0] = 0.0; };
  OdeOptions o;
  o.step_limit = [](double, std::span<const double>) { return 0.1; };
  double hmax = 0.0;
  const auto r = integrate_dopri5(f, 0.0, {1.0}, 1.0, o, [&](const StepInfo& s) {
    hmax = std::max(hmax, s.h);
    return true;
  });
  CHECK(r.status == OdeStatus::completed);
  CHECK(hmax <= 0.1 + 1e-15);
  CHECK(r.accepted >= 10);
}
