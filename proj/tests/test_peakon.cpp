#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "mchn/peakon.hpp"
#include "mchn/reductions.hpp"

using namespace mchn;

namespace {

const double ch = std::cosh(0.5);
const double sh = std::sinh(0.5);

// Crest form of the N-peakon system, written from the field values at the
// peaks: U = u(q_i), S = mean of the one-sided slopes, J = half the slope jump.
//   p_i' = -p_i S (k2 U + k3)
//   q_i' = (k1 + k2) U^2 - k1 (S^2 + J^2 / 3) + k3 U
PeakonRhs crest_form(const PeakonState& s, const ModelParams& k) {
  PeakonRhs r;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto pt = peakon_field_eval(s, s.q[i]);
    const double U = pt.u, S = 0.5 * (pt.ux_left + pt.ux_right);
    const double J = s.domain == Domain::line ? s.p[i] : s.p[i] * sh;
    r.p_dot.push_back(-s.p[i] * S * (k.k2 * U + k.k3));
    r.q_dot.push_back((k.k1 + k.k2) * U * U - k.k1 * (S * S + J * J / 3.0) + k.k3 * U);
  }
  return r;
}

PeakonState random_state(std::mt19937_64& rng, Domain d, std::size_t n) {
  std::uniform_real_distribution<double> amp(-2.0, 2.0), gap(0.1, 1.5);
  PeakonState s;
  s.domain = d;
  double q = d == Domain::line ? -2.0 : 0.05;
  for (std::size_t i = 0; i < n; ++i) {
    s.p.push_back(amp(rng));
    s.q.push_back(q);
    q += d == Domain::line ? gap(rng) : 0.9 / static_cast<double>(n) * (0.5 + 0.5 * gap(rng) / 1.5);
  }
  return s;
}

ModelParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  return {u(rng), u(rng), u(rng)};
}

}  // namespace

TEST_CASE("single peakon speed") {
  CHECK(single_peakon_speed(1.0, {0, 0, 1}, Domain::line) == doctest::Approx(1.0));
  CHECK(single_peakon_speed(0.0, {1, 2, 3}, Domain::line) == 0.0);
  CHECK(single_peakon_speed(0.0, {1, 2, 3}, Domain::circle) == 0.0);
  CHECK(single_peakon_speed(1.0, {0, 0, 1}, Domain::circle) == doctest::Approx(1.1276260).epsilon(1e-7));
  CHECK(single_peakon_speed(1.0, {1, 0, 0}, Domain::line) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("amplitude inversion") {
  auto a = amplitudes_for_speed(2.0 / 3.0, {1, 0, 0}, Domain::line);
  REQUIRE(a.real_roots.size() == 2);
  CHECK(a.real_roots[0] == doctest::Approx(-1.0));
  CHECK(a.real_roots[1] == doctest::Approx(1.0));

  a = amplitudes_for_speed(4.0, {0, 1, 0}, Domain::line);
  REQUIRE(a.real_roots.size() == 2);
  CHECK(a.real_roots[0] == doctest::Approx(-2.0));
  CHECK(a.real_roots[1] == doctest::Approx(2.0));

  a = amplitudes_for_speed(5.0, {3, -2, 1}, Domain::line);
  CHECK(a.branch == AmplitudeSolution::Branch::linear);
  REQUIRE(a.real_roots.size() == 1);
  CHECK(a.real_roots[0] == doctest::Approx(5.0));

  CHECK(amplitudes_for_speed(1.0, {3, -2, 0}, Domain::line).branch == AmplitudeSolution::Branch::none);
  CHECK(amplitudes_for_speed(0.0, {3, -2, 0}, Domain::line).branch == AmplitudeSolution::Branch::any_amplitude);

  a = amplitudes_for_speed(-1.0, {1, 0, 0}, Domain::line);
  CHECK(a.branch == AmplitudeSolution::Branch::complex_pair);
  REQUIRE(a.complex_roots.size() == 2);
  CHECK(a.complex_roots[1].imag() == doctest::Approx(std::sqrt(1.5)));
}

TEST_CASE("reduction table") {
  const auto cases = reduction_cases();
  CHECK(cases.size() >= 14);
  for (const auto& rc : cases) {
    CAPTURE(rc.name);
    const auto r = check_reduction(rc);
    CHECK(r.branch_matches);
    CHECK(r.max_error <= 1e-12);
  }
}

TEST_CASE("field evaluation") {
  PeakonState s;
  s.p = {1.7};
  s.q = {0.0};
  CHECK(peakon_field_eval(s, 0.0).u == doctest::Approx(1.7));
  CHECK(peakon_field_eval(s, 1.0).u == doctest::Approx(1.7 * std::exp(-1.0)));
  const auto at = peakon_field_eval(s, 0.0);
  CHECK(at.ux_left == doctest::Approx(1.7));
  CHECK(at.ux_right == doctest::Approx(-1.7));

  s.p = {1.0, 1.0};
  s.q = {-0.4, 0.4};
  CHECK(peakon_field_eval(s, 0.0).u == doctest::Approx(2.0 * std::exp(-0.4)));

  PeakonState c;
  c.domain = Domain::circle;
  c.p = {2.0};
  c.q = {0.25};
  CHECK(peakon_field_eval(c, 0.25).u == doctest::Approx(2.0 * ch));
  CHECK(peakon_field_eval(c, 0.75).u == doctest::Approx(2.0));
  CHECK(peakon_field_eval(c, 1.25).u == doctest::Approx(2.0 * ch));
}

TEST_CASE("line system hand values") {
  PeakonState s;
  s.p = {1.0, 1.0};
  s.q = {0.0, 1.0};
  const double e = std::exp(-1.0);
  auto r = rhs_line(s, {0, 0, 1});
  CHECK(r.p_dot[0] == doctest::Approx(-e));
  CHECK(r.p_dot[1] == doctest::Approx(e));
  CHECK(r.q_dot[0] == doctest::Approx(1 + e));
  CHECK(r.q_dot[1] == doctest::Approx(1 + e));

  r = rhs_line(s, {0, 1, 0});
  CHECK(r.p_dot[0] == doctest::Approx(-e * (1 + e)));

  PeakonState one;
  one.p = {1.3};
  one.q = {0.7};
  const ModelParams k{0.4, -0.8, 1.1};
  r = rhs_line(one, k);
  CHECK(r.p_dot[0] == 0.0);
  CHECK(r.q_dot[0] == doctest::Approx(single_peakon_speed(1.3, k, Domain::line)));
}

TEST_CASE("ordering violations are collisions") {
  PeakonState s;
  s.p = {1.0, 1.0};
  s.q = {1.0, 0.5};
  CHECK_THROWS_AS(rhs_line(s, {1, 0, 0}), CollisionError);
  s.q = {0.5, 0.5 + 1e-9};
  CHECK_THROWS_AS(rhs_line(s, {1, 0, 0}, 1e-8), CollisionError);
  s.domain = Domain::circle;
  s.q = {0.6, 0.3};
  CHECK_THROWS_AS(rhs_periodic(s, {1, 0, 0}), CollisionError);
}

TEST_CASE("circle system") {
  SUBCASE("one peakon reduces to the travelling speed") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 100; ++i) {
      auto s = random_state(rng, Domain::circle, 1);
      const auto k = random_params(rng);
      const auto r = rhs_periodic(s, k);
      const double p = s.p[0];
      const double expect = (k.k1 / 3 + ch * ch * (2 * k.k1 / 3 + k.k2)) * p * p + ch * k.k3 * p;
      CHECK(r.p_dot[0] == 0.0);
      CHECK(std::abs(r.q_dot[0] - expect) <= 1e-12 * std::max(1.0, std::abs(expect)));
    }
  }
  SUBCASE("zero coefficients freeze the state") {
    PeakonState s;
    s.domain = Domain::circle;
    s.p = {1.0, -0.5};
    s.q = {0.1, 0.6};
    const auto r = rhs_periodic(s, {0, 0, 0});
    for (double v : r.p_dot) CHECK(v == 0.0);
    for (double v : r.q_dot) CHECK(v == 0.0);
  }
}

TEST_CASE("both systems match the crest form") {
  std::mt19937_64 rng(11);
  for (auto d : {Domain::line, Domain::circle}) {
    for (int i = 0; i < 100; ++i) {
      const auto s = random_state(rng, d, 1 + i % 5);
      const auto k = random_params(rng);
      const auto a = peakon_rhs(s, k);
      const auto b = crest_form(s, k);
      for (std::size_t j = 0; j < s.size(); ++j) {
        CHECK(std::abs(a.p_dot[j] - b.p_dot[j]) <= 1e-12 * std::max(1.0, std::abs(b.p_dot[j])));
        CHECK(std::abs(a.q_dot[j] - b.q_dot[j]) <= 1e-12 * std::max(1.0, std::abs(b.q_dot[j])));
      }
    }
  }
}

TEST_CASE("two-peakon transformed system") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const auto s = random_state(rng, Domain::line, 2);
    const auto k = random_params(rng);
    const auto r = rhs_line(s, k);
    const auto t = two_peakon_transformed_rhs(s, k);
    const auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); };
    CHECK(close(t.P_plus_dot, r.p_dot[0] + r.p_dot[1]));
    CHECK(close(t.P_minus_dot, r.p_dot[0] - r.p_dot[1]));
    CHECK(close(t.Q_plus_dot, r.q_dot[0] + r.q_dot[1]));
    CHECK(close(t.Q_minus_dot, r.q_dot[0] - r.q_dot[1]));
  }

  PeakonState s;
  s.p = {0.8, -1.1};
  s.q = {-0.3, 0.9};
  CHECK(two_peakon_transformed_rhs(s, {1.4, 0, 0}).P_plus_dot == 0.0);

  // Mirror-symmetric pair: p1' = -p2', so the sum is stationary.
  s.p = {1.2, 1.2};
  s.q = {-0.7, 0.7};
  CHECK(std::abs(two_peakon_transformed_rhs(s, {0.5, 0.9, 0.3}).P_plus_dot) < 1e-15);
}

TEST_CASE("integration") {
  SUBCASE("exact travelling peakon") {
    PeakonState s;
    s.p = {1.0};
    s.q = {0.0};
    PeakonOptions o;
    o.atol = o.rtol = 1e-12;
    const auto tr = integrate_peakons(s, {1, 0, 0}, 3.0, o);
    CHECK(tr.completed);
    const auto last = tr.samples.back();
    CHECK(std::abs(last.q[0] - 2.0) < 1e-9);
    CHECK(std::abs(last.p[0] - 1.0) < 1e-12);
  }
  SUBCASE("zero coefficients keep the state") {
    PeakonState s;
    s.p = {1.0, 2.0};
    s.q = {0.0, 3.0};
    const auto tr = integrate_peakons(s, {0, 0, 0}, 2.0);
    CHECK(tr.samples.back().q == s.q);
    CHECK(tr.samples.back().p == s.p);
  }
  SUBCASE("fast peakon overtakes and hands over its amplitude") {
    PeakonState s;
    s.p = {2.0, 1.0};
    s.q = {-5.0, 0.0};
    PeakonOptions o;
    o.atol = o.rtol = 1e-11;
    const auto tr = integrate_peakons(s, {0, 0, 1}, 80.0, o);
    CHECK(tr.completed);
    const auto& last = tr.samples.back();
    // Asymptotic amplitudes are the spectral data, close to (not equal to)
    // the initial ones since the pair starts e^{-5} apart.
    CHECK(last.q[1] - last.q[0] > 10.0);
    CHECK(last.p[1] == doctest::Approx(2.0).epsilon(2e-2));
    CHECK(last.p[0] == doctest::Approx(1.0).epsilon(2e-2));
    CHECK(last.p[0] + last.p[1] == doctest::Approx(3.0).epsilon(1e-9));
    const double e0 = peakon_energy(s);
    for (const auto& st : tr.samples) CHECK(std::abs(peakon_energy(st) - e0) / e0 < 1e-9);
  }
  SUBCASE("collision stops with an event") {
    // Peakon-antipeakon pair in CH collides in finite time.
    PeakonState s;
    s.p = {1.0, -1.0};
    s.q = {-1.0, 1.0};
    const auto tr = integrate_peakons(s, {0, 0, 1}, 10.0);
    CHECK_FALSE(tr.completed);
    REQUIRE_FALSE(tr.events.empty());
    CHECK(tr.events.back().kind == "collision");
    CHECK(tr.t_end() < 10.0);
  }
  SUBCASE("circle positions wrap and stay ordered") {
    PeakonState s;
    s.domain = Domain::circle;
    s.p = {1.0, 0.5};
    s.q = {0.2, 0.7};
    const auto tr = integrate_peakons(s, {0, 0, 1}, 2.0);
    CHECK(tr.completed);
    for (const auto& st : tr.samples) {
      CHECK(st.q[0] >= 0.0);
      CHECK(st.q[0] < st.q[1]);
      CHECK(st.q[1] < 1.0);
    }
    const auto u = tr.unwrapped_at(2.0);
    CHECK(u.q[0] > 1.0);  // speed > 1 for these amplitudes
  }
}

TEST_CASE("canonical circle state rotates labels") {
  PeakonState s;
  s.domain = Domain::circle;
  s.p = {1.0, 2.0};
  s.q = {0.4, 1.1};
  const auto c = canonical_circle_state(s);
  CHECK(c.q[0] == doctest::Approx(0.1));
  CHECK(c.p[0] == 2.0);
  CHECK(c.q[1] == doctest::Approx(0.4));
}
