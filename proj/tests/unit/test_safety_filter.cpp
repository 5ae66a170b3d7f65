#include <doctest.h>

#include <cmath>
#include <numbers>

#include "../support/oracles.hpp"
#include "vnav/safety_filter.hpp"

using namespace vnav;

namespace {

double dot4(const std::array<double, 4>& a, const std::array<double, 4>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

}  // namespace

TEST_CASE("reference control is proportional with a heading deadband") {
  FilterParams p;
  const ControlCommand u = reference_control({2.0, 2.0, 0.0}, p);
  CHECK(u.v.x == doctest::Approx(2.0));
  CHECK(u.omega == doctest::Approx(std::numbers::pi / 4));
  CHECK(reference_control({0.01, 0.02, 0.0}, p).omega == 0.0);
}

TEST_CASE("satisfied constraint passes u_ref through") {
  const FilterResult r = project_halfspace({1, 0, 0, 0}, {1, 0, 0, 0}, -1.0);
  CHECK(r.status == FilterStatus::inactive);
  CHECK(r.command == ControlCommand{{1, 0, 0}, 0});
}

TEST_CASE("violated constraint projects onto the boundary") {
  // Wall ahead: a = (-1, 0, 0, 0), bound -0.2 lets at most 0.2 m/s forward.
  const FilterResult r = project_halfspace({0.6, 0.3, 0, 0.1}, {-1, 0, 0, 0}, -0.2);
  CHECK(r.status == FilterStatus::projected);
  CHECK(r.command.v.x == doctest::Approx(0.2));
  CHECK(r.command.v.y == doctest::Approx(0.3));
  CHECK(r.command.omega == doctest::Approx(0.1));
}

TEST_CASE("zero gradient with violated condition is infeasible") {
  const FilterResult r = project_halfspace({1, 0, 0, 0}, {0, 0, 0, 0}, 0.5);
  CHECK(r.status == FilterStatus::infeasible);
  CHECK(r.command == ControlCommand{});
}

TEST_CASE("filter_command without points is a pass-through") {
  const ControlCommand u{{0.4, 0, 0}, 0.2};
  const FilterResult r = filter_command(u, CbfEval{}, FilterParams{});
  CHECK(r.status == FilterStatus::no_constraint);
  CHECK(r.command == u);
}

TEST_CASE("projection matches the bisection QP oracle and is minimal") {
  oracle::Rng rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    std::array<double, 4> u{}, a{};
    for (int i = 0; i < 4; ++i) {
      u[i] = rng.uniform(-2, 2);
      a[i] = rng.uniform(-3, 3);
    }
    const double b = rng.uniform(-2, 2);
    const auto got = project_halfspace(u, a, b).command.as_array();
    const auto ref = oracle::qp_bisection(u, a, b);
    for (int i = 0; i < 4; ++i) CHECK(got[i] == doctest::Approx(ref[i]).epsilon(1e-8).scale(1.0));
    CHECK(dot4(a, got) >= b - 1e-9);
    // Idempotent.
    const auto again = project_halfspace(got, a, b).command.as_array();
    for (int i = 0; i < 4; ++i) CHECK(again[i] == doctest::Approx(got[i]).epsilon(1e-12).scale(1.0));
    // No feasible random probe is closer to u_ref.
    double dgot = 0;
    for (int i = 0; i < 4; ++i) dgot += (got[i] - u[i]) * (got[i] - u[i]);
    for (int k = 0; k < 20; ++k) {
      std::array<double, 4> v{};
      for (int i = 0; i < 4; ++i) v[i] = got[i] + rng.uniform(-0.5, 0.5);
      if (dot4(a, v) < b) continue;
      double dv = 0;
      for (int i = 0; i < 4; ++i) dv += (v[i] - u[i]) * (v[i] - u[i]);
      CHECK(dv >= dgot - 1e-9);
    }
  }
}

TEST_CASE("saturation scales uniformly and preserves the barrier condition") {
  const ControlCommand u{{1.2, 0.0, 0.0}, 0.5};
  const ControlCommand s = saturate(u, 0.6, 1.0);
  CHECK(s.v.x == doctest::Approx(0.6));
  CHECK(s.omega == doctest::Approx(0.25));
  const ControlCommand w = saturate({{0.1, 0, 0}, 3.0}, 0.6, 1.0);
  CHECK(w.omega == doctest::Approx(1.0));
  CHECK(w.v.x == doctest::Approx(0.1 / 3.0));
  CHECK(saturate({{0.1, 0.1, 0}, 0.1}, 0.6, 1.0) == ControlCommand{{0.1, 0.1, 0}, 0.1});
}

TEST_CASE("FilterParams validation") {
  FilterParams p;
  CHECK_NOTHROW(p.validate());
  p.gamma_bar = 0.0;
  CHECK_THROWS(p.validate());
  p = FilterParams{};
  p.v_max = -1;
  CHECK_THROWS(p.validate());
}
