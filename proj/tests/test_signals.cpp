#include <catch2/catch_amalgamated.hpp>

#include "evi/signals.hpp"

using namespace evi;

TEST_CASE("constant signal") {
  Vector v(2);
  v << 1.0, -2.0;
  const Signal s = Signal::constant(v);
  REQUIRE(s.dim() == 2);
  REQUIRE(s.value(3.7) == v);
  REQUIRE(s.left_value(3.7) == v);
  REQUIRE(s.derivative(0.0).norm() == 0.0);
  REQUIRE(!s.has_jumps());
  REQUIRE(s.regularity() == Regularity::absolutely_continuous);
  REQUIRE(s.breakpoints_in(0.0, 10.0).empty());
}

TEST_CASE("piecewise linear interpolation and slope") {
  std::vector<double> ts{0.0, 1.0, 3.0};
  std::vector<Vector> vs;
  Vector a(1), b(1), c(1);
  a << 0.0;
  b << 2.0;
  c << 0.0;
  vs = {a, b, c};
  const Signal s = Signal::piecewise_linear(ts, vs);
  CHECK(s.value(0.5)(0) == Catch::Approx(1.0));
  CHECK(s.value(2.0)(0) == Catch::Approx(1.0));
  CHECK(s.value(-1.0)(0) == Catch::Approx(0.0));  // clamped
  CHECK(s.value(5.0)(0) == Catch::Approx(0.0));
  CHECK(s.derivative(0.5)(0) == Catch::Approx(2.0));
  CHECK(s.derivative(2.0)(0) == Catch::Approx(-1.0));
  CHECK(!s.has_jumps());
}

TEST_CASE("staircase right-continuity and left limits") {
  Vector init(1), v1(1), v2(1);
  init << 0.0;
  v1 << 1.0;
  v2 << 5.0;
  const Signal s = Signal::staircase(init, {1.0, 2.0}, {v1, v2});
  CHECK(s.value(0.5)(0) == 0.0);
  CHECK(s.value(1.0)(0) == 1.0);
  CHECK(s.left_value(1.0)(0) == 0.0);
  CHECK(s.value(1.5)(0) == 1.0);
  CHECK(s.value(2.0)(0) == 5.0);
  CHECK(s.left_value(2.0)(0) == 1.0);
  CHECK(s.has_jumps());
  CHECK(s.regularity() == Regularity::right_continuous_bv);
  const auto bps = s.breakpoints_in(0.0, 1.5);
  REQUIRE(bps.size() == 1);
  CHECK(bps[0] == 1.0);
}

TEST_CASE("floor expression matches floor(10 t)") {
  SignalTerm term;
  term.fn = SignalTerm::Fn::floor;
  term.amplitude = 1.0;
  term.rate = 10.0;
  const Signal s = Signal::expression({{term}});
  CHECK(s.value(0.0)(0) == 0.0);
  CHECK(s.value(0.099)(0) == 0.0);
  CHECK(s.value(0.1)(0) == 1.0);
  CHECK(s.left_value(0.1)(0) == 0.0);
  CHECK(s.value(0.30000000000000004)(0) == 3.0);  // grid-noise snapping
  const auto bps = s.breakpoints_in(0.0, 0.55);
  REQUIRE(bps.size() == 5);
  CHECK(bps[0] == Catch::Approx(0.1));
  CHECK(bps[4] == Catch::Approx(0.5));
  CHECK(s.has_jumps());
}

TEST_CASE("sin and ramp terms") {
  SignalTerm sin_term;
  sin_term.fn = SignalTerm::Fn::sin;
  sin_term.amplitude = 2.0;
  sin_term.rate = 3.0;
  SignalTerm ramp_term;
  ramp_term.fn = SignalTerm::Fn::ramp;
  ramp_term.amplitude = 1.0;
  ramp_term.rate = 1.0;
  ramp_term.phase = -1.0;
  const Signal s = Signal::expression({{sin_term}, {ramp_term}});
  CHECK(s.value(0.5)(0) == Catch::Approx(2.0 * std::sin(1.5)));
  CHECK(s.value(0.5)(1) == 0.0);
  CHECK(s.value(2.0)(1) == Catch::Approx(1.0));
  CHECK(s.derivative(0.5)(0) == Catch::Approx(6.0 * std::cos(1.5)));
  CHECK(s.derivative(2.0)(1) == Catch::Approx(1.0));
  CHECK(!s.has_jumps());
}
