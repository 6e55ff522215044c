#include <catch_amalgamated.hpp>

#include <cmath>

#include "ifsprobe/circle.hpp"

using namespace ifsprobe;
using Catch::Approx;

namespace {

CircleProbeSettings fast_settings() {
  CircleProbeSettings s;
  s.samples = 4;
  s.seed_sets = 9;
  return s;
}

}  // namespace

TEST_CASE("circle example rejects multipliers outside (1/2, 1)") {
  CircleExampleParams p;
  p.lambda = 0.4;
  CHECK_THROWS_AS(build_circle_example(p), MultiplierError);
  p.lambda = 1.0;
  CHECK_THROWS_AS(build_circle_example(p), MultiplierError);
}

TEST_CASE("north-south generator: fixed points and their multipliers") {
  CircleExampleParams p;
  p.pole = 0.1;
  const SystemSpec sys = build_circle_example(p);
  const MapSpec& f1 = sys[0];
  const Point pole{0.1, 0.0}, anti{0.6, 0.0};
  CHECK(std::abs(circle_delta(f1(pole).x, pole.x)) < 1e-14);
  CHECK(std::abs(circle_delta(f1(anti).x, anti.x)) < 1e-14);
  const double h = 1e-6;
  auto fd = [&](double x) { return circle_delta(f1({x - h, 0.0}).x, f1({x + h, 0.0}).x) / (2 * h); };
  CHECK(fd(pole.x) == Approx(0.7).margin(1e-6));
  CHECK(fd(anti.x) == Approx(1.0 / 0.7).margin(1e-6));
  CHECK(fd(pole.x) < 1.0);
  CHECK(fd(anti.x) > 1.0);
  CHECK(fd(pole.x) * fd(anti.x) == Approx(1.0).margin(1e-6));
  // No other fixed points.
  for (int i = 1; i < 1000; ++i) {
    const double x = pole.x + i / 2000.0;
    if (std::abs(circle_delta(x, anti.x)) < 1e-9) continue;
    CHECK(std::abs(circle_delta(f1({x, 0.0}).x, x)) > 1e-9);
  }
}

TEST_CASE("north-south generator composed with its inverse is the identity") {
  const MapSpec f1 = build_circle_example({})[0];
  const MapSpec inv = f1.inverse();
  Rng rng(21);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double x = rng.uniform();
    worst = std::max(worst, std::abs(circle_delta(x, inv(f1({x, 0.0})).x)));
    worst = std::max(worst, std::abs(circle_delta(x, f1(inv({x, 0.0})).x)));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("north-south map plus golden rotation is minimal and shows no invariant set") {
  const auto r = run_probes(build_circle_example({}), fast_settings());
  CHECK(r.minimality.verdict() == "eps-dense");
  CHECK(r.ergodic());
  CHECK(r.ergodicity.best_defect > kRingFactor * r.ergodicity.best_ring);
}

TEST_CASE("a trivial rotation leaves the north-south map non-minimal") {
  CircleExampleParams p;
  p.rotation_angle = 0.0;
  const auto r = run_probes(build_circle_example(p), fast_settings());
  CHECK(r.minimality.verdict() == "not-eps-dense");
}

TEST_CASE("minimality verdict is invariant under conjugation by a rotation") {
  for (double shift : {0.0, 0.137, 0.5}) {
    CircleExampleParams p;
    p.pole = shift;
    CHECK(run_probes(build_circle_example(p), fast_settings()).minimal());
    p.rotation_angle = 0.0;
    CHECK_FALSE(run_probes(build_circle_example(p), fast_settings()).minimal());
  }
}

TEST_CASE("rational substitution: each generator alone fails, the pair passes") {
  CircleExampleParams p;
  p.rational_approx = Fraction{8, 13};
  CircleProbeSettings s = fast_settings();
  s.resolution = 13 * 256;
  const auto r = rational_substitution_experiment(p, s);
  CHECK_FALSE(r.f1_alone.minimal());
  CHECK_FALSE(r.f1_alone.ergodic());
  CHECK_FALSE(r.rotation_alone.minimal());
  CHECK_FALSE(r.rotation_alone.ergodic());
  CHECK(r.singles_fail());
  CHECK(r.pair.minimal());
  CHECK(r.pair.ergodic());
  CHECK(r.pair_passes());
}

TEST_CASE("rational substitution with a golden convergent keeps the pair minimal") {
  CircleExampleParams p;
  p.rational_approx = Fraction{377, 610};
  const auto r = rational_substitution_experiment(p, fast_settings());
  CHECK(r.pair.minimal());
  CHECK_FALSE(r.f1_alone.minimal());
  // 610 orbit points are 0.0016 apart: already dense at epsilon 0.01.
  CHECK(r.rotation_alone.minimal());
}

TEST_CASE("degenerate rational angles") {
  CircleExampleParams p;
  p.rational_approx = Fraction{0, 1};
  CHECK_FALSE(rational_substitution_experiment(p, fast_settings()).pair.minimal());
  p.rational_approx = Fraction{1, 2};
  const auto half = rational_substitution_experiment(p, fast_settings());
  CHECK_FALSE(half.rotation_alone.minimal());
  CHECK(half.gamma.q == 2);
  p.rational_approx.reset();
  CHECK_THROWS_AS(rational_substitution_experiment(p, fast_settings()), ValidationError);
}

TEST_CASE("robustness sweep") {
  const auto r = robustness_sweep({}, {0.0, 0.001, 0.005, 0.01}, fast_settings());
  REQUIRE(r.rows.size() == 4);
  CHECK(r.rows[0].result.minimal() == r.baseline.minimal());
  CHECK(r.rows[0].result.ergodic() == r.baseline.ergodic());
  CHECK(r.rows[0].result.minimality.uncovered_fraction == r.baseline.minimality.uncovered_fraction);
  for (const auto& row : r.rows) CHECK(row.result.minimality.verdict() == "eps-dense");
  REQUIRE(r.largest_unchanged);
  CHECK(*r.largest_unchanged == 0.01);
  CHECK_THROWS_AS(robustness_sweep({}, {0.5}, fast_settings()), ValidationError);
  CHECK_THROWS_AS(robustness_sweep({}, {-0.01}, fast_settings()), ValidationError);
}
