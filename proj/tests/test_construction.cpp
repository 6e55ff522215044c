#include <catch_amalgamated.hpp>

#include <cmath>

#include "ifsprobe/analysis.hpp"
#include "ifsprobe/construction.hpp"

using namespace ifsprobe;
using Catch::Approx;

namespace {

// Independent cover check: each g(V) is the open disk of radius kappa*delta
// around g(0). Samples closure(V) on a polar grid that includes the rim.
bool analytic_cover(double kappa, double theta_deg, double delta, int anchors) {
  std::vector<Point> centers{{0.0, 0.0}};
  const double th = theta_deg * kPi / 180.0;
  for (int j = 0; j < anchors; ++j) {
    const double a = 2.0 * kPi * j / anchors;
    const Point y{0.75 * delta * std::cos(a), 0.75 * delta * std::sin(a)};
    // g(0) = y - kappa Rot(theta) y
    centers.push_back({y.x - kappa * (std::cos(th) * y.x - std::sin(th) * y.y),
                       y.y - kappa * (std::sin(th) * y.x + std::cos(th) * y.y)});
  }
  const double r = kappa * delta;
  for (int ir = 0; ir <= 200; ++ir) {
    const double rho = delta * ir / 200.0;
    const int steps = std::max(1, static_cast<int>(4000 * rho / delta));
    for (int ia = 0; ia < steps; ++ia) {
      const double a = 2.0 * kPi * ia / steps;
      const Point p{rho * std::cos(a), rho * std::sin(a)};
      bool hit = false;
      for (Point c : centers) hit = hit || norm(p - c) < r;
      if (!hit) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("construction parameters are validated") {
  CHECK_THROWS_AS(build_construction({0.75, 179.0, 1.0, 16.0}), ValidationError);
  CHECK_THROWS_AS(build_construction({1.0, 179.0, 1.0, 16.0}), ValidationError);
  CHECK_THROWS_AS(build_construction({0.8, 179.0, 0.0, 16.0}), ValidationError);
}

TEST_CASE("anchor count matches the analytic cover oracle") {
  // Frozen from the oracle: 7 anchors cover at kappa 0.76, 6 do not.
  REQUIRE(analytic_cover(0.76, 179.0, 1.0, 7));
  REQUIRE_FALSE(analytic_cover(0.76, 179.0, 1.0, 6));
  const auto c = build_construction({0.76, 179.0, 1.0, 16.0});
  CHECK(c.k() == 8);
  CHECK(c.cover_verified);
  CHECK(c.anchors.size() == 7);
  for (Point y : c.anchors) CHECK(norm(y) == Approx(0.75));
}

TEST_CASE("anchor count over a range of kappa") {
  struct Case {
    double kappa;
    int k;
  };
  for (const Case& tc : {Case{0.8, 7}, Case{0.9, 6}, Case{0.999, 6}}) {
    CAPTURE(tc.kappa);
    REQUIRE(analytic_cover(tc.kappa, 179.0, 1.0, tc.k - 1));
    REQUIRE_FALSE(analytic_cover(tc.kappa, 179.0, 1.0, tc.k - 2));
    CHECK(build_construction({tc.kappa, 179.0, 1.0, 16.0}, 512).k() == tc.k);
  }
}

TEST_CASE("the anchor count is independent of delta") {
  CHECK(build_construction({0.76, 179.0, 2.0, 16.0}).k() == 8);
  CHECK(build_construction({0.76, 179.0, 0.25, 16.0}).k() == 8);
}

TEST_CASE("cover deficit is positive with too few anchors") {
  const ConstructionParams p{0.76, 179.0, 1.0, 16.0};
  const Disk v{{0.0, 0.0}, 1.0};
  CHECK(cover_deficit(similarity_system(p, equally_spaced_anchors(0.75, 6)), v, 1024) > 0.0);
  CHECK(cover_deficit(similarity_system(p, equally_spaced_anchors(0.75, 7)), v, 1024) == 0.0);
}

TEST_CASE("U = B(0, 16 delta) is absorbing") {
  const auto c = build_construction({0.76, 179.0, 1.0, 16.0});
  const auto r = check_absorbing(c.system, c.u, 1024);
  CHECK(r.absorbing);
  CHECK(r.escape_distance == 0.0);
}

TEST_CASE("an expanding inverse map is not absorbing") {
  const SystemSpec sys({MapSpec::affine_similarity(0.8, 0.0).inverse()});
  const auto r = check_absorbing(sys, Disk{{0.0, 0.0}, 1.0}, 256);
  CHECK_FALSE(r.absorbing);
  CHECK(r.escape_distance == Approx(0.25).margin(0.02));
}

TEST_CASE("Hutchinson iteration converges to a fat attractor") {
  const ConstructionParams p{0.76, 179.0, 1.0, 16.0};
  const auto c = build_construction(p);
  const Domain dom = construction_domain(p);
  const auto a = attractor(c.system, c.u, dom, 2.0 * dom.cell_width(), 200);
  CHECK(a.final_distance <= 2.0 * dom.cell_width());
  CHECK(inradius(a.set) >= 4.0 * dom.cell_width());
  // V is covered by its images, so V lies in the attractor.
  CHECK(GridSet::disk(dom, Disk{{0.0, 0.0}, 1.0 - 2.0 * dom.cell_diagonal()}).is_subset_of(a.set));
  // Image invariance up to the two-cell ring.
  CHECK(invariance_defect(c.system, a.set, InvarianceMode::image) <= ring_volume(a.set, 2.0));
}

TEST_CASE("single contraction collapses to its fixed point") {
  // Odd resolution puts a cell center on the origin.
  const Domain dom = Domain::square(2.0, 101);
  const SystemSpec sys({MapSpec::affine_similarity(0.5, 30.0)});
  const auto a = attractor(sys, Disk{{0.0, 0.0}, 1.5}, dom, 0.5 * dom.cell_width(), 100);
  CHECK(a.set.count() == 1);
  CHECK(a.set.test(*dom.cell_of({0.0, 0.0})));
  CHECK(hutchinson_step(sys, a.set) == a.set);
}

TEST_CASE("attractor preconditions and failures") {
  const Domain dom = Domain::square(2.0, 64);
  const SystemSpec sys({MapSpec::affine_similarity(0.5, 0.0)});
  CHECK_THROWS_AS(attractor(sys, Disk{{0.0, 0.0}, 3.0}, dom, 0.1, 10), DomainError);
  CHECK_THROWS_AS(attractor(sys, Disk{{0.0, 0.0}, 1.0}, dom, 0.0, 10), ValidationError);
  const SystemSpec shifted({MapSpec::affine_similarity(0.5, 0.0, {1.8, 0.0})});
  CHECK_THROWS_AS(attractor(shifted, Disk{{-1.0, 0.0}, 0.5}, dom, 0.1, 10), ValidationError);
  // Steps of about 0.15 against a tolerance far below one cell.
  const SystemSpec slow({MapSpec::affine_similarity(0.9, 0.0, {0.5, 0.0})});
  CHECK_THROWS_AS(attractor(slow, Disk{{0.0, 0.0}, 1.5}, dom, 1e-3, 3), ConvergenceError);
}
