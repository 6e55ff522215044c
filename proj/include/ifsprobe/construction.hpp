#pragma once

// The planar contraction system {T, S_1, ..., S_{k-1}}:
//   T(x)   = kappa * Rot(theta) x
//   S_y(x) = T(x - y) + y,   y on the circle |y| = (3/4) delta
// with the anchor count chosen so that T(V) and the S_y(V) cover the closed
// disk V = B(0, delta), and its Hutchinson attractor.

#include <cmath>
#include <optional>
#include <vector>

#include "ifsprobe/error.hpp"
#include "ifsprobe/geometry.hpp"
#include "ifsprobe/maps.hpp"

namespace ifsprobe {

struct ConstructionParams {
  double kappa = 0.76;
  double theta = 179.0;  // degrees
  double delta = 1.0;
  double u_factor = 16.0;  // U = B(0, u_factor * delta)
};

struct ConstructionResult {
  SystemSpec system;
  std::vector<Point> anchors;  // the S_i anchors, on |y| = (3/4) delta
  Disk v;
  Disk u;
  bool cover_verified = false;
  double uncovered_fraction = 0.0;

  // Number of generators, T included.
  int k() const { return static_cast<int>(system.generators().size()); }
};

inline constexpr int kMaxAnchors = 256;

inline void validate(const ConstructionParams& p) {
  if (!(p.kappa > 0.75 && p.kappa < 1.0)) throw ValidationError("kappa must lie in (3/4, 1)");
  if (!(p.delta > 0.0)) throw ValidationError("delta must be positive");
  if (!(p.u_factor > 0.0)) throw ValidationError("U factor must be positive");
  if (!std::isfinite(p.theta)) throw ValidationError("theta must be finite");
}

inline SystemSpec similarity_system(const ConstructionParams& p, const std::vector<Point>& anchors) {
  std::vector<MapSpec> gens;
  gens.push_back(MapSpec::affine_similarity(p.kappa, p.theta));
  for (Point y : anchors) gens.push_back(MapSpec::affine_similarity(p.kappa, p.theta, y));
  return SystemSpec(std::move(gens));
}

inline std::vector<Point> equally_spaced_anchors(double radius, int count) {
  std::vector<Point> out;
  for (int j = 0; j < count; ++j) {
    const double a = 2.0 * kPi * j / count;
    out.push_back({radius * std::cos(a), radius * std::sin(a)});
  }
  return out;
}

// Fraction of the cells of closure(v) (on a resolution^2 grid over v's
// bounding box) not covered by any g(v), v taken open. With early_exit the
// first miss returns a positive value immediately.
inline double cover_deficit(const SystemSpec& sys, const Disk& v, int resolution, bool early_exit = false) {
  const Domain box = Domain::rectangle(v.center.x - v.radius, v.center.x + v.radius,
                                       v.center.y - v.radius, v.center.y + v.radius, resolution);
  std::size_t cells = 0, missed = 0;
  for (std::size_t i = 0; i < box.cell_count(); ++i) {
    const Point c = box.cell_center(i);
    if (norm(c - v.center) > v.radius) continue;
    ++cells;
    bool hit = false;
    for (const auto& g : sys.maps()) {
      auto z = g.apply_inverse(c);
      if (z && norm(*z - v.center) < v.radius) {
        hit = true;
        break;
      }
    }
    if (!hit) {
      ++missed;
      if (early_exit) return 1.0 / static_cast<double>(box.cell_count());
    }
  }
  return cells == 0 ? 0.0 : static_cast<double>(missed) / static_cast<double>(cells);
}

// Chooses the smallest anchor count whose rasterized cover of closure(V)
// passes: the count is doubled until the cover holds, then the gap down to
// the previous failing count is scanned.
inline ConstructionResult build_construction(const ConstructionParams& p, int resolution = Domain::kDefaultResolution) {
  validate(p);
  const Disk v{{0.0, 0.0}, p.delta};
  const double ring = 0.75 * p.delta;
  auto passes = [&](int count) {
    return cover_deficit(similarity_system(p, equally_spaced_anchors(ring, count)), v, resolution, true) == 0.0;
  };
  int hi = 1;
  while (hi <= kMaxAnchors && !passes(hi)) hi *= 2;
  if (hi > kMaxAnchors) {
    const double frac = cover_deficit(similarity_system(p, equally_spaced_anchors(ring, kMaxAnchors)), v, resolution);
    throw ConstructionError("cover of closure(V) not achieved with 256 anchors", frac);
  }
  int best = hi;
  for (int c = hi / 2 + 1; c < hi; ++c) {
    if (passes(c)) {
      best = c;
      break;
    }
  }
  auto anchors = equally_spaced_anchors(ring, best);
  ConstructionResult r{similarity_system(p, anchors), anchors, v, Disk{{0.0, 0.0}, p.u_factor * p.delta}, true, 0.0};
  return r;
}

// Chart used for attractor work: a square leaving one delta of margin
// around U.
inline Domain construction_domain(const ConstructionParams& p, int resolution = Domain::kDefaultResolution) {
  return Domain::square((p.u_factor + 1.0) * p.delta, resolution);
}

struct AbsorbingResult {
  bool absorbing = false;
  double escape_distance = 0.0;  // max distance of an image cell outside U
};

// Is the rasterized union of the g(U) contained in U? The grid is a square
// box around U and the images of its boundary.
inline AbsorbingResult check_absorbing(const SystemSpec& sys, const Disk& u, int resolution = Domain::kDefaultResolution) {
  if (sys.is_circle()) throw DimensionError("check_absorbing needs a planar system");
  if (!(u.radius > 0.0)) throw ValidationError("U must have positive radius");
  double xmin = u.center.x - u.radius, xmax = u.center.x + u.radius;
  double ymin = u.center.y - u.radius, ymax = u.center.y + u.radius;
  constexpr int kSamples = 2048;
  for (const auto& g : sys.maps()) {
    for (int i = 0; i < kSamples; ++i) {
      const double a = 2.0 * kPi * i / kSamples;
      const Point q = g(u.center + u.radius * Point{std::cos(a), std::sin(a)});
      xmin = std::min(xmin, q.x);
      xmax = std::max(xmax, q.x);
      ymin = std::min(ymin, q.y);
      ymax = std::max(ymax, q.y);
    }
  }
  const double cx = 0.5 * (xmin + xmax), cy = 0.5 * (ymin + ymax);
  const double half = 0.5 * std::max(xmax - xmin, ymax - ymin) * (1.0 + 8.0 / resolution);
  const Domain dom = Domain::rectangle(cx - half, cx + half, cy - half, cy + half, resolution);
  const GridSet u_set = GridSet::disk(dom, u);
  AbsorbingResult r{true, 0.0};
  for (const auto& g : sys.maps()) {
    const GridSet img = image(g, u_set);
    for (std::size_t i = 0; i < img.size(); ++i) {
      if (!img.test(i)) continue;
      if (!u_set.test(i)) r.absorbing = false;
      r.escape_distance = std::max(r.escape_distance, norm(dom.cell_center(i) - u.center) - u.radius);
    }
  }
  if (r.absorbing) r.escape_distance = 0.0;
  return r;
}

// One application of A -> union of g(A).
inline GridSet hutchinson_step(const SystemSpec& sys, const GridSet& a) {
  GridSet out(a.domain());
  for (const auto& g : sys.maps()) out |= image(g, a);
  return out;
}

struct AttractorResult {
  GridSet set;
  int iterations = 0;
  double final_distance = 0.0;  // Hausdorff distance of the last step
};

// Iterates the Hutchinson operator from the rasterized U until successive
// iterates are within `tol` in Hausdorff distance.
inline AttractorResult attractor(const SystemSpec& sys, const Disk& u, const Domain& dom, double tol, int max_iter) {
  if (!disk_inside(dom, u)) throw DomainError("U must lie inside the chart");
  if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
  GridSet prev = GridSet::disk(dom, u);
  if (prev.empty()) throw ResolutionError("U contains no cell centers");
  {
    const GridSet first = hutchinson_step(sys, prev);
    if (!first.is_subset_of(prev)) throw ValidationError("U is not absorbing for the system on this grid");
  }
  double last = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= max_iter; ++it) {
    GridSet next = hutchinson_step(sys, prev);
    if (next.empty()) throw ConvergenceError("attractor iterate vanished at grid scale", last);
    last = hausdorff_distance(prev, next);
    if (last <= tol) return {std::move(next), it, last};
    prev = std::move(next);
  }
  throw ConvergenceError("attractor did not converge within max-iter", last);
}

}  // namespace ifsprobe
