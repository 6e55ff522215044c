#pragma once

// Disk families inside an ambient disk B(y, delta) against a target set B:
//   (i)   every B(p, delta_p) lies in B(y, delta)
//   (ii)  the disks are pairwise disjoint
//   (iii) vol(union) > 2/3 vol(B(y, delta))
//   (iv)  vol(B^c ∩ B(p, delta_p)) > 1/2 vol(B(p, delta_p)) for every p
// If vol(B ∩ B(y, delta)) > 3/4 vol(B(y, delta)) no family satisfies all four:
// (iii) and (iv) force vol(B^c ∩ B(y, delta)) > 1/3 vol(B(y, delta)).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "ifsprobe/error.hpp"
#include "ifsprobe/geometry.hpp"

namespace ifsprobe {

inline constexpr double kDensityPremise = 3.0 / 4.0;
inline constexpr double kCoverFraction = 2.0 / 3.0;
inline constexpr double kComplementShare = 1.0 / 2.0;
inline constexpr double kChainBound = 1.0 / 3.0;

struct PackingInstance {
  Disk ambient;
  GridSet target;
  std::vector<Disk> family;
};

struct PackingReport {
  bool cond1 = false;
  bool cond2 = false;
  bool cond3 = false;
  bool cond4 = false;
  // Signed margins; +inf when the condition is vacuous.
  //   (i)   min (delta - |p - y| - delta_p) / delta
  //   (ii)  min over pairs (|p - q| - delta_p - delta_q) / delta
  //   (iii) (|union| - 2/3 |A|) / |A|
  //   (iv)  min (|B^c ∩ D_p| - 1/2 |D_p|) / |A|
  double margin1 = 0.0;
  double margin2 = 0.0;
  double margin3 = 0.0;
  double margin4 = 0.0;
  double density_premise = 0.0;  // |B ∩ A| / |A|
  double covered_fraction = 0.0;  // |union| / |A|
  bool centers_in_dp = true;      // every center is a rasterized density point of B^c

  bool feasible() const { return cond1 && cond2 && cond3 && cond4; }
};

namespace detail {

struct PackingCounts {
  std::size_t ambient = 0;          // |A|
  std::size_t target_in_ambient = 0;  // |B ∩ A|
  std::size_t union_cells = 0;      // |union of family|
  std::size_t complement_in_union = 0;  // |B^c ∩ union|
  bool overlap = false;
  bool union_inside_ambient = true;
  std::vector<std::size_t> disk_cells;
  std::vector<std::size_t> disk_complement;
};

inline PackingCounts packing_counts(const PackingInstance& inst) {
  const Domain& dom = inst.target.domain();
  if (dom.is_circle()) throw DimensionError("packing needs a planar domain");
  if (!disk_inside(dom, inst.ambient)) throw DomainError("ambient disk must lie inside the domain");
  PackingCounts c;
  const GridSet amb = GridSet::disk(dom, inst.ambient);
  c.ambient = amb.count();
  if (c.ambient == 0) throw ResolutionError("ambient disk contains no cell centers");
  c.target_in_ambient = (inst.target & amb).count();
  std::vector<std::uint8_t> hits(dom.cell_count(), 0);
  for (const Disk& d : inst.family) {
    std::size_t cells = 0, comp = 0;
    for_each_disk_cell(dom, d, [&](std::size_t i) {
      ++cells;
      if (!inst.target.test(i)) ++comp;
      if (hits[i] == 0) {
        ++c.union_cells;
        if (!inst.target.test(i)) ++c.complement_in_union;
        if (!amb.test(i)) c.union_inside_ambient = false;
      } else {
        c.overlap = true;
      }
      if (hits[i] < 255) ++hits[i];
    });
    c.disk_cells.push_back(cells);
    c.disk_complement.push_back(comp);
  }
  return c;
}

// vol(s ∩ disk) / vol(disk) for the disk of radius r around the center of
// the cell containing p, clipped to the chart.
inline double cell_density(const GridSet& s, Point p, double r) {
  const Domain& dom = s.domain();
  const auto cell = dom.cell_of(p);
  if (!cell) return 0.0;
  std::size_t in = 0, total = 0;
  for_each_disk_cell(dom, Disk{dom.cell_center(*cell), r}, [&](std::size_t i) {
    ++total;
    in += s.test(i) ? 1 : 0;
  });
  return total == 0 ? 0.0 : static_cast<double>(in) / static_cast<double>(total);
}

}  // namespace detail

inline PackingReport verify_conditions(const PackingInstance& inst) {
  const Domain& dom = inst.target.domain();
  const auto c = detail::packing_counts(inst);
  const double inf = std::numeric_limits<double>::infinity();
  const double amb = static_cast<double>(c.ambient);
  const double delta = inst.ambient.radius;
  PackingReport r;

  r.cond1 = c.union_inside_ambient;
  r.margin1 = inf;
  for (const Disk& d : inst.family) {
    const double m = delta - norm(d.center - inst.ambient.center) - d.radius;
    r.margin1 = std::min(r.margin1, m / delta);
    if (m < -1e-12 || !disk_inside(dom, d)) r.cond1 = false;
  }

  r.cond2 = !c.overlap;
  r.margin2 = inf;
  for (std::size_t i = 0; i < inst.family.size(); ++i)
    for (std::size_t j = i + 1; j < inst.family.size(); ++j) {
      const Disk& a = inst.family[i];
      const Disk& b = inst.family[j];
      r.margin2 = std::min(r.margin2, (norm(a.center - b.center) - a.radius - b.radius) / delta);
    }

  r.cond3 = 3 * c.union_cells > 2 * c.ambient;
  r.margin3 = (static_cast<double>(c.union_cells) - kCoverFraction * amb) / amb;

  r.cond4 = true;
  r.margin4 = inf;
  for (std::size_t i = 0; i < inst.family.size(); ++i) {
    if (!(2 * c.disk_complement[i] > c.disk_cells[i])) r.cond4 = false;
    r.margin4 = std::min(r.margin4, (static_cast<double>(c.disk_complement[i]) -
                                     kComplementShare * static_cast<double>(c.disk_cells[i])) / amb);
  }

  r.density_premise = static_cast<double>(c.target_in_ambient) / amb;
  r.covered_fraction = static_cast<double>(c.union_cells) / amb;

  const GridSet comp = inst.target.complement();
  const double dp_radius = 2.0 * dom.cell_width();
  for (const Disk& d : inst.family)
    if (detail::cell_density(comp, d.center, dp_radius) < kDensityPremise - 1e-9) r.centers_in_dp = false;
  return r;
}

struct ContradictionReport {
  double lower_bound = 0.0;  // 1/2 |union| / |A|
  double actual = 0.0;       // |B^c ∩ A| / |A|
  double complement_in_union = 0.0;  // |B^c ∩ union| / |A|
  double density_premise = 0.0;
  bool infeasible_with_premise = false;
  bool feasible = false;
  // When (i)-(iv) hold: actual >= lower_bound - slack and actual > 1/3 - slack.
  bool chain_holds = true;
};

inline ContradictionReport contradiction_bound(const PackingInstance& inst, double slack = 1.0 / 50.0) {
  const auto c = detail::packing_counts(inst);
  const auto rep = verify_conditions(inst);
  const double amb = static_cast<double>(c.ambient);
  ContradictionReport r;
  r.lower_bound = kComplementShare * static_cast<double>(c.union_cells) / amb;
  r.actual = static_cast<double>(c.ambient - c.target_in_ambient) / amb;
  r.complement_in_union = static_cast<double>(c.complement_in_union) / amb;
  r.density_premise = rep.density_premise;
  r.infeasible_with_premise = rep.density_premise > kDensityPremise;
  r.feasible = rep.feasible();
  if (r.feasible) r.chain_holds = r.actual >= r.lower_bound - slack && r.actual > kChainBound - slack;
  return r;
}

struct GreedyResult {
  PackingInstance instance;
  PackingReport report;
};

namespace detail {

// Local density of `s` in the disk of radius r around every cell center,
// clipped to the chart.
inline std::vector<double> local_density(const GridSet& s, double r) {
  const Domain& dom = s.domain();
  const int n = dom.resolution();
  const double dx = dom.cell_width_x(), dy = dom.cell_width_y();
  const int rows = floor_tol(r / dy);
  std::vector<int> half(2 * rows + 1);
  for (int dr = -rows; dr <= rows; ++dr) half[dr + rows] = disk_half_width(r, dr, dx, dy);
  const std::size_t stride = static_cast<std::size_t>(n) + 1;
  std::vector<std::uint32_t> pre(stride * n, 0);
  for (int row = 0; row < n; ++row)
    for (int col = 0; col < n; ++col)
      pre[row * stride + col + 1] = pre[row * stride + col] + (s.test(dom.index(col, row)) ? 1 : 0);
  std::vector<double> out(dom.cell_count(), 0.0);
  for (int row = 0; row < n; ++row)
    for (int col = 0; col < n; ++col) {
      std::size_t in = 0, total = 0;
      for (int dr = -rows; dr <= rows; ++dr) {
        const int rr = row + dr;
        const int w = half[dr + rows];
        if (rr < 0 || rr >= n || w < 0) continue;
        const int lo = std::max(0, col - w), hi = std::min(n - 1, col + w);
        total += static_cast<std::size_t>(hi - lo + 1);
        in += pre[rr * stride + hi + 1] - pre[rr * stride + lo];
      }
      out[dom.index(col, row)] = total == 0 ? 0.0 : static_cast<double>(in) / static_cast<double>(total);
    }
  return out;
}

inline bool satisfies_cond4(const GridSet& target, const Disk& d) {
  std::size_t cells = 0, comp = 0;
  for_each_disk_cell(target.domain(), d, [&](std::size_t i) {
    ++cells;
    if (!target.test(i)) ++comp;
  });
  return 2 * comp > cells;
}

}  // namespace detail

// Places disks one at a time: the center is the cell of highest B^c density
// at min_radius (ties broken by room), the radius the largest one found by
// bisection in [min_radius, room] that keeps (iv). Conditions (i) and (ii)
// hold by construction. Stops once (iii) holds, after max_disks, or when no
// cell admits a disk.
inline GreedyResult greedy_pack(const GridSet& target, const Disk& ambient, double min_radius, int max_disks) {
  const Domain& dom = target.domain();
  if (dom.is_circle()) throw DimensionError("packing needs a planar domain");
  if (min_radius < 4.0 * dom.cell_width() - 1e-12) throw ResolutionError("min radius must be at least four cell widths");
  if (!disk_inside(dom, ambient)) throw DomainError("ambient disk must lie inside the domain");
  if (max_disks < 0) throw ValidationError("max disks must be >= 0");

  const GridSet comp = target.complement();
  const auto density = detail::local_density(comp, min_radius);
  const GridSet amb = GridSet::disk(dom, ambient);
  const std::size_t amb_cells = amb.count();
  std::vector<double> room(dom.cell_count(), -1.0);
  for (std::size_t i = 0; i < room.size(); ++i)
    if (amb.test(i)) room[i] = ambient.radius - norm(dom.cell_center(i) - ambient.center);

  PackingInstance inst{ambient, target, {}};
  std::size_t covered = 0;
  constexpr double kGap = 1e-9;
  while (static_cast<int>(inst.family.size()) < max_disks && !(3 * covered > 2 * amb_cells)) {
    std::size_t best = room.size();
    for (std::size_t i = 0; i < room.size(); ++i) {
      if (room[i] - kGap < min_radius || !(density[i] > kComplementShare)) continue;
      if (best == room.size() || density[i] > density[best] || (density[i] == density[best] && room[i] > room[best]))
        best = i;
    }
    if (best == room.size()) break;
    const Point c = dom.cell_center(best);
    double lo = min_radius, hi = room[best] - kGap;
    if (!detail::satisfies_cond4(target, Disk{c, lo})) {
      room[best] = -1.0;
      continue;
    }
    if (detail::satisfies_cond4(target, Disk{c, hi})) {
      lo = hi;
    } else {
      for (int it = 0; it < 40 && hi - lo > 0.25 * dom.cell_width(); ++it) {
        const double mid = 0.5 * (lo + hi);
        (detail::satisfies_cond4(target, Disk{c, mid}) ? lo : hi) = mid;
      }
    }
    const Disk d{c, lo};
    inst.family.push_back(d);
    for_each_disk_cell(dom, d, [&](std::size_t) { ++covered; });
    for (std::size_t i = 0; i < room.size(); ++i)
      if (room[i] >= 0.0) room[i] = std::min(room[i], norm(dom.cell_center(i) - c) - d.radius);
  }
  return {inst, verify_conditions(inst)};
}

}  // namespace ifsprobe
