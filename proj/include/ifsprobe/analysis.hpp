#pragma once

// Numerical probes: orbit density (minimality), invariance defects, the
// bounded-distortion pipeline, shrink time of nested images, and a
// falsification search for intermediate invariant sets (ergodicity).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ifsprobe/construction.hpp"
#include "ifsprobe/error.hpp"
#include "ifsprobe/geometry.hpp"
#include "ifsprobe/maps.hpp"
#include "ifsprobe/rng.hpp"

namespace ifsprobe {

// ---- minimality -------------------------------------------------------------

struct MinimalityOptions {
  double epsilon = 0.02;
  int max_word_length = 25;
  int samples = 16;
  std::uint64_t seed = 1;
  std::size_t budget = 10'000'000;  // map evaluations per start point
  // A new orbit point closer than prune_fraction * epsilon to an earlier one
  // is not expanded. Pruning can only lose coverage, never invent it.
  double prune_fraction = 0.25;
};

struct MinimalityReport {
  double epsilon = 0.0;
  int max_word_length = 0;
  int samples = 0;
  double uncovered_fraction = 0.0;  // worst over start points
  std::size_t evaluations = 0;

  bool eps_dense() const { return uncovered_fraction == 0.0; }
  std::string verdict() const { return eps_dense() ? "eps-dense" : "not-eps-dense"; }
};

namespace detail {

// Points bucketed on a square grid of side `cell` for radius queries.
class PointIndex {
 public:
  PointIndex(const Domain& dom, double cell) : dom_(dom), cell_(cell) {
    if (dom.is_circle()) wrap_ = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(1.0 / cell)));
  }

  bool any_within(Point p, double r) const {
    const auto [ix, iy] = bucket(p);
    for (std::int64_t dy = -1; dy <= (dom_.is_circle() ? -1 : 1) + (dom_.is_circle() ? 1 : 0); ++dy) {
      for (std::int64_t dx = -1; dx <= 1; ++dx) {
        auto it = map_.find(key(ix + dx, dom_.is_circle() ? 0 : iy + dy));
        if (it == map_.end()) continue;
        for (Point q : it->second)
          if (dom_.distance(p, q) < r) return true;
      }
      if (dom_.is_circle()) break;
    }
    return false;
  }

  void insert(Point p) {
    const auto [ix, iy] = bucket(p);
    map_[key(ix, iy)].push_back(p);
  }

 private:
  std::pair<std::int64_t, std::int64_t> bucket(Point p) const {
    if (dom_.is_circle()) return {static_cast<std::int64_t>(std::floor(wrap01(p.x) / cell_)), 0};
    return {static_cast<std::int64_t>(std::floor(p.x / cell_)), static_cast<std::int64_t>(std::floor(p.y / cell_))};
  }
  std::int64_t key(std::int64_t ix, std::int64_t iy) const {
    if (dom_.is_circle()) ix = ((ix % wrap_) + wrap_) % wrap_;
    return (ix << 32) ^ (iy & 0xffffffffLL);
  }

  const Domain& dom_;
  double cell_;
  std::int64_t wrap_ = 0;
  std::unordered_map<std::int64_t, std::vector<Point>> map_;
};

// Tracks which cells of `region` lie within eps of some marked point.
class Coverage {
 public:
  Coverage(const GridSet& region, double eps)
      : region_(region), eps_(eps), covered_(region.size(), 0), remaining_(region.count()) {}

  void mark(Point p) {
    for_each_disk_cell(region_.domain(), Disk{p, eps_}, [&](std::size_t i) {
      if (region_.test(i) && !covered_[i]) {
        covered_[i] = 1;
        --remaining_;
      }
    });
  }
  bool complete() const { return remaining_ == 0; }
  double uncovered_fraction() const {
    const auto total = region_.count();
    return total == 0 ? 0.0 : static_cast<double>(remaining_) / static_cast<double>(total);
  }

 private:
  const GridSet& region_;
  double eps_;
  std::vector<std::uint8_t> covered_;
  std::size_t remaining_;
};

// Breadth-first orbit enumeration with pruning: a new point within
// prune_radius of an earlier one is dropped along with its subtree.
// on_point returns false to stop early.
template <typename OnPoint>
std::size_t enumerate_orbit(const SystemSpec& sys, const Domain& dom, Point start, int max_len,
                            double prune_radius, std::size_t budget, OnPoint&& on_point) {
  PointIndex index(dom, prune_radius);
  std::deque<std::pair<Point, int>> queue;
  index.insert(start);
  queue.emplace_back(start, 0);
  if (!on_point(start)) return 0;
  std::size_t evals = 0;
  while (!queue.empty()) {
    auto [x, depth] = queue.front();
    queue.pop_front();
    if (depth >= max_len) continue;
    for (const auto& g : sys.maps()) {
      const Point y = g(x);
      if (++evals > budget) return evals;
      if (index.any_within(y, prune_radius)) continue;
      index.insert(y);
      if (!on_point(y)) return evals;
      queue.emplace_back(y, depth + 1);
    }
  }
  return evals;
}

}  // namespace detail

// Orbit points of `start` under words of length <= max_len, with pruning.
inline std::vector<Point> orbit_points(const SystemSpec& sys, const Domain& dom, Point start, int max_len,
                                       double prune_radius, std::size_t budget = 10'000'000) {
  std::vector<Point> pts;
  const auto evals = detail::enumerate_orbit(sys, dom, start, max_len, prune_radius, budget, [&](Point p) {
    pts.push_back(p);
    return true;
  });
  if (evals > budget) throw BudgetError("orbit enumeration exceeded the evaluation budget", 1.0);
  return pts;
}

// Fraction of region cells farther than eps from every point.
inline double uncovered_fraction(const std::vector<Point>& pts, const GridSet& region, double eps) {
  detail::Coverage cov(region, eps);
  for (Point p : pts) cov.mark(p);
  return cov.uncovered_fraction();
}

inline MinimalityReport minimality_test(const SystemSpec& sys, const GridSet& region, const MinimalityOptions& opt) {
  const Domain& dom = region.domain();
  if (sys.is_circle() != dom.is_circle()) throw DimensionError("system and region dimensions differ");
  if (opt.epsilon < 2.0 * dom.cell_width() - 1e-15) throw ResolutionError("epsilon must be at least two cell widths");
  if (opt.max_word_length < 1) throw ValidationError("max word length must be >= 1");
  if (opt.samples < 1) throw ValidationError("need at least one sample point");
  if (!(opt.prune_fraction > 0.0 && opt.prune_fraction <= 0.5)) throw ValidationError("prune fraction must lie in (0, 1/2]");
  const auto cells = region.indices();
  if (cells.empty()) throw EmptySetError("minimality region is empty");

  MinimalityReport rep{opt.epsilon, opt.max_word_length, opt.samples, 0.0, 0};
  Rng rng(opt.seed);
  for (int s = 0; s < opt.samples; ++s) {
    const Point start = sample_point(dom, cells, rng);
    detail::Coverage cov(region, opt.epsilon);
    const auto evals = detail::enumerate_orbit(sys, dom, start, opt.max_word_length, opt.prune_fraction * opt.epsilon, opt.budget,
                                               [&](Point p) {
                                                 cov.mark(p);
                                                 return !cov.complete();
                                               });
    rep.evaluations += evals;
    rep.uncovered_fraction = std::max(rep.uncovered_fraction, cov.uncovered_fraction());
    if (evals > opt.budget)
      throw BudgetError("minimality test exceeded the evaluation budget", rep.uncovered_fraction);
  }
  return rep;
}

// ---- invariance -------------------------------------------------------------

enum class InvarianceMode { image, preimage };

// image:    vol(a symmetric-difference union_i g_i(a))
// preimage: max_i vol(g_i^{-1}(a) symmetric-difference a)
inline double invariance_defect(const SystemSpec& sys, const GridSet& a, InvarianceMode mode) {
  if (mode == InvarianceMode::image) return volume(a ^ hutchinson_step(sys, a));
  if (!sys.all_invertible()) throw InvertibilityError("preimage invariance needs invertible generators");
  double worst = 0.0;
  for (const auto& g : sys.maps()) worst = std::max(worst, volume(preimage(g, a) ^ a));
  return worst;
}

// Both the set and its complement come within eps of every cell.
inline bool set_and_complement_dense(const GridSet& b, double eps) {
  return is_eps_dense(b, eps) && is_eps_dense(b.complement(), eps);
}

// ---- bounded distortion -----------------------------------------------------

namespace detail {

inline Point sample_partner(const GridSet& region, const std::vector<std::size_t>& cells, Point x, bool local, Rng& rng) {
  const Domain& dom = region.domain();
  if (local) {
    const double lo = dom.cell_width();
    const double hi = std::max(2.0 * lo, 0.25 * (dom.is_circle() ? 1.0 : std::max(dom.x1() - dom.x0(), dom.y1() - dom.y0())));
    for (int attempt = 0; attempt < 16; ++attempt) {
      const double r = lo * std::exp(rng.uniform() * std::log(hi / lo));
      Point y;
      if (dom.is_circle()) {
        y = {wrap01(x.x + (rng.uniform() < 0.5 ? -r : r)), 0.0};
      } else {
        const double a = rng.uniform(0.0, 2.0 * kPi);
        y = x + r * Point{std::cos(a), std::sin(a)};
      }
      if (region.contains_point(y)) return y;
    }
  }
  return sample_point(dom, cells, rng);
}

}  // namespace detail

// Largest sampled |log|det(x)| - log|det(y)|| / d(x, y)^alpha over pairs in
// `region`: a lower estimate of the alpha-Hölder constant of log|det|.
// Half the pairs are global, half are local at log-uniform scales.
template <typename DetFn>
double holder_constant_of(DetFn&& det, double alpha, const GridSet& region, int pair_samples, std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ValidationError("alpha must lie in (0, 1]");
  const auto cells = region.indices();
  if (cells.empty()) throw EmptySetError("holder_constant: empty region");
  const Domain& dom = region.domain();
  auto logdet = [&](Point p) {
    const double d = det(p);
    if (!(std::abs(d) > 0.0) || !std::isfinite(d)) throw DegeneracyError("Jacobian determinant vanishes");
    return std::log(std::abs(d));
  };
  Rng rng(seed);
  double best = 0.0;
  for (int i = 0; i < pair_samples; ++i) {
    const Point x = sample_point(dom, cells, rng);
    const Point y = detail::sample_partner(region, cells, x, i % 2 == 1, rng);
    const double dist = dom.distance(x, y);
    if (!(dist > 0.0)) continue;
    best = std::max(best, std::abs(logdet(x) - logdet(y)) / std::pow(dist, alpha));
  }
  return best;
}

inline double holder_constant(const MapSpec& m, double alpha, const GridSet& region, int pair_samples, std::uint64_t seed) {
  return holder_constant_of([&](Point p) { return m.jacobian_det(p); }, alpha, region, pair_samples, seed);
}

inline double holder_constant(const SystemSpec& sys, const Word& w, double alpha, const GridSet& region,
                              int pair_samples, std::uint64_t seed) {
  detail::check_word(sys, w);
  return holder_constant_of([&](Point p) { return word_jacobian_det(sys, w, p); }, alpha, region, pair_samples, seed);
}

// Largest sampled operator norm of a generator derivative over `region`.
inline double contraction_factor(const SystemSpec& sys, const GridSet& region, int samples, std::uint64_t seed = 1) {
  const auto cells = region.indices();
  if (cells.empty()) throw EmptySetError("contraction_factor: empty region");
  Rng rng(seed);
  double xi = 0.0;
  for (int i = 0; i < std::max(1, samples); ++i) {
    const Point x = sample_point(region.domain(), cells, rng);
    for (const auto& g : sys.maps()) xi = std::max(xi, g.jacobian(x).norm());
  }
  if (!(xi < 1.0)) throw NotAContractionError("generators are not contracting (xi >= 1)");
  return xi;
}

// L_H = exp(C xi^alpha diam^alpha / (1 - xi^alpha)).
inline double distortion_bound(double c, double xi, double alpha, double diam) {
  if (!(xi > 0.0 && xi < 1.0)) throw DomainError("xi must lie in (0, 1)");
  if (!(c >= 0.0)) throw DomainError("C must be >= 0");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0, 1]");
  if (!(diam > 0.0)) throw DomainError("diameter must be positive");
  const double xa = std::pow(xi, alpha);
  return std::exp(c * xa * std::pow(diam, alpha) / (1.0 - xa));
}

struct DistortionOptions {
  int word_length = 30;
  bool variable_length = false;  // lengths uniform in [0, word_length]
  int word_count = 1000;
  int pair_count = 1000;
  std::uint64_t seed = 1;
};

struct DistortionRange {
  double min = 1.0;
  double max = 1.0;
  std::size_t samples = 0;
};

// Extreme ratios |det D h_w(x)| / |det D h_w(y)| over random reverse words
// and random pairs x, y of `attractor`. Every word is tried on every pair.
inline DistortionRange empirical_distortion(const SystemSpec& sys, const GridSet& attractor, const DistortionOptions& opt) {
  const auto cells = attractor.indices();
  if (cells.empty()) throw EmptySetError("empirical_distortion: empty attractor");
  if (opt.word_length < 0 || opt.word_count < 0 || opt.pair_count < 0) throw ValidationError("negative sample sizes");
  Rng rng(opt.seed);
  std::vector<Point> xs(opt.pair_count), ys(opt.pair_count);
  for (int i = 0; i < opt.pair_count; ++i) {
    xs[i] = sample_point(attractor.domain(), cells, rng);
    ys[i] = sample_point(attractor.domain(), cells, rng);
  }
  DistortionRange r;
  for (int w = 0; w < opt.word_count; ++w) {
    const auto len = opt.variable_length ? rng.below(static_cast<std::uint64_t>(opt.word_length) + 1)
                                         : static_cast<std::uint64_t>(opt.word_length);
    const Word word = random_word(sys.alphabet_size(), len, Direction::reverse, rng);
    for (int i = 0; i < opt.pair_count; ++i) {
      // Both orbits in one pass; same chain rule as word_jacobian_det.
      Point x = xs[i], y = ys[i];
      double dx = 1.0, dy = 1.0;
      detail::for_each_factor(sys, word, [&](const MapSpec& m) {
        dx *= m.jacobian_det(x);
        dy *= m.jacobian_det(y);
        x = m(x);
        y = m(y);
      });
      const double ratio = std::abs(dx / dy);
      r.min = std::min(r.min, ratio);
      r.max = std::max(r.max, ratio);
      ++r.samples;
    }
  }
  return r;
}

inline constexpr double kDistortionSlack = 0.05;

struct DistortionReport {
  double alpha = 1.0;
  double c = 0.0;
  double xi = 0.0;
  double diam = 0.0;
  double l_h = 1.0;
  double emp_min = 1.0;
  double emp_max = 1.0;
  std::size_t samples = 0;

  bool consistent() const {
    return emp_min >= (1.0 / l_h) * (1.0 - kDistortionSlack) && emp_max <= l_h * (1.0 + kDistortionSlack);
  }
};

struct DistortionPipelineOptions {
  double alpha = 1.0;
  int holder_pairs = 20000;
  int norm_samples = 20000;
  DistortionOptions empirical;
};

// Hölder constant (max over generators), contraction factor, attractor
// diameter, the bound L_H, and the empirical ratios, all over `attractor`.
inline DistortionReport distortion_report(const SystemSpec& sys, const GridSet& attractor, const DistortionPipelineOptions& opt) {
  DistortionReport rep;
  rep.alpha = opt.alpha;
  for (std::size_t i = 0; i < sys.alphabet_size(); ++i)
    rep.c = std::max(rep.c, holder_constant(sys[i], opt.alpha, attractor, opt.holder_pairs, opt.empirical.seed + 101 * (i + 1)));
  rep.xi = contraction_factor(sys, attractor, opt.norm_samples, opt.empirical.seed + 7);
  rep.diam = rasterized_diameter(attractor);
  rep.l_h = distortion_bound(rep.c, rep.xi, opt.alpha, rep.diam);
  const auto range = empirical_distortion(sys, attractor, opt.empirical);
  rep.emp_min = range.min;
  rep.emp_max = range.max;
  rep.samples = range.samples;
  return rep;
}

// ---- shrink time --------------------------------------------------------------

struct ShrinkResult {
  int r0 = 0;
  double diam_at_r0 = 0.0;
  std::optional<double> diam_before;  // diameter at r0 - 1, when r0 >= 1
};

// Rasterized h_w^r(U) for the reverse word w truncated to r symbols, on a
// square grid of `resolution` cells per side fitted to the image.
inline GridSet nested_image(const SystemSpec& sys, const Word& w, int r, const Disk& u, int resolution) {
  auto forward = [&](Point p) {
    for (int j = r - 1; j >= 0; --j) p = sys[w.symbols[j]](p);
    return p;
  };
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  constexpr int kSamples = 2048;
  for (int i = 0; i < kSamples; ++i) {
    const double a = 2.0 * kPi * i / kSamples;
    const Point q = forward(u.center + u.radius * Point{std::cos(a), std::sin(a)});
    xmin = std::min(xmin, q.x);
    xmax = std::max(xmax, q.x);
    ymin = std::min(ymin, q.y);
    ymax = std::max(ymax, q.y);
  }
  const double cx = 0.5 * (xmin + xmax), cy = 0.5 * (ymin + ymax);
  double half = 0.5 * std::max(xmax - xmin, ymax - ymin) * 1.05;
  if (!(half > 0.0)) half = 1e-12;
  const Domain dom = Domain::rectangle(cx - half, cx + half, cy - half, cy + half, resolution);
  GridSet out(dom);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::optional<Point> z = dom.cell_center(i);
    for (int j = 0; j < r && z; ++j) z = sys[w.symbols[j]].apply_inverse(*z);
    if (z && norm(*z - u.center) <= u.radius) out.set(i);
  }
  return out;
}

// Smallest r <= max_r with diam(h_w^r(U)) < delta.
inline ShrinkResult shrink_time(const SystemSpec& sys, const Word& w, const Disk& u, double delta, int max_r,
                                int resolution = 512) {
  if (sys.is_circle()) throw DimensionError("shrink_time needs a planar system");
  if (w.direction != Direction::reverse) throw ValidationError("shrink_time uses reverse iteration");
  detail::check_word(sys, w);
  if (!(u.radius > 0.0) || !(delta > 0.0)) throw ValidationError("U radius and delta must be positive");
  const int limit = std::min<int>(max_r, static_cast<int>(w.size()));
  std::optional<double> prev;
  for (int r = 0; r <= limit; ++r) {
    const double d = rasterized_diameter(nested_image(sys, w, r, u, resolution));
    if (d < delta) return {r, d, prev};
    prev = d;
  }
  throw HorizonError("diameter did not drop below delta within the horizon");
}

// ---- ergodicity probe -------------------------------------------------------

struct ErgodicityOptions {
  int seed_sets = 12;
  int refine_steps = 20;
  int saturation_steps = 256;
  std::uint64_t seed = 1;
};

struct ErgodicityReport {
  int resolution = 0;
  double best_defect = std::numeric_limits<double>::infinity();
  double best_volume = 0.0;
  double best_ring = 0.0;  // one-cell ring volume of the best candidate
  int candidates_considered = 0;
  bool candidate_found = false;
  std::optional<GridSet> candidate;

  std::string verdict() const {
    return candidate_found ? "candidate invariant set found" : "no intermediate invariant set found at this resolution";
  }
};

inline constexpr double kProbeMinVolume = 0.05;
inline constexpr double kProbeMaxVolume = 0.95;
inline constexpr double kRingFactor = 3.0;

namespace detail {

inline double preimage_defect(const SystemSpec& sys, const GridSet& b) {
  double worst = 0.0;
  for (const auto& g : sys.maps()) worst = std::max(worst, volume(preimage(g, b) ^ b));
  return worst;
}

// Cellwise majority of {B, g_1^{-1}B, ..., g_s^{-1}B}; ties keep B.
inline GridSet majority_step(const SystemSpec& sys, const GridSet& b) {
  std::vector<int> votes(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) votes[i] = b.test(i) ? 1 : 0;
  for (const auto& g : sys.maps()) {
    const GridSet p = preimage(g, b);
    for (std::size_t i = 0; i < b.size(); ++i) votes[i] += p.test(i) ? 1 : 0;
  }
  const int voters = static_cast<int>(sys.alphabet_size()) + 1;
  GridSet out(b.domain());
  for (std::size_t i = 0; i < b.size(); ++i) {
    const int twice = 2 * votes[i];
    out.set(i, twice > voters || (twice == voters && b.test(i)));
  }
  return out;
}

// Smallest set containing B that is closed under every g and g^{-1}.
inline GridSet saturate(const SystemSpec& sys, GridSet s, int max_steps) {
  for (int step = 0; step < max_steps; ++step) {
    GridSet next = s;
    for (const auto& g : sys.maps()) {
      next |= image(g, s);
      next |= preimage(g, s);
    }
    if (next == s) break;
    s = std::move(next);
  }
  return s;
}

inline double log_uniform(Rng& rng, double lo, double hi) { return lo * std::exp(rng.uniform() * std::log(hi / lo)); }

inline GridSet seed_candidate(const Domain& dom, int j, Rng& rng) {
  const int kind = j % 3;
  if (dom.is_circle()) {
    if (kind == 0) {
      const int m = (j / 3) % 6 + 1;
      const double phase = rng.uniform();
      return GridSet::from_predicate(dom, [&](Point p) { return wrap01(m * (p.x - phase)) < 0.5; });
    }
    const int arcs = kind == 1 ? 1 : 2 + static_cast<int>(rng.below(3));
    GridSet s(dom);
    for (int a = 0; a < arcs; ++a) {
      const double half = kind == 1 ? log_uniform(rng, 0.005, 0.2) : log_uniform(rng, 0.003, 0.08);
      s |= GridSet::disk(dom, Disk{{rng.uniform(), 0.0}, half});
    }
    return s;
  }
  const double w = dom.x1() - dom.x0(), h = dom.y1() - dom.y0();
  const double ext = std::min(w, h);
  if (kind == 0) {
    const int m = (j / 3) % 6 + 1;
    const double ang = rng.uniform(0.0, kPi), phase = rng.uniform();
    const Point dir{std::cos(ang), std::sin(ang)};
    return GridSet::from_predicate(dom, [&](Point p) {
      return wrap01(m * (p.x * dir.x + p.y * dir.y) / ext + phase) < 0.5;
    });
  }
  const int disks = kind == 1 ? 1 : 2 + static_cast<int>(rng.below(3));
  GridSet s(dom);
  for (int a = 0; a < disks; ++a) {
    const double r = (kind == 1 ? log_uniform(rng, 0.05, 0.35) : log_uniform(rng, 0.03, 0.15)) * ext;
    s |= GridSet::disk(dom, Disk{{rng.uniform(dom.x0(), dom.x1()), rng.uniform(dom.y0(), dom.y1())}, r});
  }
  return s;
}

}  // namespace detail

// Seeded search for a set B with g^{-1}(B) = B for every generator and
// intermediate volume. Each seed is tracked through majority refinement and
// through saturation; the smallest preimage defect among resolved
// candidates (volume in (0.05, 0.95), one-cell ring at most a quarter of
// min(vol, 1 - vol)) is reported. A candidate counts as found when its defect
// is below three times its one-cell ring volume.
inline ErgodicityReport ergodicity_probe(const SystemSpec& sys, const Domain& dom, const ErgodicityOptions& opt) {
  if (!sys.all_invertible()) throw InvertibilityError("ergodicity probe needs invertible generators");
  if (sys.is_circle() != dom.is_circle()) throw DimensionError("system and domain dimensions differ");
  if (opt.seed_sets < 1 || opt.refine_steps < 0 || opt.saturation_steps < 0) throw ValidationError("bad probe sizes");
  ErgodicityReport rep;
  rep.resolution = dom.resolution();
  Rng rng(opt.seed);

  auto consider = [&](const GridSet& b) {
    const double v = volume(b);
    if (!(v > kProbeMinVolume && v < kProbeMaxVolume)) return;
    const double ring = ring_volume(b, 1.0);
    if (ring > 0.25 * std::min(v, 1.0 - v)) return;
    ++rep.candidates_considered;
    const double defect = detail::preimage_defect(sys, b);
    const bool better = defect < rep.best_defect ||
                        (defect == rep.best_defect && std::abs(v - 0.5) < std::abs(rep.best_volume - 0.5));
    if (better) {
      rep.best_defect = defect;
      rep.best_volume = v;
      rep.best_ring = ring;
      rep.candidate = b;
    }
  };

  for (int j = 0; j < opt.seed_sets; ++j) {
    Rng local = rng.fork(static_cast<std::uint64_t>(j));
    const GridSet seed = detail::seed_candidate(dom, j, local);
    consider(seed);
    GridSet b = seed;
    for (int step = 0; step < opt.refine_steps; ++step) {
      GridSet next = detail::majority_step(sys, b);
      if (next == b) break;
      b = std::move(next);
      consider(b);
    }
    if (opt.saturation_steps > 0) consider(detail::saturate(sys, seed, opt.saturation_steps));
  }
  rep.candidate_found = rep.candidate && rep.best_defect < kRingFactor * rep.best_ring;
  return rep;
}

}  // namespace ifsprobe
