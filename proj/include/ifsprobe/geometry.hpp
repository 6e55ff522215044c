#pragma once

// Flat charts, disks and rasterized sets.
//
// Everything measurable lives on a fixed grid: a GridSet is one inclusion
// bit per cell, and a cell belongs to a set or disk iff its center does.
// Volumes are normalized by the cell count of the whole chart.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ifsprobe/error.hpp"
#include "ifsprobe/rng.hpp"

namespace ifsprobe {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point a, Point b) = default;
};

inline double norm(Point p) { return std::hypot(p.x, p.y); }

// Row-major 2x2 matrix [[a, b], [c, d]].
struct Mat2 {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  double det() const { return a * d - b * c; }
  double trace() const { return a + d; }
  Point apply(Point p) const { return {a * p.x + b * p.y, c * p.x + d * p.y}; }

  // Largest singular value.
  double operator_norm() const {
    const double s = a * a + b * b + c * c + d * d;
    const double dt = det();
    const double disc = std::max(0.0, s * s / 4.0 - dt * dt);
    return std::sqrt(s / 2.0 + std::sqrt(disc));
  }

  friend Mat2 operator*(const Mat2& l, const Mat2& r) {
    return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d,
            l.c * r.a + l.d * r.c, l.c * r.b + l.d * r.d};
  }
  friend Mat2 operator+(const Mat2& l, const Mat2& r) {
    return {l.a + r.a, l.b + r.b, l.c + r.c, l.d + r.d};
  }
  friend Mat2 operator*(double s, const Mat2& m) {
    return {s * m.a, s * m.b, s * m.c, s * m.d};
  }
};

inline Mat2 rotation_matrix(double radians) {
  const double c = std::cos(radians), s = std::sin(radians);
  return {c, -s, s, c};
}

inline constexpr double kPi = 3.14159265358979323846;

// Wrap into [0, 1).
inline double wrap01(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r = 0.0;
  return r;
}

// Signed shortest displacement from a to b on the unit circle, in [-1/2, 1/2).
inline double circle_delta(double a, double b) {
  double d = wrap01(b - a);
  return d >= 0.5 ? d - 1.0 : d;
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

enum class DomainKind { rectangle, circle };

// A chart rectangle [x0, x1] x [y0, y1] split into resolution^2 cells, or the
// circle [0, 1) split into resolution arcs. Circle points use only `x`.
class Domain {
 public:
  static constexpr int kMinResolution = 16;
  static constexpr int kDefaultResolution = 1024;

  static Domain rectangle(double x0, double x1, double y0, double y1,
                          int resolution = kDefaultResolution) {
    if (!(x1 > x0) || !(y1 > y0)) throw DomainError("rectangle bounds must have positive extent");
    check_resolution(resolution);
    return Domain(DomainKind::rectangle, x0, x1, y0, y1, resolution);
  }

  // Square [-half, half]^2.
  static Domain square(double half_width, int resolution = kDefaultResolution) {
    return rectangle(-half_width, half_width, -half_width, half_width, resolution);
  }

  static Domain circle(int resolution = kDefaultResolution) {
    check_resolution(resolution);
    return Domain(DomainKind::circle, 0.0, 1.0, 0.0, 0.0, resolution);
  }

  DomainKind kind() const { return kind_; }
  bool is_circle() const { return kind_ == DomainKind::circle; }
  int resolution() const { return n_; }
  int cols() const { return n_; }
  int rows() const { return is_circle() ? 1 : n_; }
  std::size_t cell_count() const {
    return static_cast<std::size_t>(cols()) * static_cast<std::size_t>(rows());
  }
  double x0() const { return x0_; }
  double x1() const { return x1_; }
  double y0() const { return y0_; }
  double y1() const { return y1_; }
  double cell_width_x() const { return dx_; }
  double cell_width_y() const { return is_circle() ? dx_ : dy_; }
  double cell_width() const { return std::max(cell_width_x(), cell_width_y()); }
  double cell_diagonal() const { return is_circle() ? dx_ : std::hypot(dx_, dy_); }

  std::size_t index(int col, int row) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(col);
  }
  int col_of(std::size_t idx) const { return static_cast<int>(idx % static_cast<std::size_t>(n_)); }
  int row_of(std::size_t idx) const { return static_cast<int>(idx / static_cast<std::size_t>(n_)); }

  Point cell_center(int col, int row) const {
    if (is_circle()) return {(col + 0.5) * dx_, 0.0};
    return {x0_ + (col + 0.5) * dx_, y0_ + (row + 0.5) * dy_};
  }
  Point cell_center(std::size_t idx) const { return cell_center(col_of(idx), row_of(idx)); }

  // Cell containing p (half-open cells); nullopt outside the rectangle.
  std::optional<std::size_t> cell_of(Point p) const {
    if (is_circle()) {
      int c = static_cast<int>(std::floor(wrap01(p.x) * n_));
      c = std::clamp(c, 0, n_ - 1);
      return static_cast<std::size_t>(c);
    }
    const double fx = (p.x - x0_) / dx_;
    const double fy = (p.y - y0_) / dy_;
    if (!(fx >= 0.0 && fx < n_ && fy >= 0.0 && fy < n_)) return std::nullopt;
    return index(static_cast<int>(fx), static_cast<int>(fy));
  }

  bool contains(Point p) const {
    if (is_circle()) return std::isfinite(p.x);
    return p.x >= x0_ && p.x <= x1_ && p.y >= y0_ && p.y <= y1_;
  }

  double distance(Point a, Point b) const {
    if (is_circle()) return std::abs(circle_delta(a.x, b.x));
    return std::hypot(a.x - b.x, a.y - b.y);
  }

  friend bool operator==(const Domain&, const Domain&) = default;

 private:
  Domain(DomainKind kind, double x0, double x1, double y0, double y1, int n)
      : kind_(kind), x0_(x0), x1_(x1), y0_(y0), y1_(y1), n_(n),
        dx_((x1 - x0) / n), dy_(kind == DomainKind::circle ? 0.0 : (y1 - y0) / n) {}

  static void check_resolution(int n) {
    if (n < kMinResolution) throw ResolutionError("resolution must be at least 16 cells per axis");
  }

  DomainKind kind_;
  double x0_, x1_, y0_, y1_;
  int n_;
  double dx_, dy_;
};

// Closed geodesic ball. On the circle it is an arc of half-length `radius`.
struct Disk {
  Point center;
  double radius = 0.0;

  bool contains(const Domain& dom, Point p) const { return dom.distance(center, p) <= radius; }
};

// True iff the disk lies inside the chart.
inline bool disk_inside(const Domain& dom, const Disk& d) {
  if (!(d.radius > 0.0)) return false;
  if (dom.is_circle()) return d.radius < 0.5;
  return d.center.x - d.radius >= dom.x0() && d.center.x + d.radius <= dom.x1() &&
         d.center.y - d.radius >= dom.y0() && d.center.y + d.radius <= dom.y1();
}

namespace detail {

inline int floor_tol(double v) { return static_cast<int>(std::floor(v + 1e-9)); }

// Column half-width of a disk of radius r (in cell-center offsets) at row
// offset dr; negative when the row is outside the disk.
inline int disk_half_width(double r, int dr, double dx, double dy) {
  const double h2 = r * r - (dr * dy) * (dr * dy);
  if (h2 < -1e-12 * r * r) return -1;
  return floor_tol(std::sqrt(std::max(0.0, h2)) / dx);
}

}  // namespace detail

// Calls f(index) for every cell whose center lies in the closed disk. Cells
// outside the chart are skipped.
template <typename F>
void for_each_disk_cell(const Domain& dom, const Disk& disk, F&& f) {
  const int n = dom.resolution();
  const double dx = dom.cell_width_x();
  if (dom.is_circle()) {
    // Arc of centers within radius of disk.center.
    const double c = wrap01(disk.center.x);
    const int lo = static_cast<int>(std::ceil((c - disk.radius) / dx - 0.5 - 1e-9));
    const int hi = static_cast<int>(std::floor((c + disk.radius) / dx - 0.5 + 1e-9));
    if (hi - lo + 1 >= n) {
      for (int i = 0; i < n; ++i) f(static_cast<std::size_t>(i));
      return;
    }
    for (int i = lo; i <= hi; ++i) f(static_cast<std::size_t>(((i % n) + n) % n));
    return;
  }
  const double dy = dom.cell_width_y();
  const double fr = (disk.center.y - dom.y0()) / dy - 0.5;
  const int row_lo = std::max(0, static_cast<int>(std::ceil(fr - disk.radius / dy - 1e-9)));
  const int row_hi = std::min(n - 1, static_cast<int>(std::floor(fr + disk.radius / dy + 1e-9)));
  const double fc = (disk.center.x - dom.x0()) / dx - 0.5;
  for (int row = row_lo; row <= row_hi; ++row) {
    const double oy = (row - fr) * dy;
    const double h2 = disk.radius * disk.radius - oy * oy;
    if (h2 < 0.0) continue;
    const double hw = std::sqrt(h2) / dx;
    const int col_lo = std::max(0, static_cast<int>(std::ceil(fc - hw - 1e-9)));
    const int col_hi = std::min(n - 1, static_cast<int>(std::floor(fc + hw + 1e-9)));
    for (int col = col_lo; col <= col_hi; ++col) f(dom.index(col, row));
  }
}

// A rasterized measurable subset of a chart.
class GridSet {
 public:
  explicit GridSet(Domain dom) : dom_(std::move(dom)), bits_(dom_.cell_count(), 0) {}

  static GridSet empty(const Domain& dom) { return GridSet(dom); }

  static GridSet full(const Domain& dom) {
    GridSet s(dom);
    std::fill(s.bits_.begin(), s.bits_.end(), std::uint8_t{1});
    return s;
  }

  template <typename Pred>
  static GridSet from_predicate(const Domain& dom, Pred&& pred) {
    GridSet s(dom);
    for (std::size_t i = 0; i < s.bits_.size(); ++i) s.bits_[i] = pred(dom.cell_center(i)) ? 1 : 0;
    return s;
  }

  static GridSet disk(const Domain& dom, const Disk& d) {
    GridSet s(dom);
    for_each_disk_cell(dom, d, [&](std::size_t i) { s.bits_[i] = 1; });
    return s;
  }

  const Domain& domain() const { return dom_; }
  std::size_t size() const { return bits_.size(); }
  bool test(std::size_t i) const { return bits_[i] != 0; }
  void set(std::size_t i, bool v = true) { bits_[i] = v ? 1 : 0; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  // Membership of an arbitrary point: the cell holding it is included.
  bool contains_point(Point p) const {
    auto c = dom_.cell_of(p);
    return c && bits_[*c] != 0;
  }

  std::size_t count() const {
    std::size_t n = 0;
    for (auto b : bits_) n += b;
    return n;
  }
  bool empty() const { return count() == 0; }

  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < bits_.size(); ++i)
      if (bits_[i]) out.push_back(i);
    return out;
  }

  GridSet complement() const {
    GridSet s(dom_);
    for (std::size_t i = 0; i < bits_.size(); ++i) s.bits_[i] = bits_[i] ? 0 : 1;
    return s;
  }

  GridSet& operator|=(const GridSet& o) { return combine(o, [](auto a, auto b) { return a | b; }); }
  GridSet& operator&=(const GridSet& o) { return combine(o, [](auto a, auto b) { return a & b; }); }
  GridSet& operator^=(const GridSet& o) { return combine(o, [](auto a, auto b) { return a ^ b; }); }
  GridSet& operator-=(const GridSet& o) {
    return combine(o, [](auto a, auto b) { return static_cast<std::uint8_t>(a & (b ^ 1)); });
  }

  friend GridSet operator|(GridSet a, const GridSet& b) { return a |= b; }
  friend GridSet operator&(GridSet a, const GridSet& b) { return a &= b; }
  friend GridSet operator^(GridSet a, const GridSet& b) { return a ^= b; }
  friend GridSet operator-(GridSet a, const GridSet& b) { return a -= b; }

  bool is_subset_of(const GridSet& o) const {
    require_same(o);
    for (std::size_t i = 0; i < bits_.size(); ++i)
      if (bits_[i] && !o.bits_[i]) return false;
    return true;
  }

  friend bool operator==(const GridSet& a, const GridSet& b) {
    return a.dom_ == b.dom_ && a.bits_ == b.bits_;
  }

 private:
  void require_same(const GridSet& o) const {
    if (!(dom_ == o.dom_)) throw DomainError("grid sets live on different domains");
  }
  template <typename Op>
  GridSet& combine(const GridSet& o, Op op) {
    require_same(o);
    for (std::size_t i = 0; i < bits_.size(); ++i)
      bits_[i] = static_cast<std::uint8_t>(op(bits_[i], o.bits_[i]));
    return *this;
  }

  Domain dom_;
  std::vector<std::uint8_t> bits_;
};

inline double volume(const GridSet& s) {
  return static_cast<double>(s.count()) / static_cast<double>(s.size());
}

// vol(a ∩ d) / vol(d) on the grid. The disk must lie inside the chart.
inline double volume_ratio(const GridSet& a, const Disk& d) {
  if (!disk_inside(a.domain(), d)) throw DomainError("disk is not inside the domain");
  std::size_t in = 0, total = 0;
  for_each_disk_cell(a.domain(), d, [&](std::size_t i) {
    ++total;
    in += a.test(i) ? 1 : 0;
  });
  if (total == 0) throw ResolutionError("disk contains no cell centers");
  return static_cast<double>(in) / static_cast<double>(total);
}

// Grid approximation of the Lebesgue density points of `a`: cells whose
// disk of the smallest listed radius is filled to at least `threshold`.
// Disks are clipped to the chart near its edge.
inline GridSet density_points(const GridSet& a, const std::vector<double>& radii, double threshold) {
  if (radii.empty()) throw ValidationError("density_points needs at least one radius");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] < radii[i - 1])) throw ValidationError("radii must be strictly decreasing");
  if (!(threshold > 0.5 && threshold <= 1.0)) throw ValidationError("threshold must lie in (0.5, 1]");
  const Domain& dom = a.domain();
  const double r = radii.back();
  if (r < 2.0 * dom.cell_width() - 1e-12)
    throw ResolutionError("smallest radius is below two cell widths");

  const int n = dom.resolution();
  GridSet out(dom);
  if (dom.is_circle()) {
    const int w = detail::floor_tol(r / dom.cell_width_x());
    if (2 * w + 1 >= n) throw ResolutionError("radius wraps the whole circle");
    std::vector<std::size_t> pre(2 * static_cast<std::size_t>(n) + 1, 0);
    for (int i = 0; i < 2 * n; ++i) pre[i + 1] = pre[i] + (a.test(static_cast<std::size_t>(i % n)) ? 1 : 0);
    const double total = 2.0 * w + 1.0;
    for (int i = 0; i < n; ++i) {
      const int lo = i - w + n;
      const std::size_t in = pre[lo + 2 * w + 1] - pre[lo];
      out.set(static_cast<std::size_t>(i), static_cast<double>(in) >= threshold * total - 1e-9);
    }
    return out;
  }

  const double dx = dom.cell_width_x(), dy = dom.cell_width_y();
  const int R = detail::floor_tol(r / dy);
  std::vector<int> half(2 * R + 1);
  for (int dr = -R; dr <= R; ++dr) half[dr + R] = detail::disk_half_width(r, dr, dx, dy);
  // Row prefix sums.
  const std::size_t stride = static_cast<std::size_t>(n) + 1;
  std::vector<std::uint32_t> pre(stride * n, 0);
  for (int row = 0; row < n; ++row)
    for (int col = 0; col < n; ++col)
      pre[row * stride + col + 1] = pre[row * stride + col] + (a.test(dom.index(col, row)) ? 1 : 0);

  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      std::size_t in = 0, total = 0;
      for (int dr = -R; dr <= R; ++dr) {
        const int rr = row + dr;
        const int w = half[dr + R];
        if (rr < 0 || rr >= n || w < 0) continue;
        const int lo = std::max(0, col - w), hi = std::min(n - 1, col + w);
        total += static_cast<std::size_t>(hi - lo + 1);
        in += pre[rr * stride + hi + 1] - pre[rr * stride + lo];
      }
      out.set(dom.index(col, row), static_cast<double>(in) >= threshold * static_cast<double>(total) - 1e-9);
    }
  }
  return out;
}

namespace detail {

// 1-D squared distance transform (Felzenszwalb & Huttenlocher) for samples
// spaced `h` apart. Infinite entries are skipped.
inline void edt_1d(const std::vector<double>& f, double h, std::vector<double>& out,
                   std::vector<int>& v, std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  const double w = h * h;
  constexpr double inf = std::numeric_limits<double>::infinity();
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (!std::isfinite(f[q])) continue;
    while (k >= 0) {
      const int p = v[k];
      const double s = ((f[q] + w * q * q) - (f[p] + w * p * p)) / (2.0 * w * (q - p));
      if (s <= z[k]) {
        --k;
      } else {
        break;
      }
    }
    ++k;
    v[k] = q;
    if (k == 0) {
      z[0] = -inf;
    } else {
      const int p = v[k - 1];
      z[k] = ((f[q] + w * q * q) - (f[p] + w * p * p)) / (2.0 * w * (q - p));
    }
    z[k + 1] = inf;
  }
  if (k < 0) {
    std::fill(out.begin(), out.end(), inf);
    return;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[j + 1] < q) ++j;
    const double t = q - v[j];
    out[q] = w * t * t + f[v[j]];
  }
}

}  // namespace detail

// Distance from every cell center to the nearest included cell center, in
// chart units. +inf everywhere when `b` is empty.
inline std::vector<double> distance_field(const GridSet& b) {
  const Domain& dom = b.domain();
  const int n = dom.resolution();
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (dom.is_circle()) {
    std::vector<double> cells(n, inf);
    double last = -inf;
    for (int i = 0; i < 2 * n; ++i) {
      if (b.test(static_cast<std::size_t>(i % n))) last = i;
      cells[i % n] = std::min(cells[i % n], i - last);
    }
    last = inf;
    for (int i = 2 * n - 1; i >= 0; --i) {
      if (b.test(static_cast<std::size_t>(i % n))) last = i;
      cells[i % n] = std::min(cells[i % n], last - i);
    }
    for (auto& c : cells) c = std::min(c, static_cast<double>(n)) * dom.cell_width_x();
    if (b.empty()) std::fill(cells.begin(), cells.end(), inf);
    return cells;
  }
  std::vector<double> g(dom.cell_count(), inf);
  std::vector<double> f(n), out(n), z(n + 1);
  std::vector<int> v(n);
  // Columns: distances along y.
  for (int col = 0; col < n; ++col) {
    for (int row = 0; row < n; ++row) f[row] = b.test(dom.index(col, row)) ? 0.0 : inf;
    detail::edt_1d(f, dom.cell_width_y(), out, v, z);
    for (int row = 0; row < n; ++row) g[dom.index(col, row)] = out[row];
  }
  // Rows: combine along x.
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) f[col] = g[dom.index(col, row)];
    detail::edt_1d(f, dom.cell_width_x(), out, v, z);
    for (int col = 0; col < n; ++col) g[dom.index(col, row)] = std::sqrt(out[col]);
  }
  return g;
}

// Hausdorff distance between the cell-center clouds of two nonempty sets.
inline double hausdorff_distance(const GridSet& a, const GridSet& b) {
  if (!(a.domain() == b.domain())) throw DomainError("hausdorff_distance: different domains");
  if (a.empty() || b.empty()) throw EmptySetError("hausdorff_distance of an empty set");
  const auto da = distance_field(a);
  const auto db = distance_field(b);
  double h = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.test(i)) h = std::max(h, db[i]);
    if (b.test(i)) h = std::max(h, da[i]);
  }
  return h;
}

// Cells within `width` of the set.
inline GridSet dilate(const GridSet& a, double width) {
  const auto d = distance_field(a);
  GridSet out(a.domain());
  for (std::size_t i = 0; i < a.size(); ++i) out.set(i, d[i] <= width + 1e-12);
  return out;
}

// Volume of the band of cells within `cells` cell diagonals of the boundary,
// on both sides. Zero for the empty and the full set.
inline double ring_volume(const GridSet& a, double cells = 1.0) {
  const double w = cells * a.domain().cell_diagonal() + 1e-12;
  const auto din = distance_field(a);
  const auto dout = distance_field(a.complement());
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if ((a.test(i) && dout[i] <= w) || (!a.test(i) && din[i] <= w)) ++n;
  return static_cast<double>(n) / static_cast<double>(a.size());
}

// Largest r such that some included cell has every cell center within r
// included (distance to the complement). +inf for the full set.
inline double inradius(const GridSet& a) {
  const auto d = distance_field(a.complement());
  double best = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.test(i)) best = std::max(best, d[i]);
  return best;
}

// Every cell of `region` lies within eps of an included cell of `a`.
inline bool is_eps_dense(const GridSet& a, double eps, const std::optional<GridSet>& region = std::nullopt) {
  const auto d = distance_field(a);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (region && !region->test(i)) continue;
    if (d[i] > eps + 1e-12) return false;
  }
  return true;
}

// Maximum distance between included cell centers.
inline double rasterized_diameter(const GridSet& a) {
  const Domain& dom = a.domain();
  if (dom.is_circle()) {
    std::vector<double> xs;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a.test(i)) xs.push_back(dom.cell_center(i).x);
    if (xs.size() < 2) return 0.0;
    double best = 0.0;
    for (double x : xs) {
      const double target = wrap01(x + 0.5);
      auto it = std::lower_bound(xs.begin(), xs.end(), target);
      for (auto j : {it, it == xs.begin() ? xs.end() - 1 : it - 1}) {
        if (j == xs.end()) j = xs.begin();
        best = std::max(best, dom.distance({x, 0}, {*j, 0}));
      }
    }
    return best;
  }
  // Row extremes, then convex hull (monotone chain), then brute force on hull.
  std::vector<Point> pts;
  const int n = dom.resolution();
  for (int row = 0; row < n; ++row) {
    int lo = -1, hi = -1;
    for (int col = 0; col < n; ++col) {
      if (a.test(dom.index(col, row))) {
        if (lo < 0) lo = col;
        hi = col;
      }
    }
    if (lo >= 0) {
      pts.push_back(dom.cell_center(lo, row));
      if (hi != lo) pts.push_back(dom.cell_center(hi, row));
    }
  }
  if (pts.size() < 2) return 0.0;
  std::sort(pts.begin(), pts.end(), [](Point p, Point q) { return p.x < q.x || (p.x == q.x && p.y < q.y); });
  auto cross = [](Point o, Point p, Point q) { return (p.x - o.x) * (q.y - o.y) - (p.y - o.y) * (q.x - o.x); };
  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k > 1 ? k - 1 : k);
  double best = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i)
    for (std::size_t j = i + 1; j < hull.size(); ++j) best = std::max(best, norm(hull[i] - hull[j]));
  return best;
}

// Uniform point inside a uniformly chosen included cell.
inline Point sample_point(const Domain& dom, const std::vector<std::size_t>& cells, Rng& rng) {
  const std::size_t idx = cells[rng.below(cells.size())];
  const Point c = dom.cell_center(idx);
  if (dom.is_circle()) return {wrap01(c.x + (rng.uniform() - 0.5) * dom.cell_width_x()), 0.0};
  return {c.x + (rng.uniform() - 0.5) * dom.cell_width_x(), c.y + (rng.uniform() - 0.5) * dom.cell_width_y()};
}

// ---- serialization ----------------------------------------------------------

// PGM with maxval 1. Image row 0 is the top row of the chart (largest y).
inline void write_pgm(const GridSet& s, const std::string& path, bool binary = false) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  const Domain& dom = s.domain();
  const int w = dom.cols(), h = dom.rows();
  out << (binary ? "P5" : "P2") << "\n" << w << " " << h << "\n1\n";
  for (int r = h - 1; r >= 0; --r) {
    for (int c = 0; c < w; ++c) {
      const bool v = s.test(dom.index(c, r));
      if (binary) {
        out.put(static_cast<char>(v ? 1 : 0));
      } else {
        out << (v ? '1' : '0') << (c + 1 < w ? ' ' : '\n');
      }
    }
  }
}

namespace detail {

inline std::string pgm_token(std::istream& in) {
  std::string tok;
  char ch;
  while (in.get(ch)) {
    if (ch == '#') {
      std::string skip;
      std::getline(in, skip);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(ch);
  }
  return tok;
}

}  // namespace detail

// Width and height from a PGM header.
inline std::pair<int, int> pgm_dimensions(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path);
  const std::string magic = detail::pgm_token(in);
  if (magic != "P2" && magic != "P5") throw ValidationError(path + ": not a PGM file");
  try {
    const int w = std::stoi(detail::pgm_token(in));
    const int h = std::stoi(detail::pgm_token(in));
    return {w, h};
  } catch (const std::exception&) {
    throw ValidationError(path + ": malformed PGM header");
  }
}

inline GridSet read_pgm(const std::string& path, const Domain& dom) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path);
  const std::string magic = detail::pgm_token(in);
  if (magic != "P2" && magic != "P5") throw ValidationError(path + ": not a PGM file");
  int w = 0, h = 0, maxval = 0;
  try {
    w = std::stoi(detail::pgm_token(in));
    h = std::stoi(detail::pgm_token(in));
    maxval = std::stoi(detail::pgm_token(in));
  } catch (const std::exception&) {
    throw ValidationError(path + ": malformed PGM header");
  }
  if (w != dom.cols() || h != dom.rows())
    throw DomainError(path + ": image size does not match the domain resolution");
  if (maxval < 1 || maxval > 255) throw ValidationError(path + ": unsupported maxval");
  GridSet s(dom);
  for (int r = h - 1; r >= 0; --r) {
    for (int c = 0; c < w; ++c) {
      int v = 0;
      if (magic == "P5") {
        char ch;
        if (!in.get(ch)) throw ValidationError(path + ": truncated PGM data");
        v = static_cast<unsigned char>(ch);
      } else {
        const std::string tok = detail::pgm_token(in);
        if (tok.empty()) throw ValidationError(path + ": truncated PGM data");
        v = std::stoi(tok);
      }
      s.set(dom.index(c, r), v > 0);
    }
  }
  return s;
}

inline void write_disks_csv(const std::vector<Disk>& disks, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out << "cx,cy,r\n";
  for (const auto& d : disks)
    out << format_double(d.center.x) << "," << format_double(d.center.y) << "," << format_double(d.radius) << "\n";
}

inline std::vector<Disk> read_disks_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path);
  std::string line;
  std::getline(in, line);
  if (line.rfind("cx,cy,r", 0) != 0) throw ValidationError(path + ": expected header cx,cy,r");
  std::vector<Disk> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string a, b, c;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c))
      throw ValidationError(path + ": bad row '" + line + "'");
    try {
      out.push_back({{std::stod(a), std::stod(b)}, std::stod(c)});
    } catch (const std::exception&) {
      throw ValidationError(path + ": bad number in '" + line + "'");
    }
  }
  return out;
}

// Cell centers of a set, one "x,y" row each.
inline void write_points_csv(const GridSet& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out << "x,y\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!s.test(i)) continue;
    const Point p = s.domain().cell_center(i);
    out << format_double(p.x) << "," << format_double(p.y) << "\n";
  }
}

}  // namespace ifsprobe
