#pragma once

// Differentiable self-maps of a planar chart or of the circle, words over a
// generating set, and the action of maps on rasterized sets.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ifsprobe/error.hpp"
#include "ifsprobe/geometry.hpp"
#include "ifsprobe/rng.hpp"

namespace ifsprobe {

enum class MapKind { affine_similarity, circle_moebius, circle_rotation, perturbed };

// Derivative of a map: a 2x2 matrix on charts, a scalar (stored in `m.a`) on
// the circle.
struct Jacobian {
  int dim = 2;
  Mat2 m;

  double det() const { return dim == 1 ? m.a : m.det(); }
  double norm() const { return dim == 1 ? std::abs(m.a) : m.operator_norm(); }
};

namespace detail {

struct BumpMode {
  double coeff = 0.0;
  double kx = 0.0, ky = 0.0;  // wave vector (circle: kx is the integer frequency)
  double phase = 0.0;
  Point dir;                  // output direction (planar only)
};

}  // namespace detail

class MapSpec {
 public:
  // x -> anchor + kappa * Rot(theta) (x - anchor); theta in degrees.
  static MapSpec affine_similarity(double kappa, double theta_degrees, Point anchor = {}) {
    if (!(kappa > 0.0 && kappa < 1.0)) throw ValidationError("affine similarity needs 0 < kappa < 1");
    MapSpec m(MapKind::affine_similarity);
    m.p1_ = kappa;
    m.p2_ = theta_degrees;
    m.anchor_ = anchor;
    m.rot_ = rotation_matrix(theta_degrees * kPi / 180.0);
    return m;
  }

  // North-south map of the circle: the conjugate of t -> lambda * t under
  // t = tan(pi (x - pole)). Attracting fixed point at `pole` with multiplier
  // lambda, repelling one at pole + 1/2 with multiplier 1/lambda.
  static MapSpec circle_moebius(double lambda, double pole = 0.0) {
    if (!(lambda > 0.5 && lambda < 1.0)) throw MultiplierError("north-south multiplier must lie in (1/2, 1)");
    MapSpec m(MapKind::circle_moebius);
    m.p1_ = lambda;
    m.p2_ = wrap01(pole);
    return m;
  }

  // x -> x + angle (mod 1); angle in turns.
  static MapSpec circle_rotation(double angle) {
    if (!std::isfinite(angle)) throw ValidationError("rotation angle must be finite");
    MapSpec m(MapKind::circle_rotation);
    m.p1_ = angle;
    return m;
  }

  // base + smooth seeded bump whose value and derivative are both bounded by
  // `amplitude` (operator norm for the derivative on charts).
  static MapSpec perturbed(const MapSpec& base, double amplitude, std::uint64_t seed) {
    if (!(amplitude >= 0.0)) throw ValidationError("perturbation amplitude must be >= 0");
    MapSpec m(MapKind::perturbed);
    m.base_ = std::make_shared<const MapSpec>(base);
    m.p1_ = amplitude;
    m.seed_ = seed;
    Rng rng(seed);
    constexpr int kModes = 3;
    double weights[kModes], wsum = 0.0;
    for (double& w : weights) wsum += (w = 0.25 + rng.uniform());
    for (int j = 0; j < kModes; ++j) {
      detail::BumpMode mode;
      const double share = amplitude * weights[j] / wsum;
      mode.phase = rng.uniform(0.0, 2.0 * kPi);
      if (base.is_circle()) {
        const int k = 1 + static_cast<int>(rng.below(3));
        mode.kx = k;
        mode.coeff = share / (2.0 * kPi * k);
      } else {
        const double mag = rng.uniform(0.5, 2.0);
        const double ang = rng.uniform(0.0, 2.0 * kPi);
        const double out = rng.uniform(0.0, 2.0 * kPi);
        mode.kx = mag * std::cos(ang);
        mode.ky = mag * std::sin(ang);
        mode.dir = {std::cos(out), std::sin(out)};
        mode.coeff = share / std::max(1.0, mag);
      }
      m.modes_.push_back(mode);
    }
    return m;
  }

  MapKind kind() const { return kind_; }
  bool is_circle() const {
    return kind_ == MapKind::circle_moebius || kind_ == MapKind::circle_rotation ||
           (kind_ == MapKind::perturbed && base_->is_circle());
  }
  bool inverted() const { return inverted_; }

  double kappa() const { return p1_; }
  double theta_degrees() const { return p2_; }
  Point anchor() const { return anchor_; }
  double lambda() const { return p1_; }
  double pole() const { return p2_; }
  double angle() const { return p1_; }
  double amplitude() const { return p1_; }
  std::uint64_t seed() const { return seed_; }
  const MapSpec& base() const { return *base_; }

  // Lower bound for the smallest singular value of the derivative, over the
  // whole chart. A C^1 bump below this keeps the map a diffeomorphism.
  double min_derivative_bound() const {
    switch (kind_) {
      case MapKind::affine_similarity: return inverted_ ? 1.0 / p1_ : p1_;
      case MapKind::circle_moebius: return p1_;
      case MapKind::circle_rotation: return 1.0;
      case MapKind::perturbed: return base_->min_derivative_bound() - p1_;
    }
    return 0.0;
  }

  bool invertible() const {
    if (kind_ != MapKind::perturbed) return true;
    return base_->invertible() && p1_ < base_->min_derivative_bound();
  }

  MapSpec inverse() const {
    if (!invertible()) throw InvertibilityError("map is not invertible");
    MapSpec m = *this;
    m.inverted_ = !inverted_;
    return m;
  }

  Point operator()(Point x) const {
    // Inline fast path: word loops spend most of their time here.
    if (kind_ == MapKind::affine_similarity && !inverted_) return anchor_ + p1_ * rot_.apply(x - anchor_);
    if (!inverted_) return forward(x);
    if (auto p = backward(x)) return *p;
    throw InvertibilityError("inverse evaluation did not converge");
  }

  // The point mapped onto x, or nullopt if it could not be found.
  std::optional<Point> apply_inverse(Point x) const {
    if (inverted_) return forward(x);
    return backward(x);
  }

  Jacobian jacobian(Point x) const {
    if (!inverted_) return forward_jacobian(x);
    auto z = backward(x);
    if (!z) throw InvertibilityError("inverse evaluation did not converge");
    return invert(forward_jacobian(*z));
  }

  double jacobian_det(Point x) const {
    if (kind_ == MapKind::affine_similarity) return inverted_ ? 1.0 / (p1_ * p1_) : p1_ * p1_;
    if (kind_ == MapKind::circle_rotation) return 1.0;
    return jacobian(x).det();
  }

  // One line of the system text format.
  std::string describe(std::size_t base_index = 0) const {
    std::ostringstream os;
    switch (kind_) {
      case MapKind::affine_similarity:
        os << "affine kappa=" << format_double(p1_) << " theta=" << format_double(p2_)
           << " anchor=" << format_double(anchor_.x) << "," << format_double(anchor_.y);
        break;
      case MapKind::circle_moebius:
        os << "moebius lambda=" << format_double(p1_) << " pole=" << format_double(p2_);
        break;
      case MapKind::circle_rotation:
        os << "rotation angle=" << format_double(p1_);
        break;
      case MapKind::perturbed:
        if (base_->kind_ != MapKind::perturbed && !base_->inverted_)
          os << base_->describe() << " amp=" << format_double(p1_) << " seed=" << seed_;
        else
          os << "perturb base=" << base_index << " amp=" << format_double(p1_) << " seed=" << seed_;
        break;
    }
    if (inverted_) os << " inverse=true";
    return os.str();
  }

 private:
  explicit MapSpec(MapKind kind) : kind_(kind) {}

  static Jacobian invert(const Jacobian& j) {
    if (j.dim == 1) return {1, {1.0 / j.m.a, 0.0, 0.0, 1.0}};
    const double d = j.m.det();
    return {2, {j.m.d / d, -j.m.b / d, -j.m.c / d, j.m.a / d}};
  }

  static Point moebius_step(double mult, double pole, double x) {
    const double u = circle_delta(pole, x);
    const double v = std::atan2(mult * std::sin(kPi * u), std::cos(kPi * u)) / kPi;
    return {wrap01(pole + v), 0.0};
  }

  static double moebius_derivative(double mult, double pole, double x) {
    const double u = circle_delta(pole, x);
    const double c = std::cos(kPi * u), s = std::sin(kPi * u);
    return mult / (c * c + mult * mult * s * s);
  }

  Point bump(Point x) const {
    Point out;
    if (is_circle()) {
      for (const auto& m : modes_) out.x += m.coeff * std::sin(2.0 * kPi * m.kx * x.x + m.phase);
      return out;
    }
    for (const auto& m : modes_) {
      const double s = m.coeff * std::sin(m.kx * x.x + m.ky * x.y + m.phase);
      out.x += s * m.dir.x;
      out.y += s * m.dir.y;
    }
    return out;
  }

  Mat2 bump_jacobian(Point x) const {
    Mat2 j{0.0, 0.0, 0.0, 0.0};
    if (is_circle()) {
      for (const auto& m : modes_) j.a += m.coeff * 2.0 * kPi * m.kx * std::cos(2.0 * kPi * m.kx * x.x + m.phase);
      return j;
    }
    for (const auto& m : modes_) {
      const double c = m.coeff * std::cos(m.kx * x.x + m.ky * x.y + m.phase);
      j.a += c * m.dir.x * m.kx;
      j.b += c * m.dir.x * m.ky;
      j.c += c * m.dir.y * m.kx;
      j.d += c * m.dir.y * m.ky;
    }
    return j;
  }

  Point forward(Point x) const {
    switch (kind_) {
      case MapKind::affine_similarity:
        return anchor_ + p1_ * rot_.apply(x - anchor_);
      case MapKind::circle_moebius:
        return moebius_step(p1_, p2_, x.x);
      case MapKind::circle_rotation:
        return {wrap01(x.x + p1_), 0.0};
      case MapKind::perturbed: {
        const Point b = (*base_)(x);
        const Point d = bump(x);
        if (is_circle()) return {wrap01(b.x + d.x), 0.0};
        return b + d;
      }
    }
    return x;
  }

  Jacobian forward_jacobian(Point x) const {
    switch (kind_) {
      case MapKind::affine_similarity:
        return {2, p1_ * rot_};
      case MapKind::circle_moebius:
        return {1, {moebius_derivative(p1_, p2_, x.x), 0.0, 0.0, 1.0}};
      case MapKind::circle_rotation:
        return {1, {1.0, 0.0, 0.0, 1.0}};
      case MapKind::perturbed: {
        Jacobian j = base_->jacobian(x);
        const Mat2 b = bump_jacobian(x);
        if (j.dim == 1) {
          j.m.a += b.a;
        } else {
          j.m = j.m + b;
        }
        return j;
      }
    }
    return {};
  }

  std::optional<Point> backward(Point x) const {
    switch (kind_) {
      case MapKind::affine_similarity: {
        const Mat2 r = rot_;
        const Mat2 rt{r.a, r.c, r.b, r.d};
        return anchor_ + (1.0 / p1_) * rt.apply(x - anchor_);
      }
      case MapKind::circle_moebius:
        return moebius_step(1.0 / p1_, p2_, x.x);
      case MapKind::circle_rotation:
        return Point{wrap01(x.x - p1_), 0.0};
      case MapKind::perturbed:
        return newton_inverse(x);
    }
    return std::nullopt;
  }

  // Solve forward(z) = x starting from the unperturbed inverse.
  std::optional<Point> newton_inverse(Point x) const {
    auto start = base_->apply_inverse(x);
    if (!start) return std::nullopt;
    Point z = *start;
    const bool circ = is_circle();
    for (int it = 0; it < 60; ++it) {
      const Point fz = forward(z);
      const Jacobian j = forward_jacobian(z);
      if (circ) {
        const double r = circle_delta(x.x, fz.x);
        if (std::abs(r) < 1e-15) return Point{wrap01(z.x), 0.0};
        if (j.m.a == 0.0) return std::nullopt;
        z.x = wrap01(z.x - r / j.m.a);
      } else {
        const Point r = fz - x;
        const double scale = 1.0 + norm(x);
        if (norm(r) < 1e-15 * scale) return z;
        const double d = j.m.det();
        if (d == 0.0) return std::nullopt;
        z = z - Point{(j.m.d * r.x - j.m.b * r.y) / d, (-j.m.c * r.x + j.m.a * r.y) / d};
      }
    }
    const Point fz = forward(z);
    const double res = circ ? std::abs(circle_delta(x.x, fz.x)) : norm(fz - x) / (1.0 + norm(x));
    if (res < 1e-11) return circ ? Point{wrap01(z.x), 0.0} : z;
    return std::nullopt;
  }

  MapKind kind_;
  double p1_ = 0.0, p2_ = 0.0;
  Point anchor_;
  Mat2 rot_;
  std::uint64_t seed_ = 0;
  std::shared_ptr<const MapSpec> base_;
  std::vector<detail::BumpMode> modes_;
  bool inverted_ = false;
};

// True iff the Jacobian at x has a non-real eigenvalue pair.
inline bool complex_eigenvalue_check(const MapSpec& m, Point x) {
  if (m.is_circle()) throw DimensionError("complex_eigenvalue_check needs a planar map");
  const Mat2 j = m.jacobian(x).m;
  const double tr = j.trace();
  return tr * tr - 4.0 * j.det() < -1e-12;
}

// Generators of an action semigroup; with include_inverses, of the group.
class SystemSpec {
 public:
  explicit SystemSpec(std::vector<MapSpec> generators, bool include_inverses = false)
      : generators_(std::move(generators)), include_inverses_(include_inverses) {
    if (generators_.empty()) throw ValidationError("a system needs at least one generator");
    for (const auto& g : generators_)
      if (g.is_circle() != generators_.front().is_circle())
        throw DimensionError("generators mix circle and planar maps");
    maps_ = generators_;
    if (include_inverses_) {
      for (const auto& g : generators_) {
        if (!g.invertible()) throw InvertibilityError("group systems need invertible generators");
        maps_.push_back(g.inverse());
      }
    }
  }

  const std::vector<MapSpec>& generators() const { return generators_; }
  bool include_inverses() const { return include_inverses_; }
  bool is_circle() const { return generators_.front().is_circle(); }

  // The word alphabet: generators, then their inverses for group systems.
  const std::vector<MapSpec>& maps() const { return maps_; }
  std::size_t alphabet_size() const { return maps_.size(); }
  const MapSpec& operator[](std::size_t i) const { return maps_[i]; }

  bool all_invertible() const {
    return std::all_of(maps_.begin(), maps_.end(), [](const MapSpec& m) { return m.invertible(); });
  }

 private:
  std::vector<MapSpec> generators_;
  bool include_inverses_;
  std::vector<MapSpec> maps_;
};

enum class Direction { forward, reverse };

// Symbols are 0-based indices into SystemSpec::maps().
//   forward: f_w = g[w_n] o ... o g[w_1]   (first symbol applied first)
//   reverse: h_w = g[w_1] o ... o g[w_n]   (first symbol applied last)
struct Word {
  std::vector<std::size_t> symbols;
  Direction direction = Direction::forward;

  std::size_t size() const { return symbols.size(); }
};

namespace detail {

inline void check_word(const SystemSpec& sys, const Word& w) {
  for (auto s : w.symbols)
    if (s >= sys.alphabet_size()) throw AlphabetError("word symbol outside the alphabet");
}

// Calls f(map) in application order.
template <typename F>
void for_each_factor(const SystemSpec& sys, const Word& w, F&& f) {
  if (w.direction == Direction::forward) {
    for (auto s : w.symbols) f(sys[s]);
  } else {
    for (auto it = w.symbols.rbegin(); it != w.symbols.rend(); ++it) f(sys[*it]);
  }
}

}  // namespace detail

inline Point apply_word(const SystemSpec& sys, const Word& w, Point x) {
  detail::check_word(sys, w);
  detail::for_each_factor(sys, w, [&](const MapSpec& m) { x = m(x); });
  return x;
}

// det D(word)(x) by the chain rule along the orbit of x.
inline double word_jacobian_det(const SystemSpec& sys, const Word& w, Point x) {
  detail::check_word(sys, w);
  double det = 1.0;
  detail::for_each_factor(sys, w, [&](const MapSpec& m) {
    det *= m.jacobian_det(x);
    x = m(x);
  });
  return det;
}

inline Word random_word(std::size_t alphabet, std::size_t length, Direction dir, Rng& rng) {
  Word w;
  w.direction = dir;
  w.symbols.resize(length);
  for (auto& s : w.symbols) s = static_cast<std::size_t>(rng.below(alphabet));
  return w;
}

// ---- action on rasterized sets ----------------------------------------------

namespace detail {

struct CellBox {
  int col_lo, col_hi, row_lo, row_hi;
  bool empty() const { return col_lo > col_hi || row_lo > row_hi; }
};

inline std::optional<CellBox> occupied_box(const GridSet& a) {
  const Domain& dom = a.domain();
  CellBox b{dom.cols(), -1, dom.rows(), -1};
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a.test(i)) continue;
    b.col_lo = std::min(b.col_lo, dom.col_of(i));
    b.col_hi = std::max(b.col_hi, dom.col_of(i));
    b.row_lo = std::min(b.row_lo, dom.row_of(i));
    b.row_hi = std::max(b.row_hi, dom.row_of(i));
  }
  if (b.empty()) return std::nullopt;
  return b;
}

// Cell box covering m(box), from the image of the box boundary (valid for
// diffeomorphisms), padded by two cells and clipped to the chart.
inline CellBox image_box(const MapSpec& m, const Domain& dom, const CellBox& box) {
  const double dx = dom.cell_width_x(), dy = dom.cell_width_y();
  const double xa = dom.x0() + box.col_lo * dx, xb = dom.x0() + (box.col_hi + 1) * dx;
  const double ya = dom.y0() + box.row_lo * dy, yb = dom.y0() + (box.row_hi + 1) * dy;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  auto add = [&](Point p) {
    const Point q = m(p);
    xmin = std::min(xmin, q.x);
    xmax = std::max(xmax, q.x);
    ymin = std::min(ymin, q.y);
    ymax = std::max(ymax, q.y);
  };
  constexpr int kSamples = 256;
  for (int i = 0; i <= kSamples; ++i) {
    const double t = static_cast<double>(i) / kSamples;
    add({xa + t * (xb - xa), ya});
    add({xa + t * (xb - xa), yb});
    add({xa, ya + t * (yb - ya)});
    add({xb, ya + t * (yb - ya)});
  }
  const int n = dom.resolution();
  auto clamp = [n](double v) { return static_cast<int>(std::clamp(v, -1.0, static_cast<double>(n))); };
  return {std::max(0, clamp(std::floor((xmin - dom.x0()) / dx)) - 2),
          std::min(n - 1, clamp(std::floor((xmax - dom.x0()) / dx)) + 2),
          std::max(0, clamp(std::floor((ymin - dom.y0()) / dy)) - 2),
          std::min(n - 1, clamp(std::floor((ymax - dom.y0()) / dy)) + 2)};
}

}  // namespace detail

// Rasterized m(a): cell c is included iff m^{-1}(center of c) falls in an
// included cell of a.
inline GridSet image(const MapSpec& m, const GridSet& a) {
  const Domain& dom = a.domain();
  if (m.is_circle() != dom.is_circle()) throw DimensionError("map and domain dimensions differ");
  GridSet out(dom);
  if (!m.invertible()) throw InvertibilityError("image rasterization needs an invertible map");
  if (dom.is_circle()) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      auto z = m.apply_inverse(dom.cell_center(i));
      if (z && a.contains_point(*z)) out.set(i);
    }
    return out;
  }
  auto src = detail::occupied_box(a);
  if (!src) return out;
  const auto box = detail::image_box(m, dom, *src);
  for (int row = box.row_lo; row <= box.row_hi; ++row) {
    for (int col = box.col_lo; col <= box.col_hi; ++col) {
      auto z = m.apply_inverse(dom.cell_center(col, row));
      if (z && a.contains_point(*z)) out.set(dom.index(col, row));
    }
  }
  return out;
}

// Rasterized m^{-1}(a): cell c is included iff m(center of c) falls in a.
inline GridSet preimage(const MapSpec& m, const GridSet& a) {
  const Domain& dom = a.domain();
  if (m.is_circle() != dom.is_circle()) throw DimensionError("map and domain dimensions differ");
  GridSet out(dom);
  for (std::size_t i = 0; i < out.size(); ++i)
    if (a.contains_point(m(dom.cell_center(i)))) out.set(i);
  return out;
}

// ---- text format ------------------------------------------------------------

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

inline double parse_number(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ValidationError("bad number for " + key + ": '" + v + "'");
  }
}

}  // namespace detail

// One generator per line:
//   affine kappa=0.76 theta=179 anchor=0,0
//   rotation angle=0.6180339887
//   moebius lambda=0.7 pole=0.0
//   perturb base=<0-based line index> amp=0.01 seed=42
//   inverses=true|false
// '#' starts a comment. Any generator line may end with inverse=true, and an
// affine, rotation or moebius line with amp=<a> seed=<s> is perturbed in place.
inline SystemSpec parse_system(std::istream& in) {
  std::vector<MapSpec> gens;
  bool inverses = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    auto tok = detail::split_ws(line);
    if (tok.empty()) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (tok[0].rfind("inverses=", 0) == 0) {
      const std::string v = tok[0].substr(9);
      if (v != "true" && v != "false") throw ValidationError(where + "inverses must be true or false");
      inverses = v == "true";
      continue;
    }
    std::vector<std::pair<std::string, std::string>> kv;
    for (std::size_t i = 1; i < tok.size(); ++i) {
      auto eq = tok[i].find('=');
      if (eq == std::string::npos) throw ValidationError(where + "expected key=value, got '" + tok[i] + "'");
      kv.emplace_back(tok[i].substr(0, eq), tok[i].substr(eq + 1));
    }
    auto get = [&](const std::string& key, std::optional<std::string> def = std::nullopt) -> std::string {
      for (auto& [k, v] : kv)
        if (k == key) return v;
      if (def) return *def;
      throw ValidationError(where + "missing " + key);
    };
    for (auto& [k, v] : kv) {
      static const char* known[] = {"kappa", "theta", "anchor", "angle", "lambda", "pole", "base", "amp", "seed", "inverse"};
      if (std::find_if(std::begin(known), std::end(known), [&](const char* s) { return k == s; }) == std::end(known))
        throw ValidationError(where + "unknown key '" + k + "'");
    }
    std::optional<MapSpec> m;
    try {
      if (tok[0] == "affine") {
        const std::string a = get("anchor", "0,0");
        const auto comma = a.find(',');
        if (comma == std::string::npos) throw ValidationError(where + "anchor must be x,y");
        m = MapSpec::affine_similarity(detail::parse_number("kappa", get("kappa")),
                                       detail::parse_number("theta", get("theta")),
                                       {detail::parse_number("anchor", a.substr(0, comma)),
                                        detail::parse_number("anchor", a.substr(comma + 1))});
      } else if (tok[0] == "rotation") {
        m = MapSpec::circle_rotation(detail::parse_number("angle", get("angle")));
      } else if (tok[0] == "moebius") {
        m = MapSpec::circle_moebius(detail::parse_number("lambda", get("lambda")),
                                    detail::parse_number("pole", get("pole", "0")));
      } else if (tok[0] == "perturb") {
        const double b = detail::parse_number("base", get("base"));
        if (b < 0 || b != std::floor(b) || b >= static_cast<double>(gens.size()))
          throw ValidationError(where + "perturb base must index an earlier generator");
        const double seed = detail::parse_number("seed", get("seed", "0"));
        if (seed < 0 || seed != std::floor(seed)) throw ValidationError(where + "seed must be a non-negative integer");
        m = MapSpec::perturbed(gens[static_cast<std::size_t>(b)], detail::parse_number("amp", get("amp")),
                               static_cast<std::uint64_t>(seed));
      } else {
        throw ValidationError(where + "unknown generator '" + tok[0] + "'");
      }
      if (tok[0] != "perturb") {
        const std::string amp = get("amp", "0");
        if (amp != "0") {
          const double seed = detail::parse_number("seed", get("seed", "0"));
          if (seed < 0 || seed != std::floor(seed)) throw ValidationError(where + "seed must be a non-negative integer");
          m = MapSpec::perturbed(*m, detail::parse_number("amp", amp), static_cast<std::uint64_t>(seed));
        }
      }
    } catch (const MultiplierError& e) {
      throw MultiplierError(where + e.what());
    } catch (const ValidationError& e) {
      const std::string msg = e.what();
      if (msg.rfind("line ", 0) == 0) throw;
      throw ValidationError(where + msg);
    }
    const std::string inv = get("inverse", "false");
    if (inv == "true") {
      m = m->inverse();
    } else if (inv != "false") {
      throw ValidationError(where + "inverse must be true or false");
    }
    gens.push_back(*m);
  }
  if (gens.empty()) throw ValidationError("system file has no generators");
  return SystemSpec(std::move(gens), inverses);
}

inline SystemSpec parse_system(const std::string& text) {
  std::istringstream is(text);
  return parse_system(is);
}

}  // namespace ifsprobe
