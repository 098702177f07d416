#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vorospline/geometry.hpp"

namespace vorospline {

enum class TessKind { square, triangular, hexagonal, trihexagonal };

inline std::string kind_name(TessKind k) {
  switch (k) {
    case TessKind::square: return "square";
    case TessKind::triangular: return "triangular";
    case TessKind::hexagonal: return "hexagonal";
    case TessKind::trihexagonal: return "trihexagonal";
  }
  return "?";
}

inline TessKind parse_kind(const std::string& s) {
  if (s == "square") return TessKind::square;
  if (s == "triangular") return TessKind::triangular;
  if (s == "hexagonal") return TessKind::hexagonal;
  if (s == "trihexagonal") return TessKind::trihexagonal;
  throw std::invalid_argument("unknown tessellation kind '" + s + "'");
}

/// Cell address: translate index pair plus prototype index.
struct CellId {
  long long i = 0, j = 0;
  int proto = 0;

  friend bool operator==(const CellId& a, const CellId& b) {
    return a.i == b.i && a.j == b.j && a.proto == b.proto;
  }
  friend bool operator<(const CellId& a, const CellId& b) {
    if (a.i != b.i) return a.i < b.i;
    if (a.j != b.j) return a.j < b.j;
    return a.proto < b.proto;
  }
};

inline std::string to_string(const CellId& id) {
  return "t(" + std::to_string(id.i) + "," + std::to_string(id.j) + "):p" +
         std::to_string(id.proto);
}

/// Periodic tessellation of the plane: prototype polygons repeated over a
/// two-vector translation lattice, then uniformly scaled and shifted.
/// All coordinates live in Q(sqrt(3)).
class Tessellation {
 public:
  Tessellation(TessKind kind, const Rational& scale, Point2 shift)
      : kind_(kind), scale_(scale), shift_(std::move(shift)) {
    if (scale <= 0) throw std::invalid_argument("Tessellation: scale must be positive");
    const QuadExt s3(0, 1, 3);
    const QuadExt half(Rational(1, 2));
    const QuadExt half_s3(0, Rational(1, 2), 3);
    switch (kind) {
      case TessKind::square:
        protos_.push_back(ConvexPolygon({{QuadExt(0), QuadExt(0)},
                                         {QuadExt(1), QuadExt(0)},
                                         {QuadExt(1), QuadExt(1)},
                                         {QuadExt(0), QuadExt(1)}}));
        b1_ = {QuadExt(1), QuadExt(0)};
        b2_ = {QuadExt(0), QuadExt(1)};
        break;
      case TessKind::triangular:
        protos_.push_back(ConvexPolygon(
            {{QuadExt(0), QuadExt(0)}, {QuadExt(1), QuadExt(0)}, {half, half_s3}}));
        protos_.push_back(ConvexPolygon(
            {{QuadExt(1), QuadExt(0)}, {QuadExt(3) * half, half_s3}, {half, half_s3}}));
        b1_ = {QuadExt(1), QuadExt(0)};
        b2_ = {half, half_s3};
        break;
      case TessKind::hexagonal:
        protos_.push_back(ConvexPolygon({{QuadExt(2), QuadExt(0)},
                                         {QuadExt(1), s3},
                                         {QuadExt(-1), s3},
                                         {QuadExt(-2), QuadExt(0)},
                                         {QuadExt(-1), -s3},
                                         {QuadExt(1), -s3}}));
        b1_ = {QuadExt(3), s3};
        b2_ = {QuadExt(0), QuadExt(2) * s3};
        break;
      case TessKind::trihexagonal:
        // 3.6.3.6: one edge-1 hexagon and the two triangles that pad its
        // fundamental domain.
        protos_.push_back(ConvexPolygon({{QuadExt(1), QuadExt(0)},
                                         {half, half_s3},
                                         {-half, half_s3},
                                         {QuadExt(-1), QuadExt(0)},
                                         {-half, -half_s3},
                                         {half, -half_s3}}));
        protos_.push_back(ConvexPolygon(
            {{QuadExt(1), QuadExt(0)}, {QuadExt(3) * half, half_s3}, {half, half_s3}}));
        protos_.push_back(ConvexPolygon(
            {{QuadExt(1), QuadExt(0)}, {half, -half_s3}, {QuadExt(3) * half, -half_s3}}));
        b1_ = {QuadExt(2), QuadExt(0)};
        b2_ = {QuadExt(1), s3};
        break;
    }
    // Inverse of the unit basis, for mapping points to lattice coordinates.
    const QuadExt det = cross(b1_, b2_);
    inv00_ = b2_.y / det;
    inv01_ = QuadExt(0) - b2_.x / det;
    inv10_ = QuadExt(0) - b1_.y / det;
    inv11_ = b1_.x / det;
  }

  TessKind kind() const { return kind_; }
  const Rational& scale() const { return scale_; }
  const Point2& shift() const { return shift_; }
  size_t prototype_count() const { return protos_.size(); }
  const ConvexPolygon& prototype(int p) const { return protos_.at(p); }

  /// Scaled translation basis.
  std::pair<Point2, Point2> basis() const {
    const QuadExt s(scale_);
    return {s * b1_, s * b2_};
  }

  /// Copy with an extra translation applied on top of the current shift.
  Tessellation translated(const Point2& t) const {
    Tessellation copy(*this);
    copy.shift_ = copy.shift_ + t;
    return copy;
  }

  /// Largest axis extent of a prototype's bounding box, scaled; rational for
  /// every kind, and the unit used for window radii.
  Rational diameter() const {
    QuadExt best(0);
    for (const auto& p : protos_) {
      const Box b = p.bounding_box();
      if (b.width() > best) best = b.width();
      if (b.height() > best) best = b.height();
    }
    if (!best.is_rational()) throw std::logic_error("diameter: expected rational extent");
    return best.rational_part() * scale_;
  }

  ConvexPolygon cell(const CellId& id) const {
    const Point2 t{QuadExt(id.i) * b1_.x + QuadExt(id.j) * b2_.x,
                   QuadExt(id.i) * b1_.y + QuadExt(id.j) * b2_.y};
    std::vector<Point2> v = protos_.at(id.proto).vertices();
    const QuadExt s(scale_);
    for (Point2& p : v) p = s * (p + t) + shift_;
    return ConvexPolygon(std::move(v));
  }

  /// All cells whose closure meets the (possibly degenerate) closed box, in
  /// deterministic (i, j, proto) order.
  std::vector<std::pair<CellId, ConvexPolygon>> cells_in_window(const Box& w) const {
    if (!w.valid()) throw std::invalid_argument("cells_in_window: empty window");
    // Window corners in unit lattice coordinates.
    const QuadExt s(scale_);
    long long imin = 0, imax = 0, jmin = 0, jmax = 0;
    bool first = true;
    for (const Point2& c : w.corners()) {
      const Point2 u{(c.x - shift_.x) / s, (c.y - shift_.y) / s};
      const QuadExt ui = inv00_ * u.x + inv01_ * u.y;
      const QuadExt uj = inv10_ * u.x + inv11_ * u.y;
      const long long fi = quad_floor(ui), fj = quad_floor(uj);
      if (first || fi < imin) imin = fi;
      if (first || fi > imax) imax = fi;
      if (first || fj < jmin) jmin = fj;
      if (first || fj > jmax) jmax = fj;
      first = false;
    }
    // Prototype vertices stay within 2 lattice units of their translate.
    constexpr long long kMargin = 2;
    std::vector<std::pair<CellId, ConvexPolygon>> out;
    for (long long i = imin - kMargin; i <= imax + kMargin; ++i)
      for (long long j = jmin - kMargin; j <= jmax + kMargin; ++j)
        for (int p = 0; p < static_cast<int>(protos_.size()); ++p) {
          CellId id{i, j, p};
          ConvexPolygon poly = cell(id);
          if (box_touches(w, poly)) out.emplace_back(id, std::move(poly));
        }
    return out;
  }

  /// Cell whose open interior contains p, if any (boundary points have none).
  std::optional<CellId> cell_containing_strict(const Point2& p) const {
    const QuadExt s(scale_);
    const Point2 u{(p.x - shift_.x) / s, (p.y - shift_.y) / s};
    const QuadExt ui = inv00_ * u.x + inv01_ * u.y;
    const QuadExt uj = inv10_ * u.x + inv11_ * u.y;
    // Prototype extents stay within one lattice unit of their translate.
    const long long ci = quad_floor(ui), cj = quad_floor(uj);
    for (long long i = ci - 1; i <= ci + 1; ++i)
      for (long long j = cj - 1; j <= cj + 1; ++j)
        for (int q = 0; q < static_cast<int>(protos_.size()); ++q) {
          const CellId id{i, j, q};
          if (cell(id).contains_strict(p)) return id;
        }
    return std::nullopt;
  }

 private:
  TessKind kind_;
  Rational scale_;
  Point2 shift_;
  std::vector<ConvexPolygon> protos_;
  Point2 b1_{QuadExt(1), QuadExt(0)}, b2_{QuadExt(0), QuadExt(1)};  // unit-scale basis
  QuadExt inv00_, inv01_, inv10_, inv11_;
};

inline Tessellation make_tessellation(TessKind kind, const Rational& scale = 1,
                                      const Point2& shift = {QuadExt(0), QuadExt(0)}) {
  return Tessellation(kind, scale, shift);
}

/// Window area minus the exact sum of cell-clip areas; zero iff the cells
/// tile the window.
inline QuadExt tiling_defect(const Tessellation& tess, const Box& w) {
  QuadExt covered;
  for (const auto& [id, poly] : tess.cells_in_window(w)) {
    if (const auto piece = clip_to_box(poly, w)) covered += piece->area();
  }
  return w.width() * w.height() - covered;
}

struct StraddleWitness {
  Point2 edge_a, edge_b;  // the coarse facet that fails
  CellId fine_cell;       // a fine cell whose interior crosses it
};

struct StraddleReport {
  bool covered = false;
  std::optional<StraddleWitness> witness;
};

namespace detail {

struct EdgeKey {
  Point2 a, b;
  friend bool operator<(const EdgeKey& x, const EdgeKey& y) {
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  }
};

inline EdgeKey canonical_edge(const Point2& p, const Point2& q) {
  return p < q ? EdgeKey{p, q} : EdgeKey{q, p};
}

// Fraction of [0,1] along p->q covered by the collinear segments; returns the
// leftmost gap start when coverage fails.
inline bool interval_union_covers(std::vector<std::pair<QuadExt, QuadExt>> iv, QuadExt* gap_at) {
  std::sort(iv.begin(), iv.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first < y.first;
    return x.second < y.second;
  });
  QuadExt covered_to(0);
  for (const auto& [lo, hi] : iv) {
    if (lo > covered_to) break;
    if (hi > covered_to) covered_to = hi;
    if (covered_to >= QuadExt(1)) return true;
  }
  if (covered_to >= QuadExt(1)) return true;
  if (gap_at) *gap_at = covered_to;
  return false;
}

// Edge list with cached double coordinates. The float test only prunes
// clearly non-collinear edges; decisions stay exact.
class EdgeIndex {
 public:
  explicit EdgeIndex(const std::vector<std::pair<CellId, ConvexPolygon>>& cells) {
    for (const auto& [id, poly] : cells) {
      const auto& v = poly.vertices();
      for (size_t k = 0; k < v.size(); ++k) {
        const Point2 &a = v[k], &b = v[(k + 1) % v.size()];
        entries_.push_back(
            {a, b, a.x.to_double(), a.y.to_double(), b.x.to_double(), b.y.to_double()});
      }
    }
  }

  // Collinear overlaps of indexed edges with segment p->q as parameter
  // intervals over [0,1].
  std::vector<std::pair<QuadExt, QuadExt>> collinear_intervals(const Point2& p,
                                                               const Point2& q) const {
    std::vector<std::pair<QuadExt, QuadExt>> iv;
    const Point2 dir = q - p;
    const QuadExt len2 = dot(dir, dir);
    const double px = p.x.to_double(), py = p.y.to_double();
    const double dx = q.x.to_double() - px, dy = q.y.to_double() - py;
    const double slack = 1e-6 * (1.0 + std::abs(dx) + std::abs(dy));
    for (const Entry& e : entries_) {
      const double ca = dx * (e.ay - py) - dy * (e.ax - px);
      const double cb = dx * (e.by - py) - dy * (e.bx - px);
      if (std::abs(ca) > slack * (1.0 + std::abs(e.ax) + std::abs(e.ay)) ||
          std::abs(cb) > slack * (1.0 + std::abs(e.bx) + std::abs(e.by)))
        continue;
      if (!collinear(p, q, e.a) || !collinear(p, q, e.b)) continue;
      QuadExt ta = dot(e.a - p, dir) / len2;
      QuadExt tb = dot(e.b - p, dir) / len2;
      if (tb < ta) std::swap(ta, tb);
      if (tb.sign() < 0 || ta > QuadExt(1)) continue;
      if (ta.sign() < 0) ta = QuadExt(0);
      if (tb > QuadExt(1)) tb = QuadExt(1);
      if (ta < tb) iv.emplace_back(ta, tb);
    }
    return iv;
  }

 private:
  struct Entry {
    Point2 a, b;
    double ax, ay, bx, by;
  };
  std::vector<Entry> entries_;
};

}  // namespace detail

/// Decides whether every coarse facet inside the window is a union of fine
/// edges; otherwise reports a fine cell whose interior crosses a coarse facet.
/// A facet counts as inside the window when its midpoint lies in the closed
/// window. The window must contain at least one full coarse cell.
inline StraddleReport straddle_test(const Tessellation& coarse, const Tessellation& fine,
                                    const Box& window) {
  const auto coarse_cells = coarse.cells_in_window(window);
  bool has_full_cell = false;
  for (const auto& [id, poly] : coarse_cells) {
    bool inside = true;
    for (const Point2& v : poly.vertices()) inside = inside && window.contains(v);
    if (inside) {
      has_full_cell = true;
      break;
    }
  }
  if (!has_full_cell)
    throw std::invalid_argument("straddle_test: window too small to contain a full coarse cell");

  std::map<detail::EdgeKey, bool> edges;
  const QuadExt half(Rational(1, 2));
  for (const auto& [id, poly] : coarse_cells) {
    const auto& v = poly.vertices();
    for (size_t k = 0; k < v.size(); ++k) {
      const Point2 &a = v[k], &b = v[(k + 1) % v.size()];
      const Point2 mid = half * (a + b);
      if (window.contains(mid)) edges.emplace(detail::canonical_edge(a, b), true);
    }
  }

  // Fine cells once, over a window padded by one fine diameter.
  const QuadExt pad{fine.diameter()};
  const Box padded{window.xmin - pad, window.ymin - pad, window.xmax + pad, window.ymax + pad};
  const auto fine_cells = fine.cells_in_window(padded);
  const detail::EdgeIndex fine_edges(fine_cells);

  StraddleReport report;
  report.covered = true;
  for (const auto& [key, unused] : edges) {
    const Point2 &p = key.a, &q = key.b;
    auto iv = fine_edges.collinear_intervals(p, q);
    if (detail::interval_union_covers(std::move(iv), nullptr)) continue;

    report.covered = false;
    // A fine cell whose open interior meets the open facet is the witness.
    for (const auto& [id, poly] : fine_cells) {
      const auto t = clip_segment(p, q, poly);
      if (!t) continue;
      if (!(t->first < t->second)) continue;
      const QuadExt tm = half * (t->first + t->second);
      const Point2 x = p + tm * (q - p);
      if (poly.contains_strict(x)) {
        report.witness = StraddleWitness{p, q, id};
        return report;
      }
    }
    // Unreachable for exact inputs: a gap implies a strict crossing.
    throw std::logic_error("straddle_test: coverage gap without a witness cell");
  }
  return report;
}

/// True when the whole line through the given facet is a union of tessellation
/// edges. Checks one translation period along the line, which suffices by
/// lattice periodicity. The segment must be an edge of some cell.
inline bool line_containment_test(const Tessellation& tess, const Point2& p, const Point2& q) {
  // Validate that (p, q) is a facet.
  const QuadExt half(Rational(1, 2));
  const Point2 mid = half * (p + q);
  const Box probe{mid.x, mid.y, mid.x, mid.y};
  bool is_facet = false;
  for (const auto& [id, poly] : tess.cells_in_window(probe)) {
    const auto& v = poly.vertices();
    for (size_t k = 0; k < v.size() && !is_facet; ++k) {
      const auto key = detail::canonical_edge(v[k], v[(k + 1) % v.size()]);
      const auto want = detail::canonical_edge(p, q);
      is_facet = key.a == want.a && key.b == want.b;
    }
    if (is_facet) break;
  }
  if (!is_facet) throw std::invalid_argument("line_containment_test: not a tessellation facet");

  // Shortest lattice translation parallel to the facet line.
  const auto [b1, b2] = tess.basis();
  const Point2 dir = q - p;
  std::optional<Point2> period;
  for (int radius = 1; radius <= 8 && !period; ++radius)
    for (int i = -radius; i <= radius && !period; ++i)
      for (int j = -radius; j <= radius && !period; ++j) {
        if (std::max(std::abs(i), std::abs(j)) != radius) continue;
        const Point2 t = QuadExt(i) * b1 + QuadExt(j) * b2;
        if (cross(t, dir).sign() == 0) period = t;
      }
  if (!period)
    throw std::invalid_argument("line_containment_test: facet direction is not a lattice direction");

  const Point2 end = p + *period;
  Box bb{p.x, p.y, p.x, p.y};
  if (end.x < bb.xmin) bb.xmin = end.x;
  if (end.x > bb.xmax) bb.xmax = end.x;
  if (end.y < bb.ymin) bb.ymin = end.y;
  if (end.y > bb.ymax) bb.ymax = end.y;
  const QuadExt pad{tess.diameter()};
  const Box padded{bb.xmin - pad, bb.ymin - pad, bb.xmax + pad, bb.ymax + pad};
  const detail::EdgeIndex edges_index(tess.cells_in_window(padded));
  auto iv = edges_index.collinear_intervals(p, end);
  return detail::interval_union_covers(std::move(iv), nullptr);
}

}  // namespace vorospline
