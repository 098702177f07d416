#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vorospline/quadratic.hpp"

namespace vorospline {

struct Point2 {
  QuadExt x, y;

  friend Point2 operator+(const Point2& a, const Point2& b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(const Point2& a, const Point2& b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(const QuadExt& c, const Point2& p) { return {c * p.x, c * p.y}; }
  friend bool operator==(const Point2& a, const Point2& b) { return a.x == b.x && a.y == b.y; }
  friend bool operator!=(const Point2& a, const Point2& b) { return !(a == b); }
  // Lexicographic; used only to canonicalize keys, not geometrically.
  friend bool operator<(const Point2& a, const Point2& b) {
    const int cx = (a.x - b.x).sign();
    if (cx != 0) return cx < 0;
    return (a.y - b.y).sign() < 0;
  }
};

inline QuadExt cross(const Point2& a, const Point2& b) { return a.x * b.y - a.y * b.x; }
inline QuadExt cross(const Point2& o, const Point2& a, const Point2& b) {
  return cross(a - o, b - o);
}
inline QuadExt dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }

inline std::string to_string(const Point2& p) {
  return to_string(p.x) + "," + to_string(p.y);
}

/// Closed axis-aligned box; may be degenerate (segment or point).
struct Box {
  QuadExt xmin, ymin, xmax, ymax;

  bool valid() const { return xmin <= xmax && ymin <= ymax; }
  bool degenerate() const { return xmin == xmax || ymin == ymax; }
  bool contains(const Point2& p) const {
    return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
  }
  std::array<Point2, 4> corners() const {
    return {Point2{xmin, ymin}, Point2{xmax, ymin}, Point2{xmax, ymax}, Point2{xmin, ymax}};
  }
  QuadExt width() const { return xmax - xmin; }
  QuadExt height() const { return ymax - ymin; }
};

namespace detail {

// Drops repeated and collinear vertices of a weakly convex CCW chain.
inline std::vector<Point2> clean_ring(std::vector<Point2> v) {
  std::vector<Point2> out;
  for (const Point2& p : v) {
    if (out.empty() || !(out.back() == p)) out.push_back(p);
  }
  while (out.size() > 1 && out.front() == out.back()) out.pop_back();
  if (out.size() < 3) return out;
  std::vector<Point2> slim;
  const size_t n = out.size();
  for (size_t i = 0; i < n; ++i) {
    const Point2& prev = out[(i + n - 1) % n];
    const Point2& cur = out[i];
    const Point2& next = out[(i + 1) % n];
    if (cross(prev, cur, next).sign() != 0) slim.push_back(cur);
  }
  return slim;
}

}  // namespace detail

/// Strictly convex polygon with counterclockwise vertices. Exact throughout.
class ConvexPolygon {
 public:
  explicit ConvexPolygon(std::vector<Point2> vertices) : v_(std::move(vertices)) {
    if (v_.size() < 3) throw std::invalid_argument("ConvexPolygon: needs >= 3 vertices");
    const size_t n = v_.size();
    for (size_t i = 0; i < n; ++i) {
      if (v_[i] == v_[(i + 1) % n])
        throw std::invalid_argument("ConvexPolygon: repeated vertex");
      if (cross(v_[i], v_[(i + 1) % n], v_[(i + 2) % n]).sign() <= 0)
        throw std::invalid_argument("ConvexPolygon: not strictly convex counterclockwise");
    }
  }

  const std::vector<Point2>& vertices() const { return v_; }
  size_t size() const { return v_.size(); }
  const Point2& operator[](size_t i) const { return v_[i % v_.size()]; }

  QuadExt area() const {
    QuadExt twice;
    for (size_t i = 0; i < v_.size(); ++i) twice += cross(v_[i], v_[(i + 1) % v_.size()]);
    return twice / QuadExt(2);
  }

  Point2 centroid() const {
    QuadExt twice_area;
    Point2 acc{QuadExt(0), QuadExt(0)};
    for (size_t i = 0; i < v_.size(); ++i) {
      const QuadExt c = cross(v_[i], v_[(i + 1) % v_.size()]);
      twice_area += c;
      acc = acc + c * (v_[i] + v_[(i + 1) % v_.size()]);
    }
    return (QuadExt(1) / (QuadExt(3) * twice_area)) * acc;
  }

  /// Membership in the closed polygon.
  bool contains(const Point2& p) const {
    for (size_t i = 0; i < v_.size(); ++i)
      if (cross(v_[i], v_[(i + 1) % v_.size()], p).sign() < 0) return false;
    return true;
  }

  /// Membership in the open interior.
  bool contains_strict(const Point2& p) const {
    for (size_t i = 0; i < v_.size(); ++i)
      if (cross(v_[i], v_[(i + 1) % v_.size()], p).sign() <= 0) return false;
    return true;
  }

  Box bounding_box() const {
    Box b{v_[0].x, v_[0].y, v_[0].x, v_[0].y};
    for (const Point2& p : v_) {
      if (p.x < b.xmin) b.xmin = p.x;
      if (p.x > b.xmax) b.xmax = p.x;
      if (p.y < b.ymin) b.ymin = p.y;
      if (p.y > b.ymax) b.ymax = p.y;
    }
    return b;
  }

  ConvexPolygon translated(const Point2& t) const {
    std::vector<Point2> w(v_);
    for (Point2& p : w) p = p + t;
    return ConvexPolygon(std::move(w));
  }

  ConvexPolygon scaled(const QuadExt& s) const {
    std::vector<Point2> w(v_);
    for (Point2& p : w) p = s * p;
    return ConvexPolygon(std::move(w));
  }

  /// Equality up to cyclic rotation of the vertex list.
  friend bool same_polygon(const ConvexPolygon& a, const ConvexPolygon& b) {
    if (a.size() != b.size()) return false;
    const size_t n = a.size();
    for (size_t shift = 0; shift < n; ++shift) {
      bool ok = true;
      for (size_t i = 0; i < n && ok; ++i) ok = a.v_[i] == b.v_[(i + shift) % n];
      if (ok) return true;
    }
    return false;
  }

 private:
  std::vector<Point2> v_;
};

inline ConvexPolygon box_polygon(const Box& b) {
  if (!b.valid() || b.degenerate()) throw std::invalid_argument("box_polygon: degenerate box");
  const auto c = b.corners();
  return ConvexPolygon({c[0], c[1], c[2], c[3]});
}

namespace detail {

// Clips a CCW ring against the closed half-plane left of a->b.
inline std::vector<Point2> clip_halfplane(const std::vector<Point2>& ring, const Point2& a,
                                          const Point2& b) {
  std::vector<Point2> out;
  const size_t n = ring.size();
  if (n == 0) return out;
  const Point2 dir = b - a;
  std::vector<int> side(n);
  for (size_t i = 0; i < n; ++i) side[i] = cross(dir, ring[i] - a).sign();
  for (size_t i = 0; i < n; ++i) {
    const size_t j = (i + 1) % n;
    const Point2 &s = ring[i], &e = ring[j];
    if (side[i] >= 0) out.push_back(s);
    if ((side[i] > 0 && side[j] < 0) || (side[i] < 0 && side[j] > 0)) {
      const QuadExt ds = cross(dir, s - a), de = cross(dir, e - a);
      const QuadExt t = ds / (ds - de);
      out.push_back(s + t * (e - s));
    }
  }
  return out;
}

}  // namespace detail

/// Exact intersection of convex polygons by successive half-plane clipping.
/// Degenerate (area-zero) overlaps yield an empty result.
inline std::optional<ConvexPolygon> clip(const ConvexPolygon& subject,
                                         const ConvexPolygon& clipper) {
  std::vector<Point2> ring = subject.vertices();
  const auto& cv = clipper.vertices();
  for (size_t i = 0; i < cv.size() && !ring.empty(); ++i)
    ring = detail::clip_halfplane(ring, cv[i], cv[(i + 1) % cv.size()]);
  ring = detail::clean_ring(std::move(ring));
  if (ring.size() < 3) return std::nullopt;
  ConvexPolygon poly(std::move(ring));
  if (poly.area().sign() <= 0) return std::nullopt;
  return poly;
}

inline std::optional<ConvexPolygon> clip_to_box(const ConvexPolygon& subject, const Box& box) {
  return clip(subject, box_polygon(box));
}

/// Exact convex difference subject minus clipper as disjoint convex pieces:
/// successive outside-of-half-plane slabs.
inline std::vector<ConvexPolygon> convex_difference(const ConvexPolygon& subject,
                                                    const ConvexPolygon& clipper) {
  std::vector<ConvexPolygon> pieces;
  std::vector<Point2> remaining = subject.vertices();
  const auto& cv = clipper.vertices();
  for (size_t i = 0; i < cv.size() && !remaining.empty(); ++i) {
    const Point2 &a = cv[i], &b = cv[(i + 1) % cv.size()];
    // Part of `remaining` strictly right of a->b is outside the clipper for good.
    std::vector<Point2> outside = detail::clip_halfplane(remaining, b, a);
    outside = detail::clean_ring(std::move(outside));
    if (outside.size() >= 3) {
      ConvexPolygon piece{std::move(outside)};
      if (piece.area().sign() > 0) pieces.push_back(std::move(piece));
    }
    remaining = detail::clip_halfplane(remaining, a, b);
  }
  return pieces;
}

/// True when the closed polygons intersect (shared boundary points count);
/// exact separating-axis test.
inline bool polygons_touch(const std::vector<Point2>& p, const std::vector<Point2>& q) {
  const auto separated_by = [&](const Point2& axis) {
    bool first = true;
    QuadExt pmin, pmax, qmin, qmax;
    for (const Point2& v : p) {
      const QuadExt proj = dot(axis, v);
      if (first || proj < pmin) pmin = proj;
      if (first || proj > pmax) pmax = proj;
      first = false;
    }
    first = true;
    for (const Point2& v : q) {
      const QuadExt proj = dot(axis, v);
      if (first || proj < qmin) qmin = proj;
      if (first || proj > qmax) qmax = proj;
      first = false;
    }
    return pmax < qmin || qmax < pmin;
  };
  const auto edge_axes_separate = [&](const std::vector<Point2>& ring) {
    for (size_t i = 0; i < ring.size(); ++i) {
      const Point2 e = ring[(i + 1) % ring.size()] - ring[i];
      if (separated_by(Point2{-e.y, e.x})) return true;
    }
    return false;
  };
  return !edge_axes_separate(p) && !edge_axes_separate(q);
}

inline bool box_touches(const Box& box, const ConvexPolygon& poly) {
  const auto c = box.corners();
  return polygons_touch(std::vector<Point2>(c.begin(), c.end()), poly.vertices());
}

/// Parameter interval [t0, t1] of the closed segment p + t (q - p), t in [0,1],
/// inside the closed polygon; empty optional if no overlap.
inline std::optional<std::pair<QuadExt, QuadExt>> clip_segment(const Point2& p, const Point2& q,
                                                               const ConvexPolygon& poly) {
  QuadExt t0(0), t1(1);
  const auto& v = poly.vertices();
  for (size_t i = 0; i < v.size(); ++i) {
    const Point2 dir = v[(i + 1) % v.size()] - v[i];
    const QuadExt dp = cross(dir, p - v[i]);
    const QuadExt dq = cross(dir, q - v[i]);
    const QuadExt denom = dp - dq;  // positive when the segment heads out of the half-plane
    if (denom.sign() == 0) {
      if (dp.sign() < 0) return std::nullopt;  // parallel and outside
      continue;
    }
    const QuadExt t = dp / denom;
    if (denom.sign() > 0) {
      if (t < t1) t1 = t;
    } else {
      if (t > t0) t0 = t;
    }
    if (t1 < t0) return std::nullopt;
  }
  return std::make_pair(t0, t1);
}

inline bool collinear(const Point2& a, const Point2& b, const Point2& c) {
  return cross(a, b, c).sign() == 0;
}

}  // namespace vorospline
