#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "vorospline/tessellation.hpp"

namespace vorospline {

/// Double-precision snapshot of an exact convex polygon.
class DPolygon {
 public:
  DPolygon() = default;
  explicit DPolygon(const ConvexPolygon& poly) {
    for (const Point2& v : poly.vertices()) {
      x_.push_back(v.x.to_double());
      y_.push_back(v.y.to_double());
    }
  }

  size_t size() const { return x_.size(); }
  double x(size_t i) const { return x_[i % size()]; }
  double y(size_t i) const { return y_[i % size()]; }

  double area() const {
    double twice = 0;
    for (size_t i = 0; i < size(); ++i) {
      const size_t j = (i + 1) % size();
      twice += x_[i] * y_[j] - x_[j] * y_[i];
    }
    return 0.5 * twice;
  }

  std::pair<double, double> centroid() const {
    double cx = 0, cy = 0, twice = 0;
    for (size_t i = 0; i < size(); ++i) {
      const size_t j = (i + 1) % size();
      const double c = x_[i] * y_[j] - x_[j] * y_[i];
      twice += c;
      cx += (x_[i] + x_[j]) * c;
      cy += (y_[i] + y_[j]) * c;
    }
    return {cx / (3 * twice), cy / (3 * twice)};
  }

  bool contains(double px, double py) const {
    for (size_t i = 0; i < size(); ++i) {
      const size_t j = (i + 1) % size();
      if ((x_[j] - x_[i]) * (py - y_[i]) - (y_[j] - y_[i]) * (px - x_[i]) < 0) return false;
    }
    return true;
  }

  /// Signed distance to the boundary: negative inside, positive outside.
  double signed_distance(double px, double py) const {
    double best = std::numeric_limits<double>::max();
    bool inside = true;
    double inner = -std::numeric_limits<double>::max();
    for (size_t i = 0; i < size(); ++i) {
      const size_t j = (i + 1) % size();
      const double ex = x_[j] - x_[i], ey = y_[j] - y_[i];
      const double len = std::hypot(ex, ey);
      const double side = (ex * (py - y_[i]) - ey * (px - x_[i])) / len;
      if (side < 0) inside = false;
      inner = std::max(inner, -side);  // = max over edges of signed line distance
      // Distance to the closed segment, for the outside case.
      const double t = std::clamp(((px - x_[i]) * ex + (py - y_[i]) * ey) / (len * len), 0.0, 1.0);
      const double qx = x_[i] + t * ex - px, qy = y_[i] + t * ey - py;
      best = std::min(best, std::hypot(qx, qy));
    }
    // Inside a convex polygon the closest boundary point lies on an edge line.
    return inside ? inner : best;
  }

  /// Radius of the largest centered circle: distance from centroid to the
  /// nearest edge (the inradius for the centrally symmetric cells used here).
  double inradius() const {
    const auto [cx, cy] = centroid();
    return -signed_distance(cx, cy);
  }

 private:
  std::vector<double> x_, y_;
};

/// C^1 ramp of an indicator function: 1 inside the polygon beyond the band,
/// 0 outside it, and a cubic Hermite blend across the band of half-width
/// epsilon around the boundary. epsilon == 0 degenerates to the sharp
/// indicator (value 1/2 exactly on the boundary).
class SmoothedIndicator {
 public:
  SmoothedIndicator(const ConvexPolygon& polygon, double epsilon)
      : poly_(polygon), eps_(epsilon) {
    if (epsilon < 0) throw std::invalid_argument("SmoothedIndicator: negative epsilon");
    if (epsilon >= poly_.inradius())
      throw std::invalid_argument("SmoothedIndicator: epsilon must stay below the inradius");
  }

  double epsilon() const { return eps_; }
  const DPolygon& polygon() const { return poly_; }

  double operator()(double x, double y) const {
    const double d = poly_.signed_distance(x, y);
    if (d < -eps_) return 1.0;
    if (d > eps_) return 0.0;
    if (eps_ == 0.0) return 0.5;
    const double u = (d + eps_) / (2 * eps_);
    return 1.0 - u * u * (3 - 2 * u);
  }

  /// Unsigned distance to the smoothing band (0 inside the band); used by the
  /// quadrature to decide where the integrand is flat.
  double band_distance(double x, double y) const {
    const double d = std::abs(poly_.signed_distance(x, y));
    return d <= eps_ ? 0.0 : d - eps_;
  }

 private:
  DPolygon poly_;
  double eps_;
};

/// Piecewise-constant field over a tessellation within a window.
struct PiecewiseConstant {
  Tessellation tess;
  Box window;
  std::map<CellId, double> coeffs;
};

namespace detail {

struct Tri {
  double ax, ay, bx, by, cx, cy;

  double area() const { return 0.5 * ((bx - ax) * (cy - ay) - (by - ay) * (cx - ax)); }
  double radius() const {
    const double e1 = std::hypot(bx - ax, by - ay);
    const double e2 = std::hypot(cx - bx, cy - by);
    const double e3 = std::hypot(ax - cx, ay - cy);
    return std::max({e1, e2, e3});
  }
};

// 4-point Gauss-Legendre on [0,1].
constexpr std::array<double, 4> kGaussX{0.06943184420297371, 0.33000947820757187,
                                        0.6699905217924281, 0.9305681557970262};
constexpr std::array<double, 4> kGaussW{0.17392742256872692, 0.32607257743127305,
                                        0.32607257743127305, 0.17392742256872692};

// 16-point tensor rule mapped onto the triangle (Duffy transform).
template <class F>
double gauss16_triangle(const F& f, const Tri& t) {
  const double a2 = 2 * t.area();
  double sum = 0;
  for (size_t iu = 0; iu < 4; ++iu) {
    const double u = kGaussX[iu];
    for (size_t iv = 0; iv < 4; ++iv) {
      const double v = kGaussX[iv];
      const double px = t.ax + u * ((t.bx - t.ax) + v * (t.cx - t.bx));
      const double py = t.ay + u * ((t.by - t.ay) + v * (t.cy - t.by));
      sum += kGaussW[iu] * kGaussW[iv] * u * f(px, py);
    }
  }
  return a2 * sum;
}

// Adaptive refinement toward the smoothing band. Wherever the band is
// provably outside the triangle the integrand is constant and integrated
// exactly; elsewhere the triangle is split until depth runs out, then handled
// by the 16-point rule.
template <class F>
double integrate_triangle(const F& f, const SmoothedIndicator& band, const Tri& t, int depth) {
  const double r = t.radius();
  const double d1 = band.band_distance(t.ax, t.ay);
  if (d1 > r) {  // the band cannot reach this triangle
    const double gx = (t.ax + t.bx + t.cx) / 3, gy = (t.ay + t.by + t.cy) / 3;
    return t.area() * f(gx, gy);
  }
  if (depth <= 0) return gauss16_triangle(f, t);
  const double mabx = 0.5 * (t.ax + t.bx), maby = 0.5 * (t.ay + t.by);
  const double mbcx = 0.5 * (t.bx + t.cx), mbcy = 0.5 * (t.by + t.cy);
  const double mcax = 0.5 * (t.cx + t.ax), mcay = 0.5 * (t.cy + t.ay);
  return integrate_triangle(f, band, Tri{t.ax, t.ay, mabx, maby, mcax, mcay}, depth - 1) +
         integrate_triangle(f, band, Tri{mabx, maby, t.bx, t.by, mbcx, mbcy}, depth - 1) +
         integrate_triangle(f, band, Tri{mcax, mcay, mbcx, mbcy, t.cx, t.cy}, depth - 1) +
         integrate_triangle(f, band, Tri{mabx, maby, mbcx, mbcy, mcax, mcay}, depth - 1);
}

template <class F>
double integrate_polygon(const F& f, const SmoothedIndicator& band, const DPolygon& poly,
                         int depth) {
  const auto [cx, cy] = poly.centroid();
  double sum = 0;
  for (size_t i = 0; i < poly.size(); ++i)
    sum += integrate_triangle(
        f, band, Tri{cx, cy, poly.x(i), poly.y(i), poly.x(i + 1), poly.y(i + 1)}, depth);
  return sum;
}

}  // namespace detail

/// L2-optimal piecewise constant: per-cell mean of f over cell-within-window,
/// by adaptive 16-point Gauss quadrature on a centroid triangulation refined
/// `depth` times toward the smoothing band.
inline PiecewiseConstant l2_project(const SmoothedIndicator& f, const Tessellation& tess,
                                    const Box& window, int depth) {
  PiecewiseConstant out{tess, window, {}};
  for (const auto& [id, poly] : tess.cells_in_window(window)) {
    const auto part = clip_to_box(poly, window);
    if (!part) continue;
    const DPolygon dp(*part);
    const double mass = detail::integrate_polygon(f, f, dp, depth);
    out.coeffs.emplace(id, mass / dp.area());
  }
  return out;
}

/// L2 distance between f and a piecewise constant over the window, using the
/// same quadrature scheme and refinement depth.
inline double l2_error(const SmoothedIndicator& f, const PiecewiseConstant& g, const Box& window,
                       int depth) {
  double total = 0;
  for (const auto& [id, poly] : g.tess.cells_in_window(window)) {
    const auto part = clip_to_box(poly, window);
    if (!part) continue;
    const auto it = g.coeffs.find(id);
    const double c = it == g.coeffs.end() ? 0.0 : it->second;
    const DPolygon dp(*part);
    total += detail::integrate_polygon(
        [&](double x, double y) {
          const double d = f(x, y) - c;
          return d * d;
        },
        f, dp, depth);
  }
  return std::sqrt(std::max(total, 0.0));
}

struct StableError {
  double value = 0;
  int depth = 0;  // refinement depth that met the stability rule
};

/// Runs the projection-and-error pipeline at increasing quadrature depth until
/// doubling the resolution moves the result by less than `rel_tol`.
inline StableError stable_l2_error(const SmoothedIndicator& f, const Tessellation& tess,
                                   const Box& window, double rel_tol = 0.01, int min_depth = 4,
                                   int max_depth = 12) {
  double prev = -1;
  for (int depth = min_depth; depth <= max_depth; ++depth) {
    const PiecewiseConstant pc = l2_project(f, tess, window, depth);
    const double err = l2_error(f, pc, window, depth);
    if (prev >= 0 && std::abs(err - prev) <= rel_tol * std::max(err, 1e-30))
      return {err, depth};
    prev = err;
  }
  return {prev, max_depth};
}

}  // namespace vorospline
