#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "vorospline/metrics.hpp"

namespace vorospline {

namespace detail {

// Iterative radix-2 FFT; n must be a power of two.
inline void fft_inplace(std::vector<std::complex<double>>& a, size_t offset, size_t stride,
                        size_t n, bool inverse) {
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[offset + i * stride], a[offset + j * stride]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * M_PI / static_cast<double>(len);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (size_t k = 0; k < len / 2; ++k) {
        auto& lo = a[offset + (i + k) * stride];
        auto& hi = a[offset + (i + k + len / 2) * stride];
        const std::complex<double> t = hi * w;
        hi = lo - t;
        lo += t;
        w *= wl;
      }
    }
  }
}

inline void fft2d(std::vector<std::complex<double>>& a, size_t w, size_t h, bool inverse) {
  for (size_t row = 0; row < h; ++row) fft_inplace(a, row * w, 1, w, inverse);
  for (size_t col = 0; col < w; ++col) fft_inplace(a, col, w, h, inverse);
  if (inverse) {
    const double norm = 1.0 / static_cast<double>(w * h);
    for (auto& z : a) z *= norm;
  }
}

inline size_t next_pow2(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace detail

/// Row-major sample array over lattice-aligned grid indices.
struct SampleGrid {
  int u0 = 0, v0 = 0;  // index of val[0]
  int w = 0, h = 0;
  std::vector<double> val;

  double at(int u, int v) const {
    const int iu = u - u0, iv = v - v0;
    if (iu < 0 || iu >= w || iv < 0 || iv >= h) return 0.0;
    return val[static_cast<size_t>(iv) * w + iu];
  }
};

/// Samples of the m-fold self-convolution of a prototype cell indicator.
///
/// Sampling happens on the lattice-aligned grid x = B*((u+1/2, v+1/2)/N) +
/// shift with N samples per basis period, so lattice shifts are exact integer
/// index shifts. Each convolution is normalized by (area element / cell
/// area), making the kernel unit-integral: shift sums converge to 1.
class SampledSpline {
 public:
  SampledSpline(TessKind kind, int m, int resolution, const Rational& scale = 1)
      : m_(m), resolution_(resolution), tess_(kind, scale, {QuadExt(0), QuadExt(0)}) {
    if (m < 0) throw std::invalid_argument("SampledSpline: negative convolution order");
    if (resolution < 64)
      throw std::invalid_argument("SampledSpline: resolution too coarse (need >= 64)");
    const auto [b1, b2] = tess_.basis();
    b1x_ = b1.x.to_double();
    b1y_ = b1.y.to_double();
    b2x_ = b2.x.to_double();
    b2y_ = b2.y.to_double();
    sx_ = tess_.shift().x.to_double();
    sy_ = tess_.shift().y.to_double();
    area_element_ = std::abs(b1x_ * b2y_ - b1y_ * b2x_) /
                    (static_cast<double>(resolution) * resolution);

    for (size_t p = 0; p < tess_.prototype_count(); ++p)
      proto_.push_back(convolved_prototype(tess_.cell({0, 0, static_cast<int>(p)})));
  }

  int order() const { return m_; }
  int resolution() const { return resolution_; }
  const Tessellation& tess() const { return tess_; }
  double area_element() const { return area_element_; }
  size_t prototype_count() const { return proto_.size(); }
  const SampleGrid& grid(size_t p) const { return proto_.at(p); }

  /// Real-space position of a sample of the convolved grids. Each discrete
  /// convolution of half-offset samples adds half a pixel of alignment.
  std::pair<double, double> grid_point(int u, int v) const {
    const double off = 0.5 * (m_ + 1);
    const double gu = (u + off) / resolution_, gv = (v + off) / resolution_;
    return {b1x_ * gu + b2x_ * gv + sx_, b1y_ * gu + b2y_ * gv + sy_};
  }

  /// Sum over all lattice shifts of all prototypes at one grid point.
  double shift_sum(int u, int v) const {
    double total = 0;
    const int n = resolution_;
    for (size_t p = 0; p < proto_.size(); ++p) {
      const SampleGrid& g = proto_[p];
      const int imin = static_cast<int>(std::floor(double(u - g.u0 - g.w + 1) / n));
      const int imax = static_cast<int>(std::floor(double(u - g.u0) / n));
      const int jmin = static_cast<int>(std::floor(double(v - g.v0 - g.h + 1) / n));
      const int jmax = static_cast<int>(std::floor(double(v - g.v0) / n));
      for (int i = imin; i <= imax; ++i)
        for (int j = jmin; j <= jmax; ++j) total += g.at(u - i * n, v - j * n);
    }
    return total;
  }

 private:
  SampleGrid rasterize(const ConvexPolygon& cell) const {
    const DPolygon dp(cell);
    // Index bounds from the double lattice coordinates of the bbox corners.
    const Box bb = cell.bounding_box();
    const double det = b1x_ * b2y_ - b1y_ * b2x_;
    double umin = 1e300, umax = -1e300, vmin = 1e300, vmax = -1e300;
    for (const Point2& c : bb.corners()) {
      const double px = c.x.to_double() - sx_, py = c.y.to_double() - sy_;
      const double lu = (px * b2y_ - py * b2x_) / det;
      const double lv = (py * b1x_ - px * b1y_) / det;
      umin = std::min(umin, lu);
      umax = std::max(umax, lu);
      vmin = std::min(vmin, lv);
      vmax = std::max(vmax, lv);
    }
    SampleGrid g;
    g.u0 = static_cast<int>(std::floor(umin * resolution_)) - 2;
    g.v0 = static_cast<int>(std::floor(vmin * resolution_)) - 2;
    g.w = static_cast<int>(std::ceil(umax * resolution_)) + 2 - g.u0 + 1;
    g.h = static_cast<int>(std::ceil(vmax * resolution_)) + 2 - g.v0 + 1;
    g.val.assign(static_cast<size_t>(g.w) * g.h, 0.0);
    for (int v = 0; v < g.h; ++v)
      for (int u = 0; u < g.w; ++u) {
        const double gu = (g.u0 + u + 0.5) / resolution_, gv = (g.v0 + v + 0.5) / resolution_;
        const double px = b1x_ * gu + b2x_ * gv + sx_;
        const double py = b1y_ * gu + b2y_ * gv + sy_;
        if (dp.contains(px, py)) g.val[static_cast<size_t>(v) * g.w + u] = 1.0;
      }
    return g;
  }

  // chi convolved with its unit-integral copy m times, via one padded FFT.
  SampleGrid convolved_prototype(const ConvexPolygon& cell) const {
    SampleGrid base = rasterize(cell);
    if (m_ == 0) return base;
    const double cell_area = DPolygon(cell).area();
    const int out_w = (m_ + 1) * (base.w - 1) + 1;
    const int out_h = (m_ + 1) * (base.h - 1) + 1;
    const size_t fw = detail::next_pow2(out_w), fh = detail::next_pow2(out_h);
    std::vector<std::complex<double>> freq(fw * fh, {0.0, 0.0});
    for (int v = 0; v < base.h; ++v)
      for (int u = 0; u < base.w; ++u)
        freq[static_cast<size_t>(v) * fw + u] = base.val[static_cast<size_t>(v) * base.w + u];
    detail::fft2d(freq, fw, fh, false);
    for (auto& z : freq) {
      std::complex<double> acc = z;
      for (int k = 0; k < m_; ++k) acc *= z;
      z = acc;
    }
    detail::fft2d(freq, fw, fh, true);

    SampleGrid out;
    out.u0 = (m_ + 1) * base.u0;
    out.v0 = (m_ + 1) * base.v0;
    out.w = out_w;
    out.h = out_h;
    out.val.assign(static_cast<size_t>(out_w) * out_h, 0.0);
    const double norm = std::pow(area_element_ / cell_area, m_);
    for (int v = 0; v < out_h; ++v)
      for (int u = 0; u < out_w; ++u) {
        const double x = freq[static_cast<size_t>(v) * fw + u].real() * norm;
        out.val[static_cast<size_t>(v) * out_w + u] = x < 0 ? 0.0 : x;  // FFT noise floor
      }
    return out;
  }

  int m_, resolution_;
  Tessellation tess_;
  double b1x_, b1y_, b2x_, b2y_, sx_, sy_;
  double area_element_ = 0;
  std::vector<SampleGrid> proto_;
};

inline SampledSpline sample_convolved_spline(TessKind kind, int m, int resolution,
                                             const Rational& scale = 1) {
  return SampledSpline(kind, m, resolution, scale);
}

struct PartitionCheck {
  double max_deviation = 0;               // over one full period of grid points
  double max_deviation_off_boundary = 0;  // ignoring points within the pixel band of a cell edge
  double boundary_band = 0;
};

/// Max deviation of the all-shifts sum from 1 over one lattice period.
inline PartitionCheck partition_of_unity_check(const SampledSpline& spline) {
  const int n = spline.resolution();
  const Tessellation& tess = spline.tess();

  // Cell outlines around the probed period, for the boundary-pixel mask.
  const ConvexPolygon period_cell = tess.cell({0, 0, 0});
  const Box bb = period_cell.bounding_box();
  const QuadExt pad{tess.diameter()};
  const Box padded{bb.xmin - pad, bb.ymin - pad, bb.xmax + pad, bb.ymax + pad};
  std::vector<DPolygon> outlines;
  for (const auto& [id, poly] : tess.cells_in_window(padded)) outlines.emplace_back(poly);

  const auto [b1, b2] = tess.basis();
  const double pixel =
      (std::hypot(b1.x.to_double(), b1.y.to_double()) +
       std::hypot(b2.x.to_double(), b2.y.to_double())) /
      n;
  PartitionCheck check;
  check.boundary_band = 1.5 * pixel;
  for (int v = 0; v < n; ++v)
    for (int u = 0; u < n; ++u) {
      const double dev = std::abs(spline.shift_sum(u, v) - 1.0);
      check.max_deviation = std::max(check.max_deviation, dev);
      const auto [px, py] = spline.grid_point(u, v);
      double dist = 1e300;
      for (const DPolygon& poly : outlines)
        dist = std::min(dist, std::abs(poly.signed_distance(px, py)));
      if (dist > check.boundary_band)
        check.max_deviation_off_boundary = std::max(check.max_deviation_off_boundary, dev);
    }
  return check;
}

}  // namespace vorospline
