#pragma once

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "vorospline/refinability.hpp"

namespace vorospline {

/// Minimal SVG writer. Exact coordinates are rounded to 9 decimal digits for
/// display; nothing here feeds back into predicates.
class SvgWriter {
 public:
  SvgWriter(const Box& viewport, double pixels_per_unit = 40) {
    x0_ = viewport.xmin.to_double();
    y1_ = viewport.ymax.to_double();
    const double w = viewport.xmax.to_double() - x0_;
    const double h = y1_ - viewport.ymin.to_double();
    width_ = w * pixels_per_unit;
    height_ = h * pixels_per_unit;
    scale_ = pixels_per_unit;
    body_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width_)
          << "\" height=\"" << fmt(height_) << "\" viewBox=\"0 0 " << fmt(width_) << " "
          << fmt(height_) << "\">\n";
  }

  void add_polygon(const ConvexPolygon& poly, const std::string& fill,
                   const std::string& stroke, double stroke_width, double fill_opacity = 1.0) {
    body_ << "  <path d=\"";
    const auto& v = poly.vertices();
    for (size_t i = 0; i < v.size(); ++i) {
      body_ << (i == 0 ? 'M' : 'L') << fmt(px(v[i].x.to_double())) << ' '
            << fmt(py(v[i].y.to_double()));
    }
    body_ << "Z\" fill=\"" << fill << "\" fill-opacity=\"" << fmt(fill_opacity)
          << "\" stroke=\"" << stroke << "\" stroke-width=\"" << fmt(stroke_width) << "\"/>\n";
  }

  void add_segment(const Point2& a, const Point2& b, const std::string& stroke,
                   double stroke_width) {
    body_ << "  <line x1=\"" << fmt(px(a.x.to_double())) << "\" y1=\"" << fmt(py(a.y.to_double()))
          << "\" x2=\"" << fmt(px(b.x.to_double())) << "\" y2=\"" << fmt(py(b.y.to_double()))
          << "\" stroke=\"" << stroke << "\" stroke-width=\"" << fmt(stroke_width) << "\"/>\n";
  }

  std::string str() const { return body_.str() + "</svg>\n"; }

 private:
  static std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9f", v);
    return buf;
  }
  double px(double x) const { return (x - x0_) * scale_; }
  double py(double y) const { return (y1_ - y) * scale_; }  // SVG y grows downward

  std::ostringstream body_;
  double x0_ = 0, y1_ = 0, width_ = 0, height_ = 0, scale_ = 1;
};

/// Window view of a straddle check: coarse outline, fine tiling, witness
/// facet and cell highlighted.
inline std::string straddle_svg(const Tessellation& coarse, const Tessellation& fine,
                                const Box& window, const StraddleReport& report) {
  SvgWriter svg(window);
  for (const auto& [id, poly] : fine.cells_in_window(window))
    svg.add_polygon(poly, "none", "#999999", 0.02 * 40);
  for (const auto& [id, poly] : coarse.cells_in_window(window))
    svg.add_polygon(poly, "none", "#000000", 0.05 * 40);
  if (report.witness) {
    svg.add_polygon(fine.cell(report.witness->fine_cell), "#ff9999", "#cc0000", 0.05 * 40, 0.6);
    svg.add_segment(report.witness->edge_a, report.witness->edge_b, "#cc0000", 0.08 * 40);
  }
  return svg.str();
}

/// Arrangement view: regions tinted by target, certificate regions (if any)
/// highlighted.
inline std::string arrangement_svg(const RefinabilityOutcome& outcome) {
  SvgWriter svg(outcome.window);
  std::vector<char> flagged(outcome.arrangement.regions.size(), 0);
  for (const auto& [eq, mult] : outcome.solver.certificate)
    if (eq >= 0 && eq < static_cast<int>(flagged.size())) flagged[eq] = 1;
  for (size_t r = 0; r < outcome.arrangement.regions.size(); ++r) {
    const Region& region = outcome.arrangement.regions[r];
    const char* fill = region.target == 1 ? "#cfe8cf" : "#f2f2f2";
    if (flagged[r]) fill = "#ffb3b3";
    svg.add_polygon(region.poly, fill, "#777777", 0.015 * 40, 0.9);
  }
  svg.add_polygon(outcome.arrangement.coarse_cell, "none", "#000000", 0.07 * 40);
  if (outcome.straddle && outcome.straddle->witness)
    svg.add_segment(outcome.straddle->witness->edge_a, outcome.straddle->witness->edge_b,
                    "#cc0000", 0.08 * 40);
  return svg.str();
}

}  // namespace vorospline
