#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vorospline/tessellation.hpp"

namespace vorospline {

/// A family of fine tessellations: one base plus J distinct shifts of it.
/// Each shifted copy tiles the plane on its own.
struct FineFamilySpec {
  Tessellation base;
  std::vector<Point2> shifts;  // length J >= 1; (0,0) gives the base itself

  size_t family_count() const { return shifts.size(); }
  Tessellation family(size_t j) const { return base.translated(shifts.at(j)); }
};

inline FineFamilySpec make_family_spec(Tessellation base, std::vector<Point2> shifts) {
  if (shifts.empty()) throw std::invalid_argument("FineFamilySpec: needs at least one shift");
  for (size_t a = 0; a < shifts.size(); ++a)
    for (size_t b = a + 1; b < shifts.size(); ++b)
      if (shifts[a] == shifts[b])
        throw std::invalid_argument("FineFamilySpec: shifts must be distinct");
  return FineFamilySpec{std::move(base), std::move(shifts)};
}

/// Region of the common refinement: a convex piece lying in exactly one fine
/// cell per family, entirely inside or outside the coarse cell.
struct Region {
  ConvexPolygon poly;
  std::vector<CellId> membership;  // one fine cell per family
  int target = 0;                  // 1 inside the coarse cell, 0 outside
};

/// Common refinement of the coarse cell boundary and all fine families over a
/// window.
struct Arrangement {
  ConvexPolygon coarse_cell;
  Box window;
  std::vector<Region> regions;
};

/// Builds the arrangement: window pieces are successively split by each fine
/// family's cells and finally by the coarse cell boundary. Regions partition
/// the window exactly.
inline Arrangement build_arrangement(const ConvexPolygon& coarse_cell,
                                     const FineFamilySpec& families, const Box& window) {
  const Box cell_bb = coarse_cell.bounding_box();
  const QuadExt margin{families.base.diameter()};
  if (cell_bb.xmin - margin < window.xmin || cell_bb.xmax + margin > window.xmax ||
      cell_bb.ymin - margin < window.ymin || cell_bb.ymax + margin > window.ymax)
    throw std::invalid_argument(
        "build_arrangement: window must contain the coarse cell plus a one-fine-cell margin");

  struct Piece {
    ConvexPolygon poly;
    std::vector<CellId> membership;
  };
  std::vector<Piece> pieces;
  pieces.push_back({box_polygon(window), {}});

  // Double-precision bounding boxes prune candidate pairs; the clip itself
  // stays exact.
  struct BB {
    double x0, y0, x1, y1;
  };
  const auto rough_bb = [](const ConvexPolygon& poly) {
    const Box b = poly.bounding_box();
    return BB{b.xmin.to_double() - 1e-9, b.ymin.to_double() - 1e-9, b.xmax.to_double() + 1e-9,
              b.ymax.to_double() + 1e-9};
  };

  for (size_t j = 0; j < families.family_count(); ++j) {
    const Tessellation fam = families.family(j);
    const auto cells = fam.cells_in_window(window);
    std::vector<BB> cell_bbs;
    cell_bbs.reserve(cells.size());
    for (const auto& [id, cellpoly] : cells) cell_bbs.push_back(rough_bb(cellpoly));
    std::vector<Piece> next;
    for (const Piece& piece : pieces) {
      const BB pb = rough_bb(piece.poly);
      for (size_t c = 0; c < cells.size(); ++c) {
        const BB& cb = cell_bbs[c];
        if (cb.x0 > pb.x1 || cb.x1 < pb.x0 || cb.y0 > pb.y1 || cb.y1 < pb.y0) continue;
        if (auto part = clip(piece.poly, cells[c].second)) {
          Piece p{std::move(*part), piece.membership};
          p.membership.push_back(cells[c].first);
          next.push_back(std::move(p));
        }
      }
    }
    pieces = std::move(next);
  }

  Arrangement arr{coarse_cell, window, {}};
  for (Piece& piece : pieces) {
    if (auto inside = clip(piece.poly, coarse_cell))
      arr.regions.push_back({std::move(*inside), piece.membership, 1});
    for (ConvexPolygon& out : convex_difference(piece.poly, coarse_cell))
      arr.regions.push_back({std::move(out), piece.membership, 0});
  }
  return arr;
}

/// Exact partition check: region areas sum to the window area.
inline QuadExt arrangement_defect(const Arrangement& arr) {
  QuadExt total;
  for (const Region& r : arr.regions) total += r.poly.area();
  return arr.window.width() * arr.window.height() - total;
}

}  // namespace vorospline
