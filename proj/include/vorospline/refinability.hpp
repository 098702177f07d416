#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vorospline/linear_system.hpp"

namespace vorospline {

struct ReproductionCheck {
  bool performed = false;
  size_t points = 0;
  size_t mismatches = 0;
  unsigned long long seed = 0;
};

/// Full outcome of a refinability run: the exact arrangement, the assembled
/// system, solver verdict with certificate or weights, and the companion
/// checks.
struct RefinabilityOutcome {
  Rational window_radius;
  Box window;
  CellId coarse_cell_id;
  Arrangement arrangement;
  RefinementSystem system;
  std::optional<StraddleReport> straddle;
  FeasibilityResult solver;
  ReproductionCheck reproduction;
  std::string narrative;

  bool feasible() const { return solver.feasible(); }
};

struct RefinabilityOptions {
  Rational window_radius = 3;        // in units of the coarse cell diameter
  unsigned long long seed = 12345;   // for the reproduction sample
  size_t reproduction_points = 10000;
};

namespace detail {

// Distinguished coarse cell: the cell around the origin, preferring strict
// containment, falling back to the first closure hit in deterministic order.
inline std::pair<CellId, ConvexPolygon> pick_coarse_cell(const Tessellation& coarse) {
  const Box origin{QuadExt(0), QuadExt(0), QuadExt(0), QuadExt(0)};
  const auto candidates = coarse.cells_in_window(origin);
  if (candidates.empty()) throw std::logic_error("pick_coarse_cell: tiling misses the origin");
  for (const auto& [id, poly] : candidates)
    if (poly.contains_strict({QuadExt(0), QuadExt(0)})) return {id, poly};
  return candidates.front();
}

// Axis box with integer bounds containing [center - half, center + half]^2.
inline Box integer_window(const Point2& center, const Rational& half) {
  const QuadExt h{half};
  return Box{QuadExt(quad_floor(center.x - h)), QuadExt(quad_floor(center.y - h)),
             QuadExt(quad_ceil(center.x + h)), QuadExt(quad_ceil(center.y + h))};
}

}  // namespace detail

/// Integer-bounds window of `radius` coarse-cell diameters around the cell at
/// the origin; the shared window convention of the straddle and refinability
/// drivers.
inline Box standard_window(const Tessellation& coarse, const Rational& radius) {
  const auto [id, poly] = detail::pick_coarse_cell(coarse);
  return detail::integer_window(poly.centroid(), radius * coarse.diameter());
}

/// Decides refinability of the distinguished coarse indicator over a finite
/// window: straddle pre-check for single families, exact arrangement and
/// feasibility solve, and (when feasible) an exact spot-check that the weights
/// reproduce the coarse indicator at random rational points. Fine cells
/// outside the window carry weight zero, so a feasible verdict means
/// "feasible with compactly supported weights".
inline RefinabilityOutcome check_refinability(const Tessellation& coarse,
                                              const FineFamilySpec& families,
                                              const RefinabilityOptions& opts = {}) {
  if (opts.window_radius <= 0)
    throw std::invalid_argument("check_refinability: window radius must be positive");
  auto [cell_id, cell_poly] = detail::pick_coarse_cell(coarse);
  const Rational half = opts.window_radius * coarse.diameter();
  const Box window = detail::integer_window(cell_poly.centroid(), half);

  std::optional<StraddleReport> straddle;
  if (families.family_count() == 1)
    straddle = straddle_test(coarse, families.family(0), window);

  Arrangement arr = build_arrangement(cell_poly, families, window);
  RefinementSystem sys = assemble_system(arr);
  FeasibilityResult solver = solve_exact(sys);

  if (straddle && !straddle->covered && solver.feasible())
    throw std::logic_error("check_refinability: straddled but solver found weights");

  RefinabilityOutcome out{opts.window_radius, window,   cell_id, std::move(arr),
                          std::move(sys),     straddle, std::move(solver),
                          {},                 {}};

  if (out.solver.feasible()) {
    // Exact reproduction at random rational points of the margin-extended
    // window; out-of-window cells have weight zero.
    std::map<Unknown, Rational> weight_of;
    for (const auto& [var, value] : out.solver.weights)
      weight_of.emplace(out.system.unknowns[var], value);

    const QuadExt pad{families.base.diameter()};
    const Box ext{QuadExt(quad_floor(window.xmin - pad)), QuadExt(quad_floor(window.ymin - pad)),
                  QuadExt(quad_ceil(window.xmax + pad)), QuadExt(quad_ceil(window.ymax + pad))};
    std::mt19937_64 rng(opts.seed);
    constexpr long long kGrid = 1 << 20;
    std::uniform_int_distribution<long long> pick(0, kGrid - 1);
    const Rational x0 = ext.xmin.rational_part(), x1 = ext.xmax.rational_part();
    const Rational y0 = ext.ymin.rational_part(), y1 = ext.ymax.rational_part();

    out.reproduction.performed = true;
    out.reproduction.seed = opts.seed;
    size_t accepted = 0, attempts = 0;
    while (accepted < opts.reproduction_points && attempts < opts.reproduction_points * 20) {
      ++attempts;
      const Point2 p{QuadExt(x0 + (x1 - x0) * Rational(pick(rng), kGrid)),
                     QuadExt(y0 + (y1 - y0) * Rational(pick(rng), kGrid))};
      // Points on any cell boundary are measure-zero ties: skip them.
      if (out.arrangement.coarse_cell.contains(p) &&
          !out.arrangement.coarse_cell.contains_strict(p))
        continue;
      Rational sum = 0;
      bool on_boundary = false;
      for (size_t j = 0; j < families.family_count() && !on_boundary; ++j) {
        const auto cid = families.family(j).cell_containing_strict(p);
        if (!cid) {
          on_boundary = true;
          break;
        }
        const auto it = weight_of.find(Unknown{j, *cid});
        if (it != weight_of.end()) sum += it->second;
      }
      if (on_boundary) continue;
      ++accepted;
      const int want = out.arrangement.coarse_cell.contains_strict(p) ? 1 : 0;
      if (sum != want) ++out.reproduction.mismatches;
    }
    out.reproduction.points = accepted;
  }

  std::ostringstream narrative;
  narrative << "window [" << to_string(window.xmin) << "," << to_string(window.xmax) << "] x ["
            << to_string(window.ymin) << "," << to_string(window.ymax) << "] around coarse cell "
            << to_string(out.coarse_cell_id) << "; " << out.arrangement.regions.size()
            << " regions, " << out.system.equation_count() << " equations, "
            << out.system.var_count() << " unknowns. ";
  if (out.straddle) {
    if (out.straddle->covered)
      narrative << "Straddle pre-check: every coarse facet is a union of fine edges. ";
    else
      narrative << "Straddle pre-check: facet " << to_string(out.straddle->witness->edge_a)
                << " -- " << to_string(out.straddle->witness->edge_b)
                << " is crossed by the interior of fine cell "
                << to_string(out.straddle->witness->fine_cell)
                << ", so no weights can exist. ";
  }
  if (out.solver.feasible()) {
    narrative << "Feasible with compactly supported weights";
    if (out.reproduction.performed)
      narrative << "; reproduction spot-check: " << out.reproduction.mismatches
                << " mismatches at " << out.reproduction.points << " random rational points";
    narrative << ".";
  } else {
    narrative << "Infeasible: " << out.solver.certificate.size()
              << " equations recombine to 0 = 1, so the coarse indicator is not a finite "
                 "combination of the fine indicators on this window (and hence not at all).";
  }
  out.narrative = narrative.str();
  return out;
}

/// One propagation implication: adjacent same-target regions whose member
/// sets differ in a single family slot force those two coefficients equal.
struct PropagationStep {
  int region_from = -1, region_to = -1;
  int var_a = -1, var_b = -1;
};

struct PropagationTrace {
  std::vector<PropagationStep> steps;
  bool contradiction = false;
  int region_target_one = -1;   // clashing pair when a contradiction is found
  int region_target_zero = -1;
};

namespace detail {

// Positive-length overlap of collinear edges of the two polygons.
inline bool share_edge_segment(const ConvexPolygon& a, const ConvexPolygon& b) {
  const auto& va = a.vertices();
  const auto& vb = b.vertices();
  for (size_t i = 0; i < va.size(); ++i) {
    const Point2 &p = va[i], &q = va[(i + 1) % va.size()];
    const Point2 dir = q - p;
    const QuadExt len2 = dot(dir, dir);
    for (size_t k = 0; k < vb.size(); ++k) {
      const Point2 &c = vb[k], &d = vb[(k + 1) % vb.size()];
      if (!collinear(p, q, c) || !collinear(p, q, d)) continue;
      QuadExt tc = dot(c - p, dir) / len2;
      QuadExt td = dot(d - p, dir) / len2;
      if (td < tc) std::swap(tc, td);
      const QuadExt lo = tc < QuadExt(0) ? QuadExt(0) : tc;
      const QuadExt hi = td > QuadExt(1) ? QuadExt(1) : td;
      if (lo < hi) return true;
    }
  }
  return false;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(size_t n) : parent(n) {
    for (size_t i = 0; i < n; ++i) parent[i] = static_cast<int>(i);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);  // keep the smallest index as representative
    parent[b] = a;
    return true;
  }
};

}  // namespace detail

/// Walks edge-sharing same-target region pairs from the seed, propagating
/// coefficient equalities, and stops at a contradiction (two regions with
/// equal coefficient classes but targets 1 and 0) or at exhaustion.
inline PropagationTrace propagation_trace(const Arrangement& arr, const RefinementSystem& sys,
                                          int seed_region) {
  const int n = static_cast<int>(arr.regions.size());
  if (seed_region < 0 || seed_region >= n)
    throw std::invalid_argument("propagation_trace: seed region out of range");

  // Adjacency with a double-precision bounding-box prefilter; the shared-edge
  // decision itself is exact.
  struct BB {
    double x0, y0, x1, y1;
  };
  std::vector<BB> bbs(n);
  for (int r = 0; r < n; ++r) {
    const Box b = arr.regions[r].poly.bounding_box();
    bbs[r] = {b.xmin.to_double() - 1e-9, b.ymin.to_double() - 1e-9, b.xmax.to_double() + 1e-9,
              b.ymax.to_double() + 1e-9};
  }
  std::vector<int> order(n);
  for (int r = 0; r < n; ++r) order[r] = r;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return bbs[a].x0 < bbs[b].x0; });
  std::vector<std::vector<int>> adjacency(n);
  for (int oi = 0; oi < n; ++oi) {
    const int r = order[oi];
    for (int ok = oi + 1; ok < n; ++ok) {
      const int s = order[ok];
      if (bbs[s].x0 > bbs[r].x1) break;
      if (bbs[s].y0 > bbs[r].y1 || bbs[s].y1 < bbs[r].y0) continue;
      if (detail::share_edge_segment(arr.regions[r].poly, arr.regions[s].poly)) {
        adjacency[r].push_back(s);
        adjacency[s].push_back(r);
      }
    }
  }
  for (auto& list : adjacency) std::sort(list.begin(), list.end());

  detail::UnionFind classes(sys.var_count());
  PropagationTrace trace;

  // Breadth-first from the seed, then any unreached components, so the walk
  // visits every implication deterministically.
  std::vector<char> visited(n, 0);
  std::queue<int> queue;
  const auto visit_component = [&](int start) {
    queue.push(start);
    visited[start] = 1;
    while (!queue.empty()) {
      const int r = queue.front();
      queue.pop();
      for (int s : adjacency[r]) {
        if (arr.regions[r].target == arr.regions[s].target) {
          const auto& vr = sys.rows[r];
          const auto& vs = sys.rows[s];
          // Member index vectors are sorted; a single differing element on
          // each side yields the implied equality.
          std::vector<int> only_r, only_s;
          std::set_difference(vr.begin(), vr.end(), vs.begin(), vs.end(),
                              std::back_inserter(only_r));
          std::set_difference(vs.begin(), vs.end(), vr.begin(), vr.end(),
                              std::back_inserter(only_s));
          if (only_r.size() == 1 && only_s.size() == 1) {
            if (classes.unite(only_r[0], only_s[0]))
              trace.steps.push_back({r, s, only_r[0], only_s[0]});
          }
        }
        if (!visited[s]) {
          visited[s] = 1;
          queue.push(s);
        }
      }
    }
  };
  visit_component(seed_region);
  for (int r = 0; r < n; ++r)
    if (!visited[r]) visit_component(r);

  // A target-1 and a target-0 region whose members fall in identical classes
  // give the 1 = 0 contradiction.
  std::map<std::vector<int>, std::pair<int, int>> signatures;  // -> (one, zero)
  for (int r = 0; r < n; ++r) {
    std::vector<int> sig;
    sig.reserve(sys.rows[r].size());
    for (int var : sys.rows[r]) sig.push_back(classes.find(var));
    std::sort(sig.begin(), sig.end());
    auto [it, inserted] = signatures.emplace(std::move(sig), std::pair<int, int>{-1, -1});
    auto& [one, zero] = it->second;
    if (arr.regions[r].target == 1 && one < 0) one = r;
    if (arr.regions[r].target == 0 && zero < 0) zero = r;
    if (one >= 0 && zero >= 0) {
      trace.contradiction = true;
      trace.region_target_one = one;
      trace.region_target_zero = zero;
      return trace;
    }
  }
  return trace;
}

/// Parses a semicolon-separated list of exact points: "x,y;x,y;...".
inline std::vector<Point2> parse_shifts(const std::string& text) {
  std::vector<Point2> shifts;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t next = text.find(';', pos);
    if (next == std::string::npos) next = text.size();
    const std::string item = text.substr(pos, next - pos);
    const size_t comma = item.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("parse_shifts: expected 'x,y' in '" + item + "'");
    shifts.push_back(Point2{parse_quadext(item.substr(0, comma)),
                            parse_quadext(item.substr(comma + 1))});
    pos = next + 1;
    if (next == text.size()) break;
  }
  if (shifts.empty()) throw std::invalid_argument("parse_shifts: empty list");
  return shifts;
}

}  // namespace vorospline
