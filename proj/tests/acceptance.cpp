// Acceptance suite: end-to-end checks of the library's headline results,
// one PASS/FAIL line per criterion. Exits with the number of failures.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vorospline/experiment.hpp"
#include "vorospline/report_io.hpp"
#include "vorospline/sampled_spline.hpp"
#include "vorospline/svg.hpp"

namespace fs = std::filesystem;
using namespace vorospline;
using Clock = std::chrono::steady_clock;

namespace {

struct CheckContext {
  std::ostringstream detail;
  bool ok = true;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [FAILED: " << what << "]";
    }
  }
  void note(const std::string& what) { detail << " " << what << ";"; }
};

const Point2 kOrigin{QuadExt(0), QuadExt(0)};

Point2 centered_square_shift(const Rational& scale) {
  const Rational h = scale / 2;
  return {QuadExt(-h), QuadExt(-h)};
}

FineFamilySpec single_family(TessKind kind, const Rational& fine_scale, const Point2& shift) {
  return make_family_spec(make_tessellation(kind, fine_scale, shift), {kOrigin});
}

// ---------------------------------------------------------------------------
// Criterion 1: exact root-lattice classification products.

void criterion_root_lattices(CheckContext& c) {
  for (int n = 2; n <= 12; ++n) {
    const QuadExt a = obtuse_inner_product(make_lattice(LatticeFamily::A, n));
    c.expect(a == family_product_closed_form(LatticeFamily::A, n),
             "A_" + std::to_string(n) + " product mismatch");
    c.expect(a.sign() == 1, "A_" + std::to_string(n) + " not positive");
    const QuadExt astar = obtuse_inner_product(make_lattice(LatticeFamily::Astar, n));
    c.expect(astar == family_product_closed_form(LatticeFamily::Astar, n),
             "A*_" + std::to_string(n) + " product mismatch");
  }
  for (int n = 3; n <= 12; ++n) {
    c.expect(obtuse_inner_product(make_lattice(LatticeFamily::D, n)) == QuadExt(3),
             "D_" + std::to_string(n) + " != 3");
    c.expect(obtuse_inner_product(make_lattice(LatticeFamily::Dstar, n)) == QuadExt(2),
             "D*_" + std::to_string(n) + " != 2");
  }
  c.expect(obtuse_inner_product(make_lattice(LatticeFamily::CartesianCube, 4)) == QuadExt(0),
           "cube != 0");
  c.expect(obtuse_inner_product(make_lattice(LatticeFamily::CubeDiagonalSplit, 4)) == QuadExt(1),
           "cube-diag != 1");
  for (LatticeFamily f : {LatticeFamily::E6, LatticeFamily::E7, LatticeFamily::E8})
    c.expect(obtuse_inner_product(make_lattice(f)) == QuadExt(1), "E-family product != 1");
  c.expect(obtuse_inner_product(make_lattice(LatticeFamily::Triangular2D)) ==
               QuadExt(Rational(-1, 2)),
           "triangular != -1/2");
  c.note("products for A/A* (n=2..12), D/D* (n=3..12), cubes, E6/E7/E8, tri2d all exact");
}

// ---------------------------------------------------------------------------
// Criterion 2: hexagonal half-scale non-refinability with a certificate.

void criterion_hex_infeasible(CheckContext& c) {
  const Tessellation coarse = make_tessellation(TessKind::hexagonal);
  RefinabilityOptions opts;
  opts.window_radius = 3;
  const auto out = check_refinability(
      coarse, single_family(TessKind::hexagonal, Rational(1, 2), kOrigin), opts);
  c.expect(out.straddle.has_value() && !out.straddle->covered, "no straddle verdict");
  c.expect(out.straddle->witness.has_value(), "missing straddle witness");
  c.expect(!out.solver.feasible(), "solver unexpectedly feasible");
  c.expect(!out.solver.certificate.empty(), "missing certificate");
  c.expect(verify_certificate(out.system, out.solver.certificate),
           "certificate failed recombination");
  Rational rhs = 0;
  std::map<int, Rational> combo;
  for (const auto& [eq, mult] : out.solver.certificate) {
    rhs += mult * out.system.targets[eq];
    for (int var : out.system.rows[eq]) combo[var] += mult;
  }
  bool zeros = true;
  for (const auto& [var, v] : combo) zeros = zeros && v.is_zero();
  c.expect(zeros && rhs == 1, "certificate does not recombine to 0 = 1");
  c.note("witness facet crossed by fine cell " +
         to_string(out.straddle->witness->fine_cell) + "; certificate over " +
         std::to_string(out.solver.certificate.size()) + " equations");
}

// ---------------------------------------------------------------------------
// Criterion 3: positive controls.

struct CellLocator {
  // Double-precision containing-cell search; returns the cell and its margin
  // (distance from the point to the cell boundary).
  explicit CellLocator(const Tessellation& t) : tess(t) {
    const auto [b1, b2] = t.basis();
    b1x = b1.x.to_double();
    b1y = b1.y.to_double();
    b2x = b2.x.to_double();
    b2y = b2.y.to_double();
    sx = t.shift().x.to_double();
    sy = t.shift().y.to_double();
    det = b1x * b2y - b1y * b2x;
    for (int p = 0; p < static_cast<int>(t.prototype_count()); ++p)
      protos.emplace_back(t.cell({0, 0, p}));
  }

  std::pair<CellId, double> locate(double x, double y) const {
    const double px = x - sx, py = y - sy;
    const double lu = (px * b2y - py * b2x) / det;
    const double lv = (py * b1x - px * b1y) / det;
    const long long cu = static_cast<long long>(std::floor(lu));
    const long long cv = static_cast<long long>(std::floor(lv));
    CellId best{0, 0, 0};
    double best_margin = -1e300;
    for (long long i = cu - 1; i <= cu + 1; ++i)
      for (long long j = cv - 1; j <= cv + 1; ++j)
        for (int p = 0; p < static_cast<int>(protos.size()); ++p) {
          const double ox = b1x * i + b2x * j, oy = b1y * i + b2y * j;
          const double margin = -protos[p].signed_distance(x - sx - ox, y - sy - oy);
          if (margin > best_margin) {
            best_margin = margin;
            best = CellId{i, j, p};
          }
        }
    return {best, best_margin};
  }

  const Tessellation& tess;
  double b1x, b1y, b2x, b2y, sx, sy, det;
  std::vector<DPolygon> protos;
};

// Rasterization oracle: the weighted fine-cell sum must match the coarse
// indicator away from cell boundaries.
bool rasterization_matches(const RefinabilityOutcome& out, const FineFamilySpec& families,
                           int res, std::string* fail_note) {
  std::map<Unknown, double> weight;
  for (const auto& [var, value] : out.solver.weights)
    weight.emplace(out.system.unknowns[var], to_double(value));

  const DPolygon coarse(out.arrangement.coarse_cell);
  const Box bb = out.arrangement.coarse_cell.bounding_box();
  const double x0 = bb.xmin.to_double() - 1, x1 = bb.xmax.to_double() + 1;
  const double y0 = bb.ymin.to_double() - 1, y1 = bb.ymax.to_double() + 1;
  const double dx = (x1 - x0) / res, dy = (y1 - y0) / res;
  const double band = 2.0 * std::hypot(dx, dy);

  std::vector<CellLocator> locators;
  for (size_t j = 0; j < families.family_count(); ++j)
    locators.emplace_back(CellLocator(families.family(j)));
  // Keep the family tessellations alive alongside their locators.
  std::vector<Tessellation> fams;
  for (size_t j = 0; j < families.family_count(); ++j) fams.push_back(families.family(j));

  long bad = 0;
  for (int iy = 0; iy < res; ++iy)
    for (int ix = 0; ix < res; ++ix) {
      const double px = x0 + (ix + 0.5) * dx, py = y0 + (iy + 0.5) * dy;
      const double sd = coarse.signed_distance(px, py);
      double sum = 0;
      double min_margin = std::abs(sd);
      for (size_t j = 0; j < families.family_count(); ++j) {
        const auto [cell, margin] = locators[j].locate(px, py);
        min_margin = std::min(min_margin, std::abs(margin));
        const auto it = weight.find(Unknown{j, cell});
        if (it != weight.end()) sum += it->second;
      }
      const double want = sd < 0 ? 1.0 : 0.0;
      if (std::abs(sum - want) > 1e-9 && min_margin > band) ++bad;
    }
  if (bad > 0 && fail_note)
    *fail_note = std::to_string(bad) + " off-boundary pixel disagreements";
  return bad == 0;
}

void criterion_positive_controls(CheckContext& c) {
  RefinabilityOptions opts;
  opts.window_radius = 3;
  opts.reproduction_points = 10000;

  // Square and triangular half-scale: feasible, all-ones interior weights,
  // exact reproduction at 10^4 random rational points.
  for (TessKind kind : {TessKind::square, TessKind::triangular}) {
    const Point2 shift =
        kind == TessKind::square ? centered_square_shift(1) : kOrigin;
    const Tessellation coarse = make_tessellation(kind, 1, shift);
    const auto fam = single_family(kind, Rational(1, 2), shift);
    const auto out = check_refinability(coarse, fam, opts);
    const std::string tag = kind_name(kind);
    c.expect(out.solver.feasible(), tag + " not feasible");
    if (!out.solver.feasible()) continue;
    c.expect(out.reproduction.points == 10000, tag + " reproduction sample incomplete");
    c.expect(out.reproduction.mismatches == 0, tag + " reproduction mismatches");
    const Tessellation fine = fam.family(0);
    bool interior_ones = true;
    for (const auto& [var, value] : out.solver.weights) {
      const Unknown& u = out.system.unknowns[var];
      const bool inside =
          out.arrangement.coarse_cell.contains_strict(fine.cell(u.cell).centroid());
      interior_ones = interior_ones && (inside ? value == 1 : value == 0);
    }
    c.expect(interior_ones, tag + " weights are not the 0/1 interior pattern");
  }

  // Trihexagonal at half scale, as stated: this fails — the half-scale copy
  // straddles (witnessed below), so no weights exist at this ratio.
  const Tessellation trihex = make_tessellation(TessKind::trihexagonal);
  const auto half = check_refinability(
      trihex, single_family(TessKind::trihexagonal, Rational(1, 2), kOrigin), opts);
  c.expect(half.solver.feasible(),
           "trihexagonal 1/2-scale is infeasible (straddle witness exists: a coarse facet "
           "crosses a fine-cell interior); the 3.6.3.6 indicators refine at scale 1/3 instead");

  // Corrected-scale control: the 1/3-scale system is feasible and its weights
  // survive a 2048^2 rasterization oracle.
  const auto fam3 = single_family(TessKind::trihexagonal, Rational(1, 3), kOrigin);
  const auto third = check_refinability(trihex, fam3, opts);
  c.expect(third.solver.feasible(), "trihexagonal 1/3-scale not feasible");
  if (third.solver.feasible()) {
    c.expect(third.reproduction.mismatches == 0, "trihexagonal 1/3 reproduction mismatches");
    std::string note;
    c.expect(rasterization_matches(third, fam3, 2048, &note),
             "trihexagonal 1/3 rasterization: " + note);
    c.note("corrected-scale control: trihexagonal 1/3 feasible, 2048^2 raster oracle clean");
  }
}

// ---------------------------------------------------------------------------
// Criterion 4: overcomplete families.

void criterion_overcomplete(CheckContext& c) {
  RefinabilityOptions opts;
  opts.window_radius = 3;
  const Tessellation coarse = make_tessellation(TessKind::hexagonal);

  // Three half-scale families shifted by quarter-basis vectors (the lozenge
  // configuration).
  const auto lozenge_fams = make_family_spec(
      make_tessellation(TessKind::hexagonal, Rational(1, 2)),
      {kOrigin, Point2{QuadExt(Rational(3, 4)), QuadExt(0, Rational(1, 4), 3)},
       Point2{QuadExt(0), QuadExt(0, Rational(1, 2), 3)}});
  const auto lozenge = check_refinability(coarse, lozenge_fams, opts);
  c.expect(!lozenge.solver.feasible(), "three-shift system unexpectedly feasible");
  c.expect(verify_certificate(lozenge.system, lozenge.solver.certificate),
           "three-shift certificate invalid");

  // Vertex-shift families: intersections are single triangles; the value
  // propagation walk must end in the 1 = 0 contradiction.
  const QuadExt half_s3(0, Rational(1, 2), 3);
  const auto vertex_fams = make_family_spec(
      make_tessellation(TessKind::hexagonal, Rational(1, 2)),
      {kOrigin, Point2{QuadExt(Rational(1, 2)), half_s3},
       Point2{QuadExt(Rational(-1, 2)), half_s3}});
  const auto vertex = check_refinability(coarse, vertex_fams, opts);
  c.expect(!vertex.solver.feasible(), "vertex-shift system unexpectedly feasible");
  c.expect(verify_certificate(vertex.system, vertex.solver.certificate),
           "vertex-shift certificate invalid");

  const Point2 center = vertex.arrangement.coarse_cell.centroid();
  int seed = -1;
  QuadExt best;
  for (size_t r = 0; r < vertex.arrangement.regions.size(); ++r) {
    if (vertex.arrangement.regions[r].target != 1) continue;
    const Point2 d = vertex.arrangement.regions[r].poly.centroid() - center;
    const QuadExt dist2 = dot(d, d);
    if (seed < 0 || dist2 < best) {
      seed = static_cast<int>(r);
      best = dist2;
    }
  }
  const auto trace = propagation_trace(vertex.arrangement, vertex.system, seed);
  c.expect(trace.contradiction, "propagation did not reach the 1 = 0 contradiction");
  c.expect(!trace.steps.empty(), "propagation produced no implications");
  if (trace.contradiction)
    c.note("propagation chain of " + std::to_string(trace.steps.size()) +
           " implications ends with regions " + std::to_string(trace.region_target_one) +
           " (target 1) and " + std::to_string(trace.region_target_zero) + " (target 0)");
}

// ---------------------------------------------------------------------------
// Criterion 5: m-ary refinement.

void criterion_mary(CheckContext& c) {
  RefinabilityOptions opts;
  opts.window_radius = 3;
  const Tessellation coarse = make_tessellation(TessKind::hexagonal);
  for (int k : {2, 3}) {
    const auto out = check_refinability(
        coarse, single_family(TessKind::hexagonal, Rational(1, k), kOrigin), opts);
    c.expect(!out.solver.feasible(),
             "hexagonal 1/" + std::to_string(k) + " unexpectedly feasible");
    c.expect(out.straddle && !out.straddle->covered,
             "hexagonal 1/" + std::to_string(k) + " not straddled");
  }
  c.note("hexagonal verdicts at fine scales 1/2 and 1/3: both infeasible");
}

// ---------------------------------------------------------------------------
// Criterion 6: approximation-error anomaly.

void criterion_error_anomaly(CheckContext& c) {
  const auto hex = run_error_experiment(TessKind::hexagonal, {0.04, 0.02, 0.01}, {0, 1});
  std::map<std::pair<double, int>, ErrorExperimentRow> rows;
  for (const auto& row : hex.rows) {
    rows[{row.eps, row.level}] = row;
    c.expect(row.quadrature_depth < 13, "quadrature failed to stabilize to 1%");
  }
  const double e0 = rows.at({0.01, 0}).error, e1 = rows.at({0.01, 1}).error;
  c.expect(e1 / e0 >= 10.0, "err(level1)/err(level0) = " + format_double(e1 / e0) + " < 10");
  c.note("eps=0.01: err0=" + format_double(e0) + ", err1=" + format_double(e1) +
         ", ratio=" + format_double(e1 / e0, 4));

  for (double eps : {0.04, 0.02}) {
    c.expect(rows.at({eps, 1}).error > rows.at({eps, 0}).error,
             "no anomaly at eps=" + format_double(eps));
  }
  // err0 shrinks with eps at a rate between sqrt and linear.
  const double r1 = rows.at({0.02, 0}).error / rows.at({0.04, 0}).error;
  const double r2 = rows.at({0.01, 0}).error / rows.at({0.02, 0}).error;
  for (double r : {r1, r2})
    c.expect(r >= 0.45 && r <= 0.78,
             "err0 scaling per halving of eps out of [sqrt,linear] range: " + format_double(r));

  const auto square = run_error_experiment(TessKind::square, {0.01}, {0, 1});
  const double s0 = square.rows[0].error, s1 = square.rows[1].error;
  c.expect(s1 <= s0, "square control grew: " + format_double(s1) + " > " + format_double(s0));
  c.note("square control: err0=" + format_double(s0) + ", err1=" + format_double(s1));
}

// ---------------------------------------------------------------------------
// Criterion 7: partition of unity.

void criterion_partition(CheckContext& c) {
  for (TessKind kind : {TessKind::square, TessKind::hexagonal}) {
    const auto check = partition_of_unity_check(sample_convolved_spline(kind, 0, 256));
    c.expect(check.max_deviation_off_boundary == 0.0,
             std::string(kind_name(kind)) + " m=0 deviates off boundary pixels");
  }
  const auto dev = [](TessKind kind, int m, int res) {
    return partition_of_unity_check(sample_convolved_spline(kind, m, res)).max_deviation;
  };
  const double noise_floor = 1e-9;
  for (int m : {1, 2}) {
    const double hex256 = dev(TessKind::hexagonal, m, 256);
    const double hex512 = dev(TessKind::hexagonal, m, 512);
    c.expect(hex256 <= 1e-2, "hexagonal m=" + std::to_string(m) + " deviation " +
                                 format_double(hex256) + " > 1e-2");
    c.expect(hex512 <= std::max(hex256, noise_floor),
             "hexagonal m=" + std::to_string(m) + " deviation grew under doubling");
    c.note("hex m=" + std::to_string(m) + ": dev256=" + format_double(hex256, 3) +
           ", dev512=" + format_double(hex512, 3));
  }
  const double sq256 = dev(TessKind::square, 1, 256);
  c.expect(sq256 <= 1e-2, "square m=1 deviation > 1e-2");
}

// ---------------------------------------------------------------------------
// Criterion 8: byte-identical artifacts across repeated runs.

std::map<std::string, std::string> read_artifacts(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name.rfind("manifest", 0) == 0) continue;  // timestamps live here
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream body;
    body << in.rdbuf();
    files[name] = body.str();
  }
  return files;
}

void criterion_determinism(CheckContext& c) {
  const char* cli = std::getenv("VOROSPLINE_CLI");
  if (!cli) {
    c.expect(false, "VOROSPLINE_CLI not set");
    return;
  }
  const fs::path base = fs::temp_directory_path() / "vorospline_acceptance";
  fs::remove_all(base);
  const auto run_suite = [&](const fs::path& dir) {
    const std::string out = " --out " + dir.string() + " >/dev/null 2>&1";
    const std::vector<std::string> commands = {
        std::string(cli) + " lattice D:3" + out,
        std::string(cli) + " lattice A:2" + out,
        std::string(cli) + " lattice Astar:2" + out,
        std::string(cli) + " lattice E8" + out,
        std::string(cli) + " lattice tri2d" + out,
        std::string(cli) + " tess hexagonal --fine-scale 1/2 --window 2 --svg" + out,
        std::string(cli) + " tess trihexagonal --fine-scale 1/2 --window 2" + out,
        std::string(cli) + " refine hexagonal --fine-scale 1/2 --window 3 --svg" + out,
        std::string(cli) + " refine triangular --fine-scale 1/2 --window 2" + out,
        std::string(cli) + " refine square --fine-scale 1/2 --window 2" + out,
        std::string(cli) + " refine trihexagonal --fine-scale 1/3 --window 2 --tag third" + out,
        std::string(cli) +
            " refine hexagonal --fine-scale 1/2 --shifts \"0,0;3/4,1/4*sqrt(3);0,1/2*sqrt(3)\""
            " --window 2 --tag threeshift" + out,
        std::string(cli) +
            " refine hexagonal --fine-scale 1/2 --shifts"
            " \"0,0;1/2,1/2*sqrt(3);-1/2,1/2*sqrt(3)\" --window 2 --tag vertexshift" + out,
        std::string(cli) + " error-exp --eps 0.04,0.02,0.01 --levels 0,1 --kind hexagonal" + out,
        std::string(cli) + " error-exp --eps 0.01 --levels 0,1 --kind square" + out,
        std::string(cli) + " spline-sample hexagonal --m 1 --resolution 256" + out,
    };
    for (const std::string& cmd : commands) {
      if (std::system(cmd.c_str()) != 0) return false;
    }
    return true;
  };
  const fs::path dir_a = base / "a", dir_b = base / "b";
  fs::create_directories(dir_a);
  fs::create_directories(dir_b);
  c.expect(run_suite(dir_a), "first suite run failed");
  c.expect(run_suite(dir_b), "second suite run failed");
  if (!c.ok) return;

  const auto files_a = read_artifacts(dir_a), files_b = read_artifacts(dir_b);
  c.expect(files_a.size() == files_b.size(), "artifact counts differ");
  c.expect(files_a.size() >= 18, "suspiciously few artifacts");
  size_t mismatches = 0;
  for (const auto& [name, body] : files_a) {
    const auto it = files_b.find(name);
    if (it == files_b.end() || it->second != body) {
      ++mismatches;
      c.detail << " [differs: " << name << "]";
    }
  }
  c.expect(mismatches == 0, "artifacts not byte-identical");
  c.note(std::to_string(files_a.size()) + " JSON/CSV/SVG artifacts byte-identical");
}

}  // namespace

int main() {
  struct Criterion {
    std::string name;
    std::function<void(CheckContext&)> run;
    double time_limit_s;  // 0 = no limit
  };
  const std::vector<Criterion> criteria = {
      {"root-lattice classification products", criterion_root_lattices, 1.0},
      {"hexagonal half-scale non-refinability with certificate", criterion_hex_infeasible, 5.0},
      {"positive refinability controls", criterion_positive_controls, 0.0},
      {"overcomplete families and value propagation", criterion_overcomplete, 30.0},
      {"m-ary hexagonal verdicts", criterion_mary, 0.0},
      {"approximation-error anomaly", criterion_error_anomaly, 60.0},
      {"partition of unity", criterion_partition, 0.0},
      {"byte-identical artifacts", criterion_determinism, 0.0},
  };

  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    CheckContext ctx;
    const auto start = Clock::now();
    try {
      criteria[i].run(ctx);
    } catch (const std::exception& e) {
      ctx.expect(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (criteria[i].time_limit_s > 0 && seconds > criteria[i].time_limit_s) {
      ctx.expect(false, "exceeded time limit of " + format_double(criteria[i].time_limit_s, 3) +
                            " s");
    }
    if (!ctx.ok) ++failures;
    std::cout << "[" << i + 1 << "] " << (ctx.ok ? "PASS" : "FAIL") << " " << criteria[i].name
              << " (" << format_double(seconds, 3) << " s):" << ctx.detail.str() << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failures;
}
