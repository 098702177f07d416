// Command-line front end: reproducible lattice/tessellation refinability
// reports with JSON, CSV and SVG artifacts.

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vorospline/experiment.hpp"
#include "vorospline/report_io.hpp"
#include "vorospline/sampled_spline.hpp"
#include "vorospline/svg.hpp"

namespace fs = std::filesystem;
using namespace vorospline;

namespace {

struct OutputSink {
  std::string dir;

  bool enabled() const { return !dir.empty(); }
  std::string emit(const std::string& name, const std::string& content,
                   RunManifest& manifest) const {
    if (!enabled()) return {};
    fs::create_directories(dir);
    const std::string path = (fs::path(dir) / name).string();
    write_text_file(path, content);
    manifest.add_output(path);
    return path;
  }
  void finish(const std::string& name, const RunManifest& manifest) const {
    if (!enabled()) return;
    write_text_file((fs::path(dir) / name).string(), manifest.to_json().dump(2) + "\n");
  }
};

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stoi(item));
  }
  return out;
}

std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == ':' || c == '/' || c == ' ') c = '_';
  return s;
}

Point2 default_shift(TessKind kind, const Rational& scale) {
  if (kind == TessKind::square) {
    const Rational h = scale / 2;
    return {QuadExt(-h), QuadExt(-h)};
  }
  return {QuadExt(0), QuadExt(0)};
}

int cmd_lattice(const std::string& spec, const OutputSink& sink) {
  const Lattice lat = parse_family_spec(spec);
  const Json report = lattice_report_json(spec, lat);
  std::cout << report.dump(2) << "\n";
  RunManifest manifest("lattice", Json{{"spec", spec}});
  sink.emit("lattice_" + sanitize(spec) + ".json", report.dump(2) + "\n", manifest);
  sink.finish("manifest_lattice_" + sanitize(spec) + ".json", manifest);
  return 0;
}

int cmd_tess(const std::string& kind_name_arg, const std::string& scale_text,
             const std::string& fine_scale_text, const std::string& radius_text, bool svg,
             const OutputSink& sink) {
  const TessKind kind = parse_kind(kind_name_arg);
  const Rational scale = parse_rational(scale_text);
  const Rational fine_scale = parse_rational(fine_scale_text);
  const Rational radius = parse_rational(radius_text);
  const Point2 shift = default_shift(kind, scale);
  const Tessellation coarse = make_tessellation(kind, scale, shift);
  const Tessellation fine = make_tessellation(kind, scale * fine_scale, shift);

  const Box window = standard_window(coarse, radius);
  const StraddleReport straddle = straddle_test(coarse, fine, window);

  Json line_containment = Json::array();
  bool all_contained = true;
  for (size_t p = 0; p < coarse.prototype_count(); ++p) {
    const ConvexPolygon cell = coarse.cell({0, 0, static_cast<int>(p)});
    Json edges = Json::array();
    for (size_t e = 0; e < cell.size(); ++e) {
      const bool contained = line_containment_test(coarse, cell[e], cell[e + 1]);
      all_contained = all_contained && contained;
      edges.push_back({{"facet", {to_string(cell[e]), to_string(cell[e + 1])}},
                       {"line_contained", contained}});
    }
    line_containment.push_back({{"prototype", p}, {"edges", edges}});
  }

  Json report;
  report["kind"] = kind_name(kind);
  report["scale"] = to_string(scale);
  report["fine_scale"] = to_string(fine_scale);
  report["window"] = {to_string(window.xmin), to_string(window.ymin), to_string(window.xmax),
                      to_string(window.ymax)};
  report["straddle"] = straddle_json(straddle);
  report["line_containment_all_facets"] = all_contained;
  report["line_containment"] = line_containment;
  std::cout << report.dump(2) << "\n";

  RunManifest manifest("tess", Json{{"kind", kind_name(kind)},
                                      {"scale", scale_text},
                                      {"fine_scale", fine_scale_text},
                                      {"window", radius_text}});
  sink.emit("tess_" + kind_name(kind) + ".json", report.dump(2) + "\n", manifest);
  if (svg)
    sink.emit("tess_" + kind_name(kind) + ".svg", straddle_svg(coarse, fine, window, straddle),
              manifest);
  sink.finish("manifest_tess_" + kind_name(kind) + ".json", manifest);
  return 0;
}

int cmd_refine(const std::string& kind_name_arg, const std::string& scale_text,
               const std::string& fine_scale_text, const std::string& shifts_text,
               const std::string& radius_text, unsigned long long seed, size_t points, bool svg,
               const std::string& tag, const OutputSink& sink) {
  const TessKind kind = parse_kind(kind_name_arg);
  const Rational scale = parse_rational(scale_text);
  const Rational fine_scale = parse_rational(fine_scale_text);
  const Point2 shift = default_shift(kind, scale);
  const Tessellation coarse = make_tessellation(kind, scale, shift);
  const FineFamilySpec families =
      make_family_spec(make_tessellation(kind, scale * fine_scale, shift),
                       parse_shifts(shifts_text));

  RefinabilityOptions opts;
  opts.window_radius = parse_rational(radius_text);
  opts.seed = seed;
  opts.reproduction_points = points;
  const RefinabilityOutcome outcome = check_refinability(coarse, families, opts);

  const Json report = refinability_report_json(coarse, families, outcome);
  std::cout << report.dump(2) << "\n";

  const std::string stem =
      "refine_" + kind_name(kind) + (tag.empty() ? "" : "_" + sanitize(tag));
  RunManifest manifest("refine", Json{{"kind", kind_name(kind)},
                                        {"scale", scale_text},
                                        {"fine_scale", fine_scale_text},
                                        {"shifts", shifts_text},
                                        {"window", radius_text},
                                        {"seed", seed},
                                        {"points", points}});
  sink.emit(stem + ".json", report.dump(2) + "\n", manifest);
  if (svg) sink.emit(stem + ".svg", arrangement_svg(outcome), manifest);
  sink.finish("manifest_" + stem + ".json", manifest);
  return 0;
}

int cmd_error_exp(const std::string& eps_text, const std::string& levels_text,
                  const std::string& kind_name_arg, const OutputSink& sink) {
  const TessKind kind = parse_kind(kind_name_arg);
  const std::vector<double> eps_list = parse_double_list(eps_text);
  const std::vector<int> levels = parse_int_list(levels_text);
  const ErrorExperimentResult result = run_error_experiment(kind, eps_list, levels);
  const std::string csv = error_experiment_csv(result);
  std::cout << csv;

  RunManifest manifest("error-exp", Json{{"kind", kind_name(kind)},
                                           {"eps", eps_text},
                                           {"levels", levels_text}});
  sink.emit("errors_" + kind_name(kind) + ".csv", csv, manifest);
  sink.finish("manifest_errors_" + kind_name(kind) + ".json", manifest);
  return 0;
}

int cmd_spline_sample(const std::string& kind_name_arg, int m, int resolution,
                      const std::string& scale_text, bool dump_samples, const OutputSink& sink) {
  const TessKind kind = parse_kind(kind_name_arg);
  const SampledSpline spline =
      sample_convolved_spline(kind, m, resolution, parse_rational(scale_text));
  const PartitionCheck partition = partition_of_unity_check(spline);

  double max_value = 0, min_value = 0;
  size_t samples = 0;
  for (size_t p = 0; p < spline.prototype_count(); ++p) {
    for (double v : spline.grid(p).val) {
      max_value = std::max(max_value, v);
      min_value = std::min(min_value, v);
      ++samples;
    }
  }

  Json report;
  report["kind"] = kind_name(kind);
  report["m"] = m;
  report["resolution"] = resolution;
  report["samples"] = samples;
  report["min_value"] = format_double(min_value);
  report["max_value"] = format_double(max_value);
  report["partition_max_deviation"] = format_double(partition.max_deviation);
  report["partition_max_deviation_off_boundary"] =
      format_double(partition.max_deviation_off_boundary);
  report["boundary_band"] = format_double(partition.boundary_band);
  std::cout << report.dump(2) << "\n";

  const std::string stem = "spline_" + kind_name(kind) + "_m" + std::to_string(m);
  RunManifest manifest("spline-sample", Json{{"kind", kind_name(kind)},
                                               {"m", m},
                                               {"resolution", resolution},
                                               {"scale", scale_text}});
  sink.emit(stem + ".json", report.dump(2) + "\n", manifest);
  if (dump_samples) {
    std::ostringstream csv;
    csv << "prototype,u,v,x,y,value\n";
    for (size_t p = 0; p < spline.prototype_count(); ++p) {
      const SampleGrid& g = spline.grid(p);
      for (int v = 0; v < g.h; ++v)
        for (int u = 0; u < g.w; ++u) {
          const double value = g.at(g.u0 + u, g.v0 + v);
          if (value == 0) continue;
          const auto [x, y] = spline.grid_point(g.u0 + u, g.v0 + v);
          csv << p << ',' << g.u0 + u << ',' << g.v0 + v << ',' << format_double(x) << ','
              << format_double(y) << ',' << format_double(value) << '\n';
        }
    }
    sink.emit(stem + ".csv", csv.str(), manifest);
  }
  sink.finish("manifest_" + stem + ".json", manifest);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Refinability of spline spaces built from lattice Voronoi cells"};
  app.require_subcommand(1);
  app.fallthrough();  // accept global flags like --out after the subcommand

  OutputSink sink;
  app.add_option("--out", sink.dir, "directory for JSON/CSV/SVG artifacts")->capture_default_str();

  std::string family_spec;
  auto* lattice = app.add_subcommand("lattice", "obtuse-angle test for a root lattice family");
  lattice->add_option("spec", family_spec,
                      "family spec: A:5, Astar:4, D:3, Dstar:3, cube:4, cube-diag:4, E6, E7, "
                      "E8, tri2d")
      ->required();

  std::string kind_text = "hexagonal", scale_text = "1", fine_scale_text = "1/2",
              radius_text = "3";
  bool svg = false;
  auto* tess = app.add_subcommand("tess", "straddle and line-containment tests");
  tess->add_option("kind", kind_text, "square | triangular | hexagonal | trihexagonal")
      ->required();
  tess->add_option("--scale", scale_text, "coarse scale (rational)");
  tess->add_option("--fine-scale", fine_scale_text, "fine/coarse scale ratio (rational)");
  tess->add_option("--window", radius_text, "window radius in coarse-cell diameters");
  tess->add_flag("--svg", svg, "emit an SVG of the window");

  std::string refine_kind = "hexagonal", shifts_text = "0,0", tag;
  unsigned long long seed = 12345;
  size_t points = 10000;
  auto* refine = app.add_subcommand("refine", "exact refinement-equation feasibility");
  refine->add_option("kind", refine_kind, "square | triangular | hexagonal | trihexagonal")
      ->required();
  refine->add_option("--scale", scale_text, "coarse scale (rational)");
  refine->add_option("--fine-scale", fine_scale_text, "fine/coarse scale ratio (rational)");
  refine->add_option("--shifts", shifts_text,
                     "semicolon-separated exact family shifts, e.g. \"0,0;3/4,1/4*sqrt(3)\"");
  refine->add_option("--window", radius_text, "window radius in coarse-cell diameters");
  refine->add_option("--seed", seed, "seed for the reproduction spot-check");
  refine->add_option("--points", points, "number of reproduction sample points");
  refine->add_option("--tag", tag, "suffix for artifact file names");
  refine->add_flag("--svg", svg, "emit an SVG of the arrangement");

  std::string eps_text, levels_text = "0,1", exp_kind = "hexagonal";
  auto* error_exp = app.add_subcommand("error-exp", "approximation error across levels");
  error_exp->add_option("--eps", eps_text, "comma-separated smoothing widths")->required();
  error_exp->add_option("--levels", levels_text, "comma-separated refinement levels");
  error_exp->add_option("--kind", exp_kind, "hexagonal | square");

  std::string sample_kind;
  int conv_m = 1, resolution = 256;
  bool dump_samples = false;
  auto* spline_sample = app.add_subcommand("spline-sample", "sampled convolved splines");
  spline_sample->add_option("kind", sample_kind, "square | triangular | hexagonal | trihexagonal")
      ->required();
  spline_sample->add_option("--m", conv_m, "number of self-convolutions");
  spline_sample->add_option("--resolution", resolution, "samples per lattice period (>= 64)");
  spline_sample->add_option("--scale", scale_text, "tessellation scale (rational)");
  spline_sample->add_flag("--dump-samples", dump_samples, "also write the sample grid as CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (lattice->parsed()) return cmd_lattice(family_spec, sink);
    if (tess->parsed())
      return cmd_tess(kind_text, scale_text, fine_scale_text, radius_text, svg, sink);
    if (refine->parsed())
      return cmd_refine(refine_kind, scale_text, fine_scale_text, shifts_text, radius_text, seed,
                        points, svg, tag, sink);
    if (error_exp->parsed()) return cmd_error_exp(eps_text, levels_text, exp_kind, sink);
    if (spline_sample->parsed())
      return cmd_spline_sample(sample_kind, conv_m, resolution, scale_text, dump_samples, sink);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
