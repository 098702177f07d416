#pragma once

#include <chrono>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vorospline/lattice.hpp"
#include "vorospline/refinability.hpp"

namespace vorospline {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

inline std::string format_double(double v, int digits = 12) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

inline Json lattice_report_json(const std::string& spec, const Lattice& lat) {
  const RuledOutResult verdict = refinability_ruled_out(lat);
  Json j;
  j["family"] = family_name(lat.family);
  j["spec"] = spec;
  j["n"] = lat.n;
  j["product"] = to_string(verdict.product);
  j["product_decimal"] = format_double(verdict.product.to_double());
  j["sign"] = verdict.product.sign();
  j["ruled_out"] = verdict.ruled_out;
  j["reason"] = verdict.reason;
  j["notes"] = classification_notes(lat);
  return j;
}

inline Json point_json(const Point2& p) { return to_string(p); }

inline Json straddle_json(const StraddleReport& report) {
  Json j;
  j["verdict"] = report.covered ? "covered" : "straddled";
  if (report.witness) {
    Json w;
    w["facet"] = {to_string(report.witness->edge_a), to_string(report.witness->edge_b)};
    w["fine_cell"] = to_string(report.witness->fine_cell);
    j["witness"] = w;
  }
  return j;
}

inline Json refinability_report_json(const Tessellation& coarse, const FineFamilySpec& families,
                                     const RefinabilityOutcome& out) {
  Json inputs;
  inputs["coarse"] = {{"kind", kind_name(coarse.kind())},
                      {"scale", to_string(Rational(coarse.scale()))},
                      {"shift", to_string(coarse.shift())}};
  inputs["fine"] = {{"kind", kind_name(families.base.kind())},
                    {"scale", to_string(Rational(families.base.scale()))},
                    {"shift", to_string(families.base.shift())}};
  Json shift_list = Json::array();
  for (const Point2& s : families.shifts) shift_list.push_back(to_string(s));
  inputs["family_shifts"] = shift_list;
  inputs["window_radius"] = to_string(out.window_radius);
  inputs["window"] = {to_string(out.window.xmin), to_string(out.window.ymin),
                      to_string(out.window.xmax), to_string(out.window.ymax)};

  Json j;
  j["inputs"] = inputs;
  j["coarse_cell"] = to_string(out.coarse_cell_id);
  j["regions"] = out.arrangement.regions.size();
  j["equations"] = out.system.equation_count();
  j["unknowns"] = out.system.var_count();
  if (out.straddle) j["straddle"] = straddle_json(*out.straddle);
  j["verdict"] = out.solver.feasible() ? "feasible" : "infeasible";
  if (out.solver.feasible()) {
    Json weights = Json::array();
    for (const auto& [var, value] : out.solver.weights) {
      if (value.is_zero()) continue;
      weights.push_back({{"cell", to_string(out.system.unknowns[var])},
                         {"value", to_string(value)}});
    }
    j["weights"] = weights;
    j["zero_weights"] = out.solver.weights.size() - weights.size();
  } else {
    Json cert = Json::array();
    for (const auto& [eq, mult] : out.solver.certificate)
      cert.push_back({{"equation", eq}, {"multiplier", to_string(mult)}});
    j["certificate"] = cert;
  }
  if (out.reproduction.performed) {
    j["reproduction"] = {{"points", out.reproduction.points},
                         {"mismatches", out.reproduction.mismatches},
                         {"seed", out.reproduction.seed}};
  }
  j["narrative"] = out.narrative;
  return j;
}

/// Run manifest: command echo, parameters, library version, timestamp, and
/// every artifact written. The timestamp lives only here, never in artifacts,
/// so artifact bytes stay reproducible.
class RunManifest {
 public:
  RunManifest(std::string command, Json parameters)
      : command_(std::move(command)), parameters_(std::move(parameters)) {}

  void add_output(const std::string& path) { outputs_.push_back(path); }

  Json to_json() const {
    Json j;
    j["command"] = command_;
    j["parameters"] = parameters_;
    j["versions"] = {{"vorospline", kVersion}};
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    j["timestamp"] = buf;
    j["outputs"] = outputs_;
    return j;
  }

 private:
  std::string command_;
  Json parameters_;
  std::vector<std::string> outputs_;
};

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace vorospline
