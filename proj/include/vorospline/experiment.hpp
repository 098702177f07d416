#pragma once

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "vorospline/metrics.hpp"
#include "vorospline/report_io.hpp"

namespace vorospline {

struct ErrorExperimentRow {
  double eps = 0;
  int level = 0;
  double error = 0;
  int quadrature_depth = 0;
};

struct ErrorExperimentResult {
  TessKind kind = TessKind::hexagonal;
  std::vector<ErrorExperimentRow> rows;
  std::vector<std::string> anomalies;  // levels where refining raised the error
};

/// Smoothed-indicator approximation errors across dyadic refinement levels.
///
/// Level i uses cells scaled by 2^-i of the level-0 tessellation, with the
/// level-0 cell fixed: a diameter-4 hexagon centered at the origin, or the
/// square [-2,2]^2 (whose corners stay on all finer grids, so the square
/// spaces are nested). The quadrature depth starts fine enough to resolve the
/// smoothing band and increases until the error moves by less than 1%.
inline ErrorExperimentResult run_error_experiment(TessKind kind,
                                                  const std::vector<double>& eps_list,
                                                  const std::vector<int>& levels) {
  if (kind != TessKind::hexagonal && kind != TessKind::square)
    throw std::invalid_argument("error experiment supports hexagonal and square kinds");
  if (eps_list.empty()) throw std::invalid_argument("error experiment: empty epsilon list");
  if (levels.empty()) throw std::invalid_argument("error experiment: empty level list");

  const Point2 kSquareShift{QuadExt(-2), QuadExt(-2)};
  const auto level_tess = [&](int level) {
    const Rational scale = kind == TessKind::hexagonal
                               ? Rational(1, 1LL << level)
                               : Rational(4, 1LL << level);
    const Point2 shift =
        kind == TessKind::hexagonal ? Point2{QuadExt(0), QuadExt(0)} : kSquareShift;
    return make_tessellation(kind, scale, shift);
  };
  const ConvexPolygon level0_cell = level_tess(0).cell({0, 0, 0});
  const Box window{QuadExt(-4), QuadExt(-4), QuadExt(4), QuadExt(4)};

  ErrorExperimentResult result;
  result.kind = kind;
  for (double eps : eps_list) {
    const SmoothedIndicator f(level0_cell, eps);  // throws if eps >= inradius
    std::vector<double> errs;
    for (int level : levels) {
      if (level < 0) throw std::invalid_argument("error experiment: negative level");
      const int depth0 =
          std::max(6, static_cast<int>(std::ceil(std::log2(4.0 / std::max(eps, 1e-6)))));
      const StableError err = stable_l2_error(f, level_tess(level), window, 0.01, depth0, 13);
      result.rows.push_back({eps, level, err.value, err.depth});
      errs.push_back(err.value);
    }
    for (size_t k = 1; k < errs.size(); ++k) {
      if (errs[k] > errs[k - 1]) {
        std::ostringstream note;
        note << "eps=" << format_double(eps) << ": err(level " << levels[k] << ") = "
             << format_double(errs[k]) << " exceeds err(level " << levels[k - 1]
             << ") = " << format_double(errs[k - 1]);
        result.anomalies.push_back(note.str());
      }
    }
  }
  return result;
}

inline std::string error_experiment_csv(const ErrorExperimentResult& result) {
  std::ostringstream csv;
  csv << "epsilon,level,error,quadrature_resolution\n";
  for (const ErrorExperimentRow& row : result.rows)
    csv << format_double(row.eps, 6) << ',' << row.level << ',' << format_double(row.error)
        << ',' << row.quadrature_depth << '\n';
  for (const std::string& note : result.anomalies) csv << "# anomaly: " << note << '\n';
  if (result.anomalies.empty()) csv << "# anomaly: none\n";
  return csv.str();
}

}  // namespace vorospline
