#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vorospline/arrangement.hpp"

namespace vorospline {

/// Coefficient unknown: one per (family, fine cell) that shows up in the
/// arrangement.
struct Unknown {
  size_t family = 0;
  CellId cell;

  friend bool operator<(const Unknown& a, const Unknown& b) {
    if (a.family != b.family) return a.family < b.family;
    return a.cell < b.cell;
  }
  friend bool operator==(const Unknown& a, const Unknown& b) {
    return a.family == b.family && a.cell == b.cell;
  }
};

inline std::string to_string(const Unknown& u) {
  return "f" + std::to_string(u.family) + ":" + to_string(u.cell);
}

/// One equation per region: the member coefficients sum to the 0/1 target.
struct RefinementSystem {
  std::vector<Unknown> unknowns;       // index -> unknown, sorted
  std::vector<std::vector<int>> rows;  // per equation: sorted unknown indices
  std::vector<int> targets;            // per equation: 0 or 1

  size_t var_count() const { return unknowns.size(); }
  size_t equation_count() const { return rows.size(); }
};

inline RefinementSystem assemble_system(const Arrangement& arr) {
  std::map<Unknown, int> index;
  for (const Region& r : arr.regions)
    for (size_t j = 0; j < r.membership.size(); ++j)
      index.emplace(Unknown{j, r.membership[j]}, 0);
  RefinementSystem sys;
  sys.unknowns.reserve(index.size());
  for (auto& [u, idx] : index) {
    idx = static_cast<int>(sys.unknowns.size());
    sys.unknowns.push_back(u);
  }
  for (const Region& r : arr.regions) {
    std::vector<int> vars;
    vars.reserve(r.membership.size());
    for (size_t j = 0; j < r.membership.size(); ++j)
      vars.push_back(index.at(Unknown{j, r.membership[j]}));
    std::sort(vars.begin(), vars.end());
    sys.rows.push_back(std::move(vars));
    sys.targets.push_back(r.target);
  }
  return sys;
}

struct FeasibilityResult {
  enum class Verdict { feasible, infeasible };
  Verdict verdict = Verdict::feasible;
  // Feasible: one exact solution, free variables pinned to zero.
  std::map<int, Rational> weights;
  // Infeasible: rational multipliers on original equations whose combination
  // has all-zero coefficients and right side exactly 1.
  std::vector<std::pair<int, Rational>> certificate;

  bool feasible() const { return verdict == Verdict::feasible; }
};

namespace detail {

using SparseRow = std::map<int, Rational>;

struct WorkRow {
  SparseRow coeffs;
  Rational rhs;
  SparseRow multipliers;  // combination of original equations forming this row
};

// row -= f * pivot (including rhs and multiplier bookkeeping).
inline void eliminate(WorkRow& row, const WorkRow& pivot, const Rational& f) {
  for (const auto& [c, v] : pivot.coeffs) {
    auto it = row.coeffs.find(c);
    if (it == row.coeffs.end()) {
      row.coeffs.emplace(c, -f * v);
    } else {
      it->second -= f * v;
      if (it->second.is_zero()) row.coeffs.erase(it);
    }
  }
  row.rhs -= f * pivot.rhs;
  for (const auto& [k, v] : pivot.multipliers) {
    auto it = row.multipliers.find(k);
    if (it == row.multipliers.end()) {
      row.multipliers.emplace(k, -f * v);
    } else {
      it->second -= f * v;
      if (it->second.is_zero()) row.multipliers.erase(it);
    }
  }
}

}  // namespace detail

/// Independent certificate check: recombines the original 0/1 equations with
/// the certificate multipliers and verifies the result is 0 = nonzero.
inline bool verify_certificate(const RefinementSystem& sys,
                               const std::vector<std::pair<int, Rational>>& certificate) {
  if (certificate.empty()) return false;
  std::map<int, Rational> combo;
  Rational rhs = 0;
  for (const auto& [eq, mult] : certificate) {
    if (eq < 0 || eq >= static_cast<int>(sys.rows.size())) return false;
    for (int var : sys.rows[eq]) combo[var] += mult;
    rhs += mult * sys.targets[eq];
  }
  for (const auto& [var, value] : combo)
    if (!value.is_zero()) return false;
  return !rhs.is_zero();
}

/// Checks a full assignment against every equation (absent vars count as 0).
inline bool verify_solution(const RefinementSystem& sys, const std::map<int, Rational>& weights) {
  for (size_t e = 0; e < sys.rows.size(); ++e) {
    Rational sum = 0;
    for (int var : sys.rows[e]) {
      auto it = weights.find(var);
      if (it != weights.end()) sum += it->second;
    }
    if (sum != sys.targets[e]) return false;
  }
  return true;
}

/// Exact sparse Gaussian elimination over the rationals. Free variables are
/// set to zero; infeasibility comes with multipliers reconstructed from the
/// elimination trace and re-verified against the original system.
inline FeasibilityResult solve_exact(const RefinementSystem& sys) {
  std::vector<detail::WorkRow> active;
  active.reserve(sys.rows.size());
  for (size_t e = 0; e < sys.rows.size(); ++e) {
    detail::WorkRow row;
    for (int var : sys.rows[e]) row.coeffs[var] += 1;
    row.rhs = sys.targets[e];
    row.multipliers[static_cast<int>(e)] = 1;
    active.push_back(std::move(row));
  }

  FeasibilityResult result;
  const auto conclude_infeasible = [&](const detail::WorkRow& row) {
    result.verdict = FeasibilityResult::Verdict::infeasible;
    result.certificate.assign(row.multipliers.begin(), row.multipliers.end());
    // Normalize so the combined right side is exactly 1.
    for (auto& [eq, mult] : result.certificate) mult /= row.rhs;
    if (!verify_certificate(sys, result.certificate))
      throw std::logic_error("solve_exact: certificate failed independent verification");
  };

  std::vector<detail::WorkRow> pivots;
  std::vector<int> pivot_cols;
  std::vector<char> alive(active.size(), 1);

  for (int col = 0; col < static_cast<int>(sys.var_count()); ++col) {
    // Fewest-nonzeros pivot keeps fill-in down; ties go to the lowest row.
    int best = -1;
    size_t best_nnz = 0;
    for (size_t r = 0; r < active.size(); ++r) {
      if (!alive[r]) continue;
      const auto it = active[r].coeffs.find(col);
      if (it == active[r].coeffs.end()) continue;
      const size_t nnz = active[r].coeffs.size();
      if (best < 0 || nnz < best_nnz) {
        best = static_cast<int>(r);
        best_nnz = nnz;
      }
    }
    if (best < 0) continue;  // free column
    detail::WorkRow pivot = std::move(active[best]);
    alive[best] = 0;
    for (size_t r = 0; r < active.size(); ++r) {
      if (!alive[r]) continue;
      auto it = active[r].coeffs.find(col);
      if (it == active[r].coeffs.end()) continue;
      const Rational f = it->second / pivot.coeffs.at(col);
      detail::eliminate(active[r], pivot, f);
      if (active[r].coeffs.empty()) {
        if (!active[r].rhs.is_zero()) {
          conclude_infeasible(active[r]);
          return result;
        }
        alive[r] = 0;  // redundant row
      }
    }
    pivots.push_back(std::move(pivot));
    pivot_cols.push_back(col);
  }

  for (size_t r = 0; r < active.size(); ++r) {
    if (!alive[r]) continue;
    if (active[r].coeffs.empty() && !active[r].rhs.is_zero()) {
      conclude_infeasible(active[r]);
      return result;
    }
  }

  // Back substitution; unpivoted variables stay 0.
  std::map<int, Rational> x;
  for (size_t k = pivots.size(); k-- > 0;) {
    const detail::WorkRow& row = pivots[k];
    const int col = pivot_cols[k];
    Rational rhs = row.rhs;
    for (const auto& [c, v] : row.coeffs) {
      if (c == col) continue;
      auto it = x.find(c);
      if (it != x.end()) rhs -= v * it->second;
    }
    x[col] = rhs / row.coeffs.at(col);
  }
  for (int var = 0; var < static_cast<int>(sys.var_count()); ++var) x.emplace(var, 0);

  if (!verify_solution(sys, x))
    throw std::logic_error("solve_exact: solution failed exact verification");
  result.verdict = FeasibilityResult::Verdict::feasible;
  result.weights = std::move(x);
  return result;
}

}  // namespace vorospline
