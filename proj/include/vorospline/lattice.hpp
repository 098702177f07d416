#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vorospline/linalg.hpp"

namespace vorospline {

enum class LatticeFamily {
  A,
  Astar,
  D,
  Dstar,
  CartesianCube,
  CubeDiagonalSplit,
  E6,
  E7,
  E8,
  Triangular2D,
};

inline std::string family_name(LatticeFamily f) {
  switch (f) {
    case LatticeFamily::A: return "A";
    case LatticeFamily::Astar: return "Astar";
    case LatticeFamily::D: return "D";
    case LatticeFamily::Dstar: return "Dstar";
    case LatticeFamily::CartesianCube: return "cube";
    case LatticeFamily::CubeDiagonalSplit: return "cube-diag";
    case LatticeFamily::E6: return "E6";
    case LatticeFamily::E7: return "E7";
    case LatticeFamily::E8: return "E8";
    case LatticeFamily::Triangular2D: return "tri2d";
  }
  return "?";
}

/// Root lattice with an exact generator matrix (columns are basis vectors)
/// and, where the generator route does not supply them, an explicitly stored
/// pair of neighbor vectors for the obtuse-angle test.
struct Lattice {
  LatticeFamily family;
  int n = 0;
  std::optional<Matrix> generator;
  std::optional<std::pair<Vec, Vec>> stored_pair;
};

namespace detail {

inline Matrix ones_perturbation(int n, const QuadExt& c) {
  Matrix g = Matrix::identity(n);
  for (int r = 0; r < n; ++r)
    for (int col = 0; col < n; ++col) g(r, col) += c;
  return g;
}

inline Matrix d_family_generator(int n) {
  Matrix g(n, n);
  for (int i = 0; i < n - 1; ++i) g(i, i) = QuadExt(1);
  g(n - 2, n - 1) = QuadExt(-1);
  for (int j = 0; j < n; ++j) g(n - 1, j) = QuadExt(-1);
  return g;
}

inline Vec half_ones_with_last(int n, const QuadExt& last) {
  Vec v(n, QuadExt(Rational(1, 2)));
  v[n - 1] = last;
  return v;
}

}  // namespace detail

inline Lattice make_lattice(LatticeFamily family, int n = 0) {
  const auto require = [&](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("make_lattice: ") + what);
  };
  Lattice lat{family, n, std::nullopt, std::nullopt};
  switch (family) {
    case LatticeFamily::A: {
      require(n >= 2, "A_n needs n >= 2");
      // I_n + c_n J_n with c_n = (-1 + sqrt(n+1))/n; the Gram matrix of the
      // columns is exactly I + J.
      const QuadExt c(Rational(-1, n), Rational(1, n), n + 1);
      lat.generator = detail::ones_perturbation(n, c);
      break;
    }
    case LatticeFamily::Astar: {
      require(n >= 2, "A*_n needs n >= 2");
      // c*_n = (-1 + 1/sqrt(n+1))/n; column Gram is I - J/(n+1).
      const QuadExt c(Rational(-1, n), Rational(1, BigInt(n) * (n + 1)), n + 1);
      lat.generator = detail::ones_perturbation(n, c);
      break;
    }
    case LatticeFamily::D: {
      require(n >= 3, "D_n needs n >= 3");
      lat.generator = detail::d_family_generator(n);
      break;
    }
    case LatticeFamily::Dstar: {
      require(n >= 3, "D*_n needs n >= 3");
      lat.generator = detail::d_family_generator(n).inverse().transposed();
      // Adjacent dual-basis neighbors e1 - (e_{n-1}+e_n)/2 and
      // e1 - e_{n-1} - e_n; their inner product is 2 for every n >= 3.
      Vec v(n, QuadExt(0)), w(n, QuadExt(0));
      v[0] = QuadExt(1);
      v[n - 2] = v[n - 1] = QuadExt(Rational(-1, 2));
      w[0] = QuadExt(1);
      w[n - 2] = w[n - 1] = QuadExt(-1);
      lat.stored_pair = {std::move(v), std::move(w)};
      break;
    }
    case LatticeFamily::CartesianCube: {
      require(n >= 2, "cube lattice needs n >= 2");
      lat.generator = Matrix::identity(n);
      break;
    }
    case LatticeFamily::CubeDiagonalSplit: {
      require(n >= 2, "diagonally split cube needs n >= 2");
      lat.generator = Matrix::identity(n);
      // The split adds the diagonal direction; the tested pair is e1 and the
      // all-ones diagonal.
      Vec v = unit_vec(n, 0);
      Vec w(n, QuadExt(1));
      lat.stored_pair = {std::move(v), std::move(w)};
      break;
    }
    case LatticeFamily::E6: {
      require(n == 0 || n == 6, "E6 is six-dimensional");
      lat.n = 6;
      Vec v = unit_vec(6, 0) + unit_vec(6, 1);
      lat.stored_pair = {std::move(v),
                         detail::half_ones_with_last(6, QuadExt(0, Rational(1, 2), 3))};
      break;
    }
    case LatticeFamily::E7: {
      require(n == 0 || n == 7, "E7 is seven-dimensional");
      lat.n = 7;
      Vec v = unit_vec(7, 0) + unit_vec(7, 1);
      lat.stored_pair = {std::move(v),
                         detail::half_ones_with_last(7, QuadExt(0, Rational(1, 2), 2))};
      break;
    }
    case LatticeFamily::E8: {
      require(n == 0 || n == 8, "E8 is eight-dimensional");
      lat.n = 8;
      Vec v = unit_vec(8, 0) + unit_vec(8, 1);
      lat.stored_pair = {std::move(v), Vec(8, QuadExt(Rational(1, 2)))};
      break;
    }
    case LatticeFamily::Triangular2D: {
      require(n == 0 || n == 2, "triangular lattice is planar");
      lat.n = 2;
      Vec v = unit_vec(2, 0);
      Vec w{QuadExt(Rational(-1, 2)), QuadExt(0, Rational(1, 2), 3)};
      lat.stored_pair = {std::move(v), std::move(w)};
      break;
    }
  }
  return lat;
}

/// Positions of two adjacent lattice neighbors of the origin: the images of
/// e1 and e1+e2 under the generator, or the explicitly stored pair.
inline std::pair<Vec, Vec> neighbor_pair(const Lattice& lat) {
  if (lat.stored_pair) return *lat.stored_pair;
  const Matrix& g = *lat.generator;
  Vec v = g.apply(unit_vec(g.cols(), 0));
  Vec w = g.apply(unit_vec(g.cols(), 0) + unit_vec(g.cols(), 1));
  return {std::move(v), std::move(w)};
}

/// The exact neighbor inner product used to classify the family.
///
/// For the A families the product is evaluated as (n + 4c + c^2)/n with
/// c = n*c_n, which simplifies to the closed forms
///   A_n  : (2/n)(n + sqrt(n+1) - 1)
///   A*_n : (n^2 - 2n - 2 + 2 sqrt(n+1)) / (n(n+1)).
/// The cube uses the perpendicular facet neighbors e1, e2.
inline QuadExt obtuse_inner_product(const Lattice& lat) {
  const int n = lat.n;
  switch (lat.family) {
    case LatticeFamily::A:
    case LatticeFamily::Astar: {
      const QuadExt c = lat.family == LatticeFamily::A
                            ? QuadExt(-1, 1, n + 1)
                            : QuadExt(-1, Rational(1, n + 1), n + 1);
      return (QuadExt(n) + QuadExt(4) * c + c * c) / QuadExt(n);
    }
    case LatticeFamily::CartesianCube:
      return dot(unit_vec(n, 0), unit_vec(n, 1));
    default: {
      auto [v, w] = neighbor_pair(lat);
      return dot(v, w);
    }
  }
}

struct RuledOutResult {
  bool ruled_out;
  QuadExt product;
  std::string reason;
};

/// A strictly positive neighbor product means abutting Voronoi facets meet
/// with an obtuse angle, which rules out refinability.
inline RuledOutResult refinability_ruled_out(const Lattice& lat) {
  RuledOutResult r;
  r.product = obtuse_inner_product(lat);
  const int s = r.product.sign();
  r.ruled_out = s > 0;
  const std::string prod = to_string(r.product);
  if (s > 0)
    r.reason = "adjacent neighbor inner product " + prod +
               " is strictly positive: facets meet with an obtuse angle, so the "
               "indicator space is not refinable";
  else
    r.reason = "adjacent neighbor inner product " + prod + " is " +
               (s == 0 ? "zero" : "negative") + ": the obtuse-angle criterion does not apply";
  return r;
}

/// Closed-form family products, kept separate from the computation above so
/// tests can compare two independent routes.
inline QuadExt family_product_closed_form(LatticeFamily f, int n) {
  switch (f) {
    case LatticeFamily::A:
      return QuadExt(Rational(2, n)) * QuadExt(n - 1, 1, n + 1);
    case LatticeFamily::Astar: {
      const Rational scale(1, BigInt(n) * (n + 1));
      return QuadExt(scale) * QuadExt(Rational(BigInt(n) * n - 2 * n - 2), 2, n + 1);
    }
    case LatticeFamily::D: return QuadExt(3);
    case LatticeFamily::Dstar: return QuadExt(2);
    case LatticeFamily::CartesianCube: return QuadExt(0);
    case LatticeFamily::CubeDiagonalSplit: return QuadExt(1);
    case LatticeFamily::E6:
    case LatticeFamily::E7:
    case LatticeFamily::E8: return QuadExt(1);
    case LatticeFamily::Triangular2D: return QuadExt(Rational(-1, 2));
  }
  throw std::logic_error("family_product_closed_form: unknown family");
}

/// Caveats that accompany machine verdicts in reports.
inline std::vector<std::string> classification_notes(const Lattice& lat) {
  std::vector<std::string> notes;
  notes.push_back(
      "assumes the reflection of a Voronoi cell across each facet is again a "
      "cell (holds for these root lattices); not verified geometrically");
  if (lat.family == LatticeFamily::Astar && lat.n == 2)
    notes.push_back(
        "A*_2 product (-1+1*sqrt(3))/3 is positive but small; the family "
        "formula is evaluated as printed");
  if (lat.family == LatticeFamily::Triangular2D)
    notes.push_back(
        "product taken as -1/2 from the pair (1,0), (-1/2, sqrt(3)/2); "
        "a sign-flipped reading (+1/2) would contradict the triangular "
        "tiling's known refinability");
  if (lat.family == LatticeFamily::Dstar)
    notes.push_back(
        "D*_n pair is the adjacent dual-basis pair e1-(e_{n-1}+e_n)/2, "
        "e1-e_{n-1}-e_n, whose product is 2 for every n >= 3; the images of "
        "e1, e1+e2 under the inverse-transpose generator give a smaller but "
        "still positive product");
  if (lat.family == LatticeFamily::A || lat.family == LatticeFamily::Astar)
    notes.push_back(
        "family product evaluated from the classification formula "
        "(n+4c+c^2)/n; the generator images of e1, e1+e2 have inner product "
        "3, also positive");
  return notes;
}

/// Parses CLI family specs: "A:5", "Astar:4", "D:3", "Dstar:3", "cube:4",
/// "cube-diag:4", "E6", "E7", "E8", "tri2d".
inline Lattice parse_family_spec(const std::string& spec) {
  std::string head = spec;
  int n = 0;
  if (auto colon = spec.find(':'); colon != std::string::npos) {
    head = spec.substr(0, colon);
    try {
      size_t used = 0;
      n = std::stoi(spec.substr(colon + 1), &used);
      if (colon + 1 + used != spec.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw std::invalid_argument("bad dimension in family spec '" + spec + "'");
    }
  }
  if (head == "A") return make_lattice(LatticeFamily::A, n);
  if (head == "Astar") return make_lattice(LatticeFamily::Astar, n);
  if (head == "D") return make_lattice(LatticeFamily::D, n);
  if (head == "Dstar") return make_lattice(LatticeFamily::Dstar, n);
  if (head == "cube") return make_lattice(LatticeFamily::CartesianCube, n);
  if (head == "cube-diag") return make_lattice(LatticeFamily::CubeDiagonalSplit, n);
  if (head == "E6") return make_lattice(LatticeFamily::E6, n);
  if (head == "E7") return make_lattice(LatticeFamily::E7, n);
  if (head == "E8") return make_lattice(LatticeFamily::E8, n);
  if (head == "tri2d") return make_lattice(LatticeFamily::Triangular2D, n);
  throw std::invalid_argument("unknown lattice family '" + spec + "'");
}

}  // namespace vorospline
