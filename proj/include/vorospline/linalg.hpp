#pragma once

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

#include "vorospline/quadratic.hpp"

namespace vorospline {

using Vec = std::vector<QuadExt>;

inline QuadExt dot(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw std::invalid_argument("dot: dimension mismatch");
  QuadExt s;
  for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline Vec operator+(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw std::invalid_argument("vec add: dimension mismatch");
  Vec r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
  return r;
}

inline Vec operator-(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw std::invalid_argument("vec sub: dimension mismatch");
  Vec r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
  return r;
}

inline Vec operator*(const QuadExt& c, const Vec& x) {
  Vec r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = c * x[i];
  return r;
}

inline Vec unit_vec(size_t n, size_t i) {
  Vec e(n, QuadExt(0));
  e.at(i) = QuadExt(1);
  return e;
}

/// Dense matrix over one quadratic extension. Dimensions in this project
/// never exceed a dozen, so no attempt at sparsity is made.
class Matrix {
 public:
  Matrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), m_(rows * cols) {
    if (rows == 0 || cols == 0) throw std::invalid_argument("Matrix: empty dimensions");
  }

  static Matrix identity(size_t n) {
    Matrix I(n, n);
    for (size_t i = 0; i < n; ++i) I(i, i) = QuadExt(1);
    return I;
  }

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }

  QuadExt& operator()(size_t r, size_t c) { return m_.at(r * cols_ + c); }
  const QuadExt& operator()(size_t r, size_t c) const { return m_.at(r * cols_ + c); }

  /// Image of v under the matrix (columns are the images of the basis).
  Vec apply(const Vec& v) const {
    if (v.size() != cols_) throw std::invalid_argument("Matrix::apply: dimension mismatch");
    Vec out(rows_, QuadExt(0));
    for (size_t r = 0; r < rows_; ++r)
      for (size_t c = 0; c < cols_; ++c) out[r] += (*this)(r, c) * v[c];
    return out;
  }

  Vec column(size_t c) const {
    Vec out(rows_);
    for (size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
  }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (size_t r = 0; r < rows_; ++r)
      for (size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  friend Matrix operator*(const Matrix& x, const Matrix& y) {
    if (x.cols_ != y.rows_) throw std::invalid_argument("Matrix mul: dimension mismatch");
    Matrix p(x.rows_, y.cols_);
    for (size_t r = 0; r < x.rows_; ++r)
      for (size_t c = 0; c < y.cols_; ++c) {
        QuadExt s;
        for (size_t k = 0; k < x.cols_; ++k) s += x(r, k) * y(k, c);
        p(r, c) = s;
      }
    return p;
  }

  friend bool operator==(const Matrix& x, const Matrix& y) {
    return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.m_ == y.m_;
  }

  QuadExt determinant() const {
    if (rows_ != cols_) throw std::invalid_argument("determinant: non-square");
    Matrix w(*this);
    QuadExt det(1);
    for (size_t col = 0; col < cols_; ++col) {
      size_t pivot = col;
      while (pivot < rows_ && w(pivot, col).is_zero()) ++pivot;
      if (pivot == rows_) return QuadExt(0);
      if (pivot != col) {
        for (size_t c = 0; c < cols_; ++c) std::swap(w(pivot, c), w(col, c));
        det = -det;
      }
      det *= w(col, col);
      for (size_t r = col + 1; r < rows_; ++r) {
        if (w(r, col).is_zero()) continue;
        QuadExt f = w(r, col) / w(col, col);
        for (size_t c = col; c < cols_; ++c) w(r, c) -= f * w(col, c);
      }
    }
    return det;
  }

  /// Exact inverse by Gauss-Jordan elimination. Throws on singular input.
  Matrix inverse() const {
    if (rows_ != cols_) throw std::invalid_argument("inverse: non-square");
    Matrix w(*this);
    Matrix inv = identity(rows_);
    for (size_t col = 0; col < cols_; ++col) {
      size_t pivot = col;
      while (pivot < rows_ && w(pivot, col).is_zero()) ++pivot;
      if (pivot == rows_) throw std::domain_error("inverse: singular matrix");
      if (pivot != col)
        for (size_t c = 0; c < cols_; ++c) {
          std::swap(w(pivot, c), w(col, c));
          std::swap(inv(pivot, c), inv(col, c));
        }
      const QuadExt p = w(col, col);
      for (size_t c = 0; c < cols_; ++c) {
        w(col, c) /= p;
        inv(col, c) /= p;
      }
      for (size_t r = 0; r < rows_; ++r) {
        if (r == col || w(r, col).is_zero()) continue;
        const QuadExt f = w(r, col);
        for (size_t c = 0; c < cols_; ++c) {
          w(r, c) -= f * w(col, c);
          inv(r, c) -= f * inv(col, c);
        }
      }
    }
    return inv;
  }

 private:
  size_t rows_, cols_;
  std::vector<QuadExt> m_;
};

}  // namespace vorospline
