#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "vorospline/rational.hpp"

namespace vorospline {

/// Exact element a + b*sqrt(d) of a real quadratic field.
///
/// The radicand is normalized to its square-free core at construction
/// (sqrt(12) becomes 2*sqrt(3)); purely rational values carry d == 1.
/// Values from different extensions never mix: combining b != 0 operands
/// with distinct radicands throws.
class QuadExt {
 public:
  QuadExt() : a_(0), b_(0), d_(1) {}
  QuadExt(const Rational& a) : a_(a), b_(0), d_(1) {}  // NOLINT: implicit by design
  QuadExt(long long a) : a_(a), b_(0), d_(1) {}        // NOLINT
  QuadExt(const Rational& a, const Rational& b, long long d) : a_(a), b_(b), d_(d) {
    normalize();
  }

  const Rational& rational_part() const { return a_; }
  const Rational& radical_part() const { return b_; }
  long long radicand() const { return d_; }
  bool is_rational() const { return b_.is_zero(); }
  bool is_zero() const { return a_.is_zero() && b_.is_zero(); }

  /// Exact sign in {-1, 0, +1}, decided in integer arithmetic.
  int sign() const {
    const int sa = a_.sign();
    const int sb = b_.sign();
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // Opposite signs: compare a^2 with d*b^2; sign(a+b*sqrt(d)) follows the
    // larger magnitude.
    const Rational a2 = a_ * a_;
    const Rational db2 = b_ * b_ * d_;
    const int cmp = (a2 > db2) - (a2 < db2);
    if (cmp == 0) return 0;  // unreachable for square-free d >= 2, kept for d == 1
    return cmp > 0 ? sa : sb;
  }

  QuadExt operator-() const { return QuadExt(-a_, -b_, d_, unchecked_tag{}); }

  QuadExt& operator+=(const QuadExt& o) {
    d_ = merge_radicand(o);
    a_ += o.a_;
    b_ += o.b_;
    if (b_.is_zero()) d_ = 1;
    return *this;
  }
  QuadExt& operator-=(const QuadExt& o) {
    d_ = merge_radicand(o);
    a_ -= o.a_;
    b_ -= o.b_;
    if (b_.is_zero()) d_ = 1;
    return *this;
  }
  QuadExt& operator*=(const QuadExt& o) {
    const long long d = merge_radicand(o);
    const Rational a = a_ * o.a_ + Rational(d) * b_ * o.b_;
    const Rational b = a_ * o.b_ + b_ * o.a_;
    a_ = a;
    b_ = b;
    d_ = b_.is_zero() ? 1 : d;
    return *this;
  }
  QuadExt& operator/=(const QuadExt& o) {
    if (o.is_zero()) throw std::domain_error("QuadExt: division by zero");
    const long long d = merge_radicand(o);
    // Multiply by the conjugate; the norm a^2 - d b^2 is nonzero for o != 0.
    const Rational norm = o.a_ * o.a_ - Rational(d) * o.b_ * o.b_;
    const Rational a = (a_ * o.a_ - Rational(d) * b_ * o.b_) / norm;
    const Rational b = (b_ * o.a_ - a_ * o.b_) / norm;
    a_ = a;
    b_ = b;
    d_ = b_.is_zero() ? 1 : d;
    return *this;
  }

  friend QuadExt operator+(QuadExt x, const QuadExt& y) { return x += y; }
  friend QuadExt operator-(QuadExt x, const QuadExt& y) { return x -= y; }
  friend QuadExt operator*(QuadExt x, const QuadExt& y) { return x *= y; }
  friend QuadExt operator/(QuadExt x, const QuadExt& y) { return x /= y; }

  friend bool operator==(const QuadExt& x, const QuadExt& y) {
    return x.a_ == y.a_ && x.b_ == y.b_ && (x.b_.is_zero() || x.d_ == y.d_);
  }
  friend bool operator!=(const QuadExt& x, const QuadExt& y) { return !(x == y); }
  friend bool operator<(const QuadExt& x, const QuadExt& y) { return (x - y).sign() < 0; }
  friend bool operator>(const QuadExt& x, const QuadExt& y) { return (x - y).sign() > 0; }
  friend bool operator<=(const QuadExt& x, const QuadExt& y) { return (x - y).sign() <= 0; }
  friend bool operator>=(const QuadExt& x, const QuadExt& y) { return (x - y).sign() >= 0; }

  double to_double() const {
    double v = vorospline::to_double(a_);
    if (!b_.is_zero()) v += vorospline::to_double(b_) * std::sqrt(static_cast<double>(d_));
    return v;
  }
  long double to_long_double() const {
    long double v = vorospline::to_long_double(a_);
    if (!b_.is_zero()) v += vorospline::to_long_double(b_) * sqrtl(static_cast<long double>(d_));
    return v;
  }

 private:
  struct unchecked_tag {};
  QuadExt(Rational a, Rational b, long long d, unchecked_tag)
      : a_(std::move(a)), b_(std::move(b)), d_(d) {}

  void normalize() {
    if (d_ <= 0) throw std::invalid_argument("QuadExt: radicand must be positive");
    // Pull square factors out of the radicand into the coefficient.
    long long d = d_;
    long long root = 1;
    for (long long p = 2; p * p <= d; ++p) {
      while (d % (p * p) == 0) {
        d /= p * p;
        root *= p;
      }
    }
    if (root != 1) b_ *= root;
    d_ = d;
    if (d_ == 1) {
      a_ += b_;
      b_ = 0;
    }
    if (b_.is_zero()) d_ = 1;
  }

  long long merge_radicand(const QuadExt& o) const {
    if (b_.is_zero() || d_ == 1) return o.d_;
    if (o.b_.is_zero() || o.d_ == 1) return d_;
    if (d_ != o.d_)
      throw std::invalid_argument("QuadExt: mixing radicands " + std::to_string(d_) + " and " +
                                  std::to_string(o.d_));
    return d_;
  }

  Rational a_, b_;
  long long d_;
};

inline int sign(const QuadExt& x) { return x.sign(); }

inline QuadExt quad_abs(const QuadExt& x) { return x.sign() < 0 ? -x : x; }

/// Largest integer <= x: float seed corrected by exact comparisons.
inline long long quad_floor(const QuadExt& x) {
  long long k = static_cast<long long>(std::floor(x.to_double()));
  while (QuadExt(k) > x) --k;
  while (QuadExt(k + 1) <= x) ++k;
  return k;
}

inline long long quad_ceil(const QuadExt& x) { return -quad_floor(-x); }

/// Renders the canonical text form: "p/q", "r/s*sqrt(d)" or "p/q+r/s*sqrt(d)"
/// (with "+" becoming "-" for negative radical coefficients).
inline std::string to_string(const QuadExt& x) {
  if (x.is_rational()) return to_string(x.rational_part());
  std::string radical;
  if (x.radical_part() < 0)
    radical = "-" + to_string(Rational(-x.radical_part()));
  else
    radical = to_string(x.radical_part());
  radical += "*sqrt(" + std::to_string(x.radicand()) + ")";
  if (x.rational_part().is_zero()) return radical;
  std::string s = to_string(x.rational_part());
  if (x.radical_part() > 0) s += '+';
  return s + radical;
}

/// Inverse of to_string; also accepts explicit "+0*sqrt(d)" tails and a
/// leading sign. Throws std::invalid_argument on malformed input.
inline QuadExt parse_quadext(std::string_view text) {
  const auto fail = [&]() -> QuadExt {
    throw std::invalid_argument("malformed quadratic number: '" + std::string(text) + "'");
  };
  size_t pos = 0;
  Rational first;
  if (!detail::parse_rational_at(text, pos, first)) return fail();
  if (pos == text.size()) return QuadExt(first);

  Rational a = 0, b = 0;
  if (text.compare(pos, 6, "*sqrt(") == 0) {
    b = first;
  } else {
    a = first;
    if (text[pos] != '+' && text[pos] != '-') return fail();
    if (!detail::parse_rational_at(text, pos, b)) return fail();
    if (text.compare(pos, 6, "*sqrt(") != 0) return fail();
  }
  pos += 6;
  BigInt d;
  if (!detail::parse_bigint(text, pos, d) || d <= 0) return fail();
  if (pos >= text.size() || text[pos] != ')') return fail();
  ++pos;
  if (pos != text.size()) return fail();
  return QuadExt(a, b, d.convert_to<long long>());
}

inline std::ostream& operator<<(std::ostream& os, const QuadExt& x) { return os << to_string(x); }

}  // namespace vorospline
