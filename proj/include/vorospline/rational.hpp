#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vorospline {

using BigInt = boost::multiprecision::cpp_int;

// Arbitrary-precision rational, always in lowest terms with positive
// denominator (maintained by the backend).
using Rational = boost::multiprecision::cpp_rational;

inline int sign(const Rational& x) { return x.sign(); }

inline Rational rational_abs(const Rational& x) { return x < 0 ? Rational(-x) : x; }

inline double to_double(const Rational& x) { return x.convert_to<double>(); }

inline long double to_long_double(const Rational& x) { return x.convert_to<long double>(); }

// Largest integer n with n <= x.
inline BigInt rational_floor(const Rational& x) {
  BigInt q = numerator(x) / denominator(x);
  if (numerator(x) < 0 && q * denominator(x) != numerator(x)) --q;
  return q;
}

inline BigInt rational_ceil(const Rational& x) { return -rational_floor(-x); }

// Renders "p" when the denominator is 1, otherwise "p/q".
inline std::string to_string(const Rational& x) {
  std::string s = numerator(x).str();
  if (denominator(x) != 1) {
    s += '/';
    s += denominator(x).str();
  }
  return s;
}

namespace detail {

inline bool parse_bigint(std::string_view text, size_t& pos, BigInt& out) {
  size_t start = pos;
  bool neg = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    neg = text[pos] == '-';
    ++pos;
  }
  size_t digits_begin = pos;
  while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
  if (pos == digits_begin) {
    pos = start;
    return false;
  }
  out = BigInt(std::string(text.substr(digits_begin, pos - digits_begin)));
  if (neg) out = -out;
  return true;
}

// Parses "p" or "p/q" starting at pos; advances pos past the consumed text.
inline bool parse_rational_at(std::string_view text, size_t& pos, Rational& out) {
  BigInt num;
  if (!parse_bigint(text, pos, num)) return false;
  BigInt den = 1;
  if (pos < text.size() && text[pos] == '/') {
    size_t save = pos;
    ++pos;
    if (!parse_bigint(text, pos, den) || den <= 0) {
      pos = save;
      return false;
    }
  }
  out = Rational(num, den);
  return true;
}

}  // namespace detail

// Inverse of to_string. Throws std::invalid_argument on malformed input.
inline Rational parse_rational(std::string_view text) {
  size_t pos = 0;
  Rational r;
  if (!detail::parse_rational_at(text, pos, r) || pos != text.size())
    throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
  return r;
}

}  // namespace vorospline
