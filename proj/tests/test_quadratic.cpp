#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "vorospline/quadratic.hpp"

using vorospline::QuadExt;
using vorospline::Rational;

namespace {

QuadExt random_quad(std::mt19937_64& rng, long long d) {
  std::uniform_int_distribution<long long> num(-200, 200), den(1, 40);
  return QuadExt(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)), d);
}

}  // namespace

TEST_CASE("exact sign") {
  CHECK(QuadExt(1, 0, 3).sign() == 1);
  CHECK(QuadExt(0, 0, 3).sign() == 0);
  // a^2 = 4 exceeds d b^2 = 3 and a < 0, so -2 + sqrt(3) < 0.
  CHECK(QuadExt(-2, 1, 3).sign() == -1);
  CHECK((-2.0 + std::sqrt(3.0)) < 0.0);
  CHECK(QuadExt(2, -1, 3).sign() == 1);
  CHECK(QuadExt(-1, 1, 2).sign() == 1);
  CHECK(QuadExt(0, -5, 7).sign() == -1);
}

TEST_CASE("field arithmetic") {
  const QuadExt one_plus(1, 1, 3), one_minus(1, -1, 3);
  CHECK(one_plus * one_minus == QuadExt(-2));
  CHECK(QuadExt(0, 1, 3) * QuadExt(0, 1, 3) == QuadExt(3));
  const QuadExt inv = QuadExt(1) / one_plus;
  CHECK(inv == QuadExt(Rational(-1, 2), Rational(1, 2), 3));
  CHECK(inv * one_plus == QuadExt(1));
  CHECK_THROWS_AS(one_plus / QuadExt(0), std::domain_error);
}

TEST_CASE("radicand normalization") {
  CHECK(QuadExt(0, 1, 4) == QuadExt(2));       // sqrt(4) = 2
  CHECK(QuadExt(0, 1, 12) == QuadExt(0, 2, 3));  // sqrt(12) = 2 sqrt(3)
  CHECK(QuadExt(1, 3, 9) == QuadExt(10));
  CHECK(QuadExt(0, 1, 8).radicand() == 2);
  CHECK_THROWS_AS(QuadExt(0, 1, 0), std::invalid_argument);
}

TEST_CASE("mixing radicands is rejected; rationals embed everywhere") {
  const QuadExt r3(0, 1, 3), r2(0, 1, 2);
  CHECK_THROWS_AS(r3 + r2, std::invalid_argument);
  CHECK_THROWS_AS(r3 * r2, std::invalid_argument);
  CHECK((QuadExt(5) + r2) == QuadExt(5, 1, 2));
  CHECK((r3 * QuadExt(2)) == QuadExt(0, 2, 3));
}

TEST_CASE("sign agrees with extended-precision floating evaluation") {
  std::mt19937_64 rng(987654321);
  int checked = 0;
  for (int i = 0; i < 10000; ++i) {
    const QuadExt x = random_quad(rng, 3);
    const long double v = x.to_long_double();
    if (std::fabs(static_cast<double>(v)) <= 1e-6) continue;
    ++checked;
    CHECK(x.sign() == (v > 0 ? 1 : -1));
  }
  CHECK(checked > 9000);
}

TEST_CASE("field axioms on random triples") {
  std::mt19937_64 rng(13579);
  for (int i = 0; i < 3000; ++i) {
    const QuadExt x = random_quad(rng, 5), y = random_quad(rng, 5), z = random_quad(rng, 5);
    CHECK((x * y) * z == x * (y * z));
    CHECK(x * (y + z) == x * y + x * z);
    CHECK(x + y == y + x);
    if (!z.is_zero()) CHECK((x / z) * z == x);
  }
}

TEST_CASE("quadratic text round-trip") {
  CHECK(vorospline::to_string(QuadExt(1, 1, 3)) == "1+1*sqrt(3)");
  CHECK(vorospline::to_string(QuadExt(Rational(-1, 2), Rational(1, 2), 3)) ==
        "-1/2+1/2*sqrt(3)");
  CHECK(vorospline::to_string(QuadExt(1, -1, 3)) == "1-1*sqrt(3)");
  CHECK(vorospline::to_string(QuadExt(0, Rational(1, 4), 3)) == "1/4*sqrt(3)");
  CHECK(vorospline::to_string(QuadExt(Rational(5, 2))) == "5/2");

  CHECK(vorospline::parse_quadext("1/2+0*sqrt(3)") == QuadExt(Rational(1, 2)));
  CHECK(vorospline::parse_quadext("-2/3-5*sqrt(2)") == QuadExt(Rational(-2, 3), -5, 2));
  CHECK(vorospline::parse_quadext("3*sqrt(7)") == QuadExt(0, 3, 7));
  CHECK_THROWS_AS(vorospline::parse_quadext("1+sqrt(3)"), std::invalid_argument);
  CHECK_THROWS_AS(vorospline::parse_quadext("1+2*sqrt(3"), std::invalid_argument);
  CHECK_THROWS_AS(vorospline::parse_quadext("1+2*sqrt(-3)"), std::invalid_argument);

  std::mt19937_64 rng(24680);
  for (int i = 0; i < 2000; ++i) {
    const QuadExt x = random_quad(rng, i % 2 ? 3 : 2);
    CHECK(vorospline::parse_quadext(vorospline::to_string(x)) == x);
  }
}

TEST_CASE("total order") {
  CHECK(QuadExt(1, 1, 3) > QuadExt(2, 0, 3));   // 2.73... vs 2
  CHECK(QuadExt(5, -1, 3) < QuadExt(4, 0, 3));  // 3.26... vs 4
  CHECK(QuadExt(0, 1, 2) < QuadExt(0, 1, 2) + QuadExt(Rational(1, 1000000)));
  CHECK(QuadExt(7, 0, 3) == QuadExt(7));
}
