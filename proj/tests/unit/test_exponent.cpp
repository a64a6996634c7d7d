#include <doctest.h>

#include <stdexcept>

#include "rlab/exponent.hpp"

using rlab::Exponent;
using rlab::Rational;

TEST_CASE("parse and print") {
  CHECK(Exponent::parse("4/3").value() == Rational(4, 3));
  CHECK(Exponent::parse(" 8/6 ").str() == "4/3");
  CHECK(Exponent::parse("2").str() == "2");
  CHECK(Exponent::parse("inf").is_infinite());
  CHECK(Exponent::parse("Infinity").is_infinite());
  CHECK_THROWS_AS(Exponent::parse("-1"), std::invalid_argument);
  CHECK_THROWS_AS(Exponent::parse("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(Exponent::parse("abc"), std::invalid_argument);
  CHECK_THROWS_AS(Exponent::parse("3/"), std::invalid_argument);
}

TEST_CASE("conjugates") {
  CHECK(Exponent(Rational(4, 3)).conjugate() == Exponent(4));
  CHECK(Exponent(2).conjugate() == Exponent(2));
  CHECK(Exponent(1).conjugate().is_infinite());
  CHECK(Exponent::infinity().conjugate() == Exponent(1));
  CHECK(Exponent(Rational(6, 5)).conjugate() == Exponent(6));
  CHECK_THROWS_AS(Exponent(Rational(1, 2)).conjugate(), std::domain_error);
  for (int num = 5; num < 40; ++num) {
    const Exponent e(Rational(num, 4));
    CHECK(e.conjugate().conjugate() == e);
    CHECK(e.reciprocal() + e.conjugate().reciprocal() == Rational(1));
  }
}

TEST_CASE("ordering and arithmetic") {
  CHECK(Exponent(Rational(4, 3)) < Exponent(2));
  CHECK(Exponent(1000) < Exponent::infinity());
  CHECK(Exponent::infinity() == Exponent::infinity());
  CHECK_FALSE(Exponent::infinity() < Exponent::infinity());
  CHECK(Exponent(4) / Exponent(2) == Exponent(2));
  CHECK(Exponent(2) * Exponent(Rational(3, 2)) == Exponent(3));
  CHECK((Exponent(2) + Exponent::infinity()).is_infinite());
  CHECK((Exponent::infinity() / Exponent(2)).is_infinite());
  CHECK_THROWS_AS(Exponent(0) * Exponent::infinity(), std::domain_error);
  CHECK_THROWS_AS(Exponent::infinity() - Exponent::infinity(), std::domain_error);
  CHECK_THROWS_AS(Exponent::infinity() / Exponent::infinity(), std::domain_error);
  CHECK(Exponent::from_reciprocal(Rational(0)).is_infinite());
  CHECK(Exponent::from_reciprocal(Rational(3, 4)) == Exponent(Rational(4, 3)));
  CHECK(Exponent(Rational(4, 3)).to_double() == doctest::Approx(4.0 / 3.0));
}
