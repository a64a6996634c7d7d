#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace rlab {

using Rational = boost::rational<std::int64_t>;

/// An exact Lebesgue exponent: a nonnegative rational or +infinity.
///
/// Arithmetic follows the usual conventions for exponents (1/inf = 0,
/// inf' = 1, 1' = inf). Operations whose result is undefined, such as
/// inf - inf or 0 * inf, throw std::domain_error.
class Exponent {
 public:
  Exponent() = default;
  Exponent(std::int64_t value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  Exponent(Rational value) : value_(value) {}      // NOLINT(google-explicit-constructor)
  Exponent(std::int64_t num, std::int64_t den) : value_(num, den) {}

  static Exponent infinity() {
    Exponent e;
    e.infinite_ = true;
    return e;
  }

  /// Builds the exponent whose reciprocal is `inv` (inv = 0 gives infinity).
  static Exponent from_reciprocal(Rational inv);

  /// Accepts "inf", "infinity", integers and "num/den".
  static Exponent parse(std::string_view text);

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }

  /// Finite value; throws for infinity.
  Rational value() const;

  /// 1/e with 1/inf = 0. Throws for e = 0.
  Rational reciprocal() const;

  /// Hoelder conjugate e' with 1/e + 1/e' = 1. Requires e >= 1.
  Exponent conjugate() const;

  double to_double() const;

  /// "inf", "n" for integers, "num/den" otherwise.
  std::string str() const;

  friend bool operator==(const Exponent& a, const Exponent& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }
  friend std::strong_ordering operator<=>(const Exponent& a, const Exponent& b);

  friend Exponent operator+(const Exponent& a, const Exponent& b);
  friend Exponent operator-(const Exponent& a, const Exponent& b);
  friend Exponent operator*(const Exponent& a, const Exponent& b);
  friend Exponent operator/(const Exponent& a, const Exponent& b);

 private:
  Rational value_{0};
  bool infinite_ = false;
};

std::ostream& operator<<(std::ostream& os, const Exponent& e);

/// Exact "num/den" formatting of a rational ("n" when the denominator is 1).
std::string to_string(const Rational& r);

/// Parses "n" or "num/den".
Rational parse_rational(std::string_view text);

}  // namespace rlab
