#include "rlab/exponent.hpp"

#include <cctype>
#include <charconv>
#include <limits>
#include <ostream>

namespace rlab {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::int64_t parse_int(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  std::int64_t out = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
  }
  return out;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  text = trim(text);
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  const auto den = parse_int(text.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  return Rational(parse_int(text.substr(0, slash)), den);
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Exponent Exponent::from_reciprocal(Rational inv) {
  if (inv < Rational(0)) throw std::domain_error("negative exponent reciprocal");
  if (inv == Rational(0)) return infinity();
  return Exponent(Rational(1) / inv);
}

Exponent Exponent::parse(std::string_view text) {
  text = trim(text);
  std::string lower(text);
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "inf" || lower == "infinity" || lower == "oo") return infinity();
  const Rational r = parse_rational(text);
  if (r < Rational(0)) throw std::invalid_argument("exponent must be nonnegative: '" + std::string(text) + "'");
  return Exponent(r);
}

Rational Exponent::value() const {
  if (infinite_) throw std::domain_error("value() of an infinite exponent");
  return value_;
}

Rational Exponent::reciprocal() const {
  if (infinite_) return Rational(0);
  if (value_ == Rational(0)) throw std::domain_error("reciprocal of zero exponent");
  return Rational(1) / value_;
}

Exponent Exponent::conjugate() const {
  if (!infinite_ && value_ < Rational(1)) throw std::domain_error("conjugate exponent requires e >= 1, got " + str());
  return from_reciprocal(Rational(1) - reciprocal());
}

double Exponent::to_double() const {
  if (infinite_) return std::numeric_limits<double>::infinity();
  return boost::rational_cast<double>(value_);
}

std::string Exponent::str() const { return infinite_ ? std::string("inf") : to_string(value_); }

std::strong_ordering operator<=>(const Exponent& a, const Exponent& b) {
  if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
  if (a.value_ < b.value_) return std::strong_ordering::less;
  if (b.value_ < a.value_) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Exponent operator+(const Exponent& a, const Exponent& b) {
  if (a.infinite_ || b.infinite_) return Exponent::infinity();
  return Exponent(a.value_ + b.value_);
}

Exponent operator-(const Exponent& a, const Exponent& b) {
  if (b.infinite_) throw std::domain_error("subtracting an infinite exponent");
  if (a.infinite_) return Exponent::infinity();
  if (a.value_ < b.value_) throw std::domain_error("exponent difference would be negative");
  return Exponent(a.value_ - b.value_);
}

Exponent operator*(const Exponent& a, const Exponent& b) {
  if (a.infinite_ || b.infinite_) {
    if ((!a.infinite_ && a.value_ == Rational(0)) || (!b.infinite_ && b.value_ == Rational(0))) {
      throw std::domain_error("0 * inf is undefined");
    }
    return Exponent::infinity();
  }
  return Exponent(a.value_ * b.value_);
}

Exponent operator/(const Exponent& a, const Exponent& b) {
  if (a.infinite_ && b.infinite_) throw std::domain_error("inf / inf is undefined");
  if (a.infinite_) return Exponent::infinity();
  if (b.infinite_) return Exponent(0);
  if (b.value_ == Rational(0)) {
    if (a.value_ == Rational(0)) throw std::domain_error("0 / 0 is undefined");
    return Exponent::infinity();
  }
  return Exponent(a.value_ / b.value_);
}

std::ostream& operator<<(std::ostream& os, const Exponent& e) { return os << e.str(); }

}  // namespace rlab
