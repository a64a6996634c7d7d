#include <doctest.h>

#include "rlab/exponents.hpp"

using namespace rlab;

namespace {
const Exponent inf = Exponent::infinity();
Exponent ex(std::int64_t a, std::int64_t b = 1) { return Exponent(Rational(a, b)); }
}  // namespace

TEST_CASE("theorem range") {
  const auto a = theorem_range(2, inf);
  CHECK(a.p_max == ex(4, 3));
  CHECK(a.q_max(ex(4, 3)) == ex(2));
  CHECK(a.q_max(ex(6, 5)) == ex(3));
  CHECK(a.q_max(ex(1)).is_infinite());
  CHECK(a.feasible);
  CHECK(a.contains(ex(4, 3), ex(2)));
  CHECK_FALSE(a.contains(ex(4, 3), ex(3)));
  CHECK_FALSE(a.contains(ex(8, 5), ex(1)));

  const auto b = theorem_range(2, ex(2));
  CHECK(b.p_max == ex(4, 3));
  CHECK(b.q_max(ex(4, 3)) == ex(1));
  // both branch formulas meet at r = 2
  CHECK(Exponent::from_reciprocal(Rational(1) - Rational(1, 2) / Rational(2)) == ex(4, 3));

  const auto c = theorem_range(1, inf);
  CHECK(c.p_max == ex(2));
  CHECK(c.q_max(ex(3, 2)) == ex(3));

  const auto d = theorem_range(1, ex(1));
  CHECK(d.p_max == ex(1));
  CHECK(theorem_range(3, ex(3, 2)).p_max == ex(9, 8));
  CHECK_THROWS(theorem_range(0, inf));
  CHECK_THROWS(theorem_range(2, ex(1, 2)));
}

TEST_CASE("mockenhaupt and stein-tomas") {
  CHECK(mockenhaupt_p0(1, Rational(1, 2), Rational(1, 2)) == ex(6, 5));
  for (int d = 1; d <= 3; ++d) {
    CHECK(mockenhaupt_p0(d, Rational(d - 1), Rational(d - 1)) == ex(2 * (d + 1), d + 3));
    CHECK(stein_tomas_endpoint(d) == ex(2 * (d + 1), d + 3));
  }
  for (int k = 1; k < 12; ++k) {
    const Rational eps(k, 25);
    CHECK(mockenhaupt_p0(1, Rational(1, 2) + eps, Rational(1, 2) + eps) ==
          Exponent((Rational(6) - 4 * eps) / (Rational(5) - 6 * eps)));
    CHECK(decay_route_endpoint(eps) == Exponent((Rational(6) - 4 * eps) / (Rational(5) - 6 * eps)));
    CHECK((ex(4, 3) > decay_route_endpoint(eps)) == (eps < Rational(1, 6)));
  }
  CHECK(decay_route_endpoint(Rational(1, 6)) == ex(4, 3));
  CHECK_THROWS(mockenhaupt_p0(1, Rational(1), Rational(1, 2)));
  CHECK_THROWS(mockenhaupt_p0(1, Rational(-1, 2), Rational(1, 2)));
}

TEST_CASE("knapp bound") {
  CHECK(knapp_bound(1, Rational(1, 2), ex(4, 3)) == ex(2));
  CHECK(knapp_bound(1, Rational(1, 2), ex(2)) == ex(1));
  CHECK(knapp_bound(2, Rational(2), ex(3, 2)) == ex(3));
  CHECK(knapp_bound(1, Rational(1, 2), ex(1)).is_infinite());
  // the theorem boundary at n = 2, r = inf coincides with the Knapp bound for gamma = 1/2
  const auto range = theorem_range(2, inf);
  for (int k = 1; k <= 12; ++k) {
    const auto p = Exponent(Rational(1) + Rational(k, 36));
    CHECK(range.q_max(p) == knapp_bound(1, Rational(1, 2), p));
  }
}

TEST_CASE("chain exponents and identity") {
  const auto e = chain_exponents(2, inf, ex(4, 3));
  CHECK(e.s == ex(2));
  CHECK(e.q == ex(2));
  CHECK(e.q_conj == ex(2));
  CHECK(exponent_identity(2, inf, ex(4, 3)));
  const auto f = chain_exponents(2, ex(2), ex(4, 3));
  CHECK(f.q == ex(1));
  CHECK(f.q_conj.is_infinite());
  CHECK(exponent_identity(2, ex(2), ex(4, 3)));
  CHECK(exponent_identity(1, inf, ex(2)));
  CHECK_THROWS_AS(chain_exponents(2, inf, ex(3, 2)), std::domain_error);
  int checked = 0;
  for (int n = 1; n <= 4; ++n) {
    for (const auto& r : {ex(1), ex(3, 2), ex(2), ex(3), inf}) {
      const auto range = theorem_range(n, r);
      for (int k = 0; k <= 4; ++k) {
        const Exponent p(Rational(1) + (range.p_max.value() - Rational(1)) * Rational(k, 4));
        if (range.q_max(p) < Exponent(1)) continue;
        CHECK(exponent_identity(n, r, p));
        ++checked;
      }
    }
  }
  CHECK(checked >= 50);
}
