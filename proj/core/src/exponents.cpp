#include "rlab/exponents.hpp"

#include <stdexcept>

namespace rlab {

Exponent ExponentRange::q_max(const Exponent& p) const {
  if (p < Exponent(1)) throw std::domain_error("q_max requires p >= 1");
  if (p == Exponent(1)) return Exponent::infinity();
  // 1/q = n r' / p' = n (1/p') / (1/r')
  const Rational inv_p_conj = Rational(1) - p.reciprocal();
  const Rational inv_r_conj = Rational(1) - r.reciprocal();
  if (inv_r_conj == Rational(0)) return Exponent(0);  // r = 1: no q >= 1 survives for p > 1
  return Exponent::from_reciprocal(Rational(n) * inv_p_conj / inv_r_conj);
}

bool ExponentRange::contains(const Exponent& p, const Exponent& q) const {
  if (p < Exponent(1) || q < Exponent(1)) return false;
  return p <= p_max && q <= q_max(p);
}

ExponentRange theorem_range(int n, const Exponent& r) {
  if (n < 1) throw std::domain_error("theorem_range requires n >= 1");
  if (r < Exponent(1)) throw std::domain_error("theorem_range requires r >= 1");
  ExponentRange range;
  range.n = n;
  range.r = r;
  if (r >= Exponent(2)) {
    range.p_max = Exponent(Rational(2 * n, 2 * n - 1));
  } else {
    // p_max = n r' / (n r' - 1), i.e. 1/p_max = 1 - 1/(n r')
    const Rational inv_r_conj = Rational(1) - r.reciprocal();
    range.p_max = Exponent::from_reciprocal(Rational(1) - inv_r_conj / Rational(n));
  }
  range.feasible = range.q_max(range.p_max) >= Exponent(1);
  return range;
}

Exponent mockenhaupt_p0(int d, const Rational& alpha, const Rational& beta) {
  if (!(alpha >= Rational(0) && alpha < Rational(d) && beta >= Rational(0) && beta < Rational(d))) {
    throw std::domain_error("mockenhaupt_p0 requires 0 <= alpha, beta < d");
  }
  const Rational gap = 4 * (Rational(d) - alpha);
  return Exponent((gap + 2 * beta) / (gap + beta));
}

Exponent stein_tomas_endpoint(int d) {
  if (d < 1) throw std::domain_error("dimension must be >= 1");
  return Exponent(Rational(2 * (d + 1), d + 3));
}

Exponent decay_route_endpoint(const Rational& eps) {
  if (eps < Rational(0) || eps >= Rational(1, 2)) throw std::domain_error("decay_route_endpoint requires 0 <= eps < 1/2");
  return Exponent((Rational(6) - 4 * eps) / (Rational(5) - 6 * eps));
}

Exponent knapp_bound(int d, const Rational& gamma, const Exponent& p) {
  if (d < 1) throw std::domain_error("dimension must be >= 1");
  if (!(gamma > Rational(0) && gamma <= Rational(d))) throw std::domain_error("knapp_bound requires 0 < gamma <= d");
  return Exponent(gamma / Rational(d)) * p.conjugate();
}

ChainExponents chain_exponents(int n, const Exponent& r, const Exponent& p) {
  const auto range = theorem_range(n, r);
  if (p < Exponent(1) || p > range.p_max) {
    throw std::domain_error("p = " + p.str() + " outside [1, " + range.p_max.str() + "]");
  }
  ChainExponents e;
  e.n = n;
  e.r = r;
  e.r_conj = r.conjugate();
  e.p = p;
  e.p_conj = p.conjugate();
  e.s = e.p_conj / Exponent(n);
  e.q = range.q_max(p);
  if (e.q < Exponent(1)) throw std::domain_error("q = " + e.q.str() + " < 1: infeasible exponents");
  e.s_conj = e.s.conjugate();
  e.q_conj = e.q.conjugate();
  return e;
}

bool exponent_identity(int n, const Exponent& r, const Exponent& p) {
  const auto e = chain_exponents(n, r, p);
  const Rational lhs = e.s_conj.reciprocal() - e.q.reciprocal() * e.r.reciprocal();
  return lhs == e.q_conj.reciprocal();
}

}  // namespace rlab
