#pragma once

#include "rlab/exponent.hpp"

namespace rlab {

/// Admissible (p, q) range for a measure whose n-fold convolution power is
/// in L^r: p <= 2n/(2n-1) when r >= 2, p <= n r'/(n r' - 1) when r <= 2,
/// and q <= p'/(n r').
struct ExponentRange {
  int n = 1;
  Exponent r;
  Exponent p_max;
  bool feasible = true;

  /// p'/(n r'); infinity at p = 1.
  Exponent q_max(const Exponent& p) const;

  bool contains(const Exponent& p, const Exponent& q) const;
};

ExponentRange theorem_range(int n, const Exponent& r);

/// (4(d - alpha) + 2 beta) / (4(d - alpha) + beta), for 0 <= alpha, beta < d.
Exponent mockenhaupt_p0(int d, const Rational& alpha, const Rational& beta);

/// 2(d+1)/(d+3), the sphere endpoint.
Exponent stein_tomas_endpoint(int d);

/// (6 - 4 eps)/(5 - 6 eps): the largest p the decay/regularity route can give
/// on R^1 when alpha, beta <= gamma = 1/2 + eps.
Exponent decay_route_endpoint(const Rational& eps);

/// Necessary condition q <= (gamma/d) p' from concentrated bump functions.
Exponent knapp_bound(int d, const Rational& gamma, const Exponent& p);

/// The exponents threaded through the dual argument for a feasible (n, r, p):
/// s = p'/n and q = p'/(n r').
struct ChainExponents {
  int n = 1;
  Exponent r, r_conj;
  Exponent p, p_conj;
  Exponent s, s_conj;
  Exponent q, q_conj;
};

/// Throws std::domain_error when (n, r, p) lies outside the admissible range.
ChainExponents chain_exponents(int n, const Exponent& r, const Exponent& p);

/// Exact check of 1/s' - 1/(q r) = 1/q' for the chain exponents.
bool exponent_identity(int n, const Exponent& r, const Exponent& p);

}  // namespace rlab
