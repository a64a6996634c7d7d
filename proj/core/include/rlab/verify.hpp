#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rlab/exponent.hpp"
#include "rlab/fit.hpp"
#include "rlab/measure.hpp"
#include "rlab/spectral.hpp"

namespace rlab {

/// Every threshold the checkers use, in one place.
struct VerifyTolerances {
  double chain_relative = 1e-8;             ///< slack >= -tol * max(|lhs|, |rhs|, 1)
  double hausdorff_young_relative = 1e-10;
  double oracle_absolute = 1e-10;           ///< materialized G.M sum vs convolution form
  double prop1_margin = 0.1;                ///< alpha(mu) >= alpha(mu^{*n})/n - margin
  double prop2_diverging_slope = 0.2;       ///< partial-sum log-log slope above this: diverging
  double prop3_margin = 0.1;                ///< fitted exponent <= gamma + margin
  double knapp_violation = -0.05;           ///< fitted ratio exponent below this: violated
  double bilinear_relative = 1e-8;
};

nlohmann::json to_json(const VerifyTolerances& t);
VerifyTolerances tolerances_from_json(const nlohmann::json& j);

/// slack = rhs - lhs of an inequality lhs <= rhs (or an identity).
struct InequalityCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool identity = false;

  bool holds(double relative_tol) const;
};

InequalityCheck make_check(std::string name, double lhs, double rhs, bool identity = false);

// Hausdorff-Young ----------------------------------------------------------

/// ||c||_{l^s} <= ||F||_{L^{s'}(T^d)} for a density F on the grid (cell
/// volume N^-d) and its coefficients c(x) = N^-d sum_j F_j e(-x.j/N) over one
/// period of the dual lattice. Equality at s = 2.
InequalityCheck check_hausdorff_young(std::span<const Complex> density, const GridShape& shape, const Exponent& s);

/// ||f^||_{L^s(T^d)} <= ||f||_{l^{s'}} for f on one period of the lattice
/// with f^ sampled on the grid.
InequalityCheck check_hausdorff_young_lattice(std::span<const Complex> f, const GridShape& shape, const Exponent& s);

// Dual inequality chain -----------------------------------------------------

struct ChainReport {
  int n = 1;
  Exponent r, p, q, s;
  double epsilon = 1.0;
  std::vector<InequalityCheck> steps;
  InequalityCheck end_to_end;      ///< the dual estimate after taking n-th roots
  bool exponent_identity = false;
  double oracle_error = -1.0;      ///< max |materialized - convolution| / max(1, max |convolution|); -1 when skipped
  double constant = 0.0;           ///< ||mu^{*n}||_r^{1/(n q)}

  bool steps_hold(double relative_tol) const;
  bool passes(const VerifyTolerances& tol) const;
};

/// Complex Gaussian values on every grid cell, rescaled where |g| > bound.
std::vector<Complex> random_bounded_function(const GridShape& shape, std::uint64_t seed, double bound = 10.0);

/// Evaluates both sides of every step of the dual estimate
///   ||(g mu_eps)^||_{l^{ns}} <= ||mu^{*n}||_r^{1/(nq)} ||g||_{L^{q'}(mu_eps)}
/// with q = p'/(n r') and s = p'/n on the discrete torus: the power identity,
/// Hausdorff-Young, the pointwise Hoelder bound on the inner integral, the
/// second Hoelder bound, and Young's inequality. When the grid is small
/// enough the n-fold integral of G.M is also materialized term by term and
/// compared against (g mu_eps)^{*n}. Throws std::domain_error for infeasible
/// exponents. epsilon is the mollifier half-width in cells.
ChainReport check_dual_chain(const DiscreteMeasure& mu, std::span<const Complex> g, int n, const Exponent& r,
                             const Exponent& p, double epsilon, double oracle_budget = double(1 << 24));

/// sum over eta in (Z_N^d)^{n-1} of G(xi, eta) M(xi, eta) N^{-(n-1)d}, with
/// G = g(eta_{n-1}) prod g(eta_{j-1} - eta_j), M the same product of the
/// density, and eta_0 = xi. Cost N^{n d}.
std::vector<Complex> materialized_inner_integral(std::span<const Complex> g, std::span<const double> density,
                                                 const GridShape& shape, int n);

/// (g D)^{*n} for densities on the normalized grid, via FFT.
std::vector<Complex> density_convolution_power(std::span<const Complex> h, const GridShape& shape, int n);

// Structural checks ---------------------------------------------------------

struct Prop1Result {
  double alpha_convolution = 0.0;
  double alpha_measure = 0.0;
  int n = 1;
  bool verdict = false;
};

/// Ball regularity of mu against that of mu^{*n}: passes when
/// alpha(mu) >= alpha(mu^{*n})/n - margin.
Prop1Result check_prop1(const DiscreteMeasure& mu, int n, std::span<const double> scales, double margin = 0.1);

struct Prop2Result {
  std::vector<std::int64_t> truncations;
  std::vector<double> partial_sums;
  LogLogFit fit;
  bool diverging = false;
  bool predicted_diverging = false;  ///< s < 2d / gamma
};

/// Partial sums sum_{|k| <= K} |mu^(k)|^s across K; diverging when the
/// log-log slope exceeds the threshold.
Prop2Result check_prop2(const Spectrum& spectrum, double gamma, const Exponent& s,
                        std::span<const std::int64_t> truncations, double diverging_slope = 0.2);

struct Prop3Result {
  std::vector<double> radii;
  std::vector<double> masses;                ///< mu * mu~ (B(0, eps))
  std::vector<std::int64_t> packing_counts;  ///< greedy disjoint balls of radius eps/2
  std::vector<double> packing_bounds;        ///< sum_j mu(B_j)^2
  LogLogFit fit;
  double gamma = 0.0;
  bool packing_bounds_hold = false;
  bool verdict = false;
};

/// Mass of the autocorrelation near zero against eps^gamma, plus the
/// disjoint-ball lower bound sum_j mu(B_j)^2 <= mu * mu~ (B(0, eps)).
Prop3Result check_prop3(const DiscreteMeasure& mu, double gamma, std::span<const double> radii, double margin = 0.1);

/// Greedy left-to-right sweep over the atoms keeping centers whose closed
/// balls of the given radius (same convention as ball_mass) are pairwise disjoint.
std::vector<Index> greedy_packing(const DiscreteMeasure& mu, double radius);

struct KnappResult {
  Index center{0, 0};
  double gamma = 0.0;
  std::vector<double> widths;
  std::vector<double> ratios;
  LogLogFit fit;
  double fitted = 0.0;
  double predicted = 0.0;  ///< gamma/q - d/p'
  bool violation = false;
};

/// Lattice functions whose transforms are Fejer bumps of width r at the
/// Billingsley point x0; fits the exponent of ||f^||_{L^q(mu)} / ||f||_{l^p}
/// against r. A negative exponent means no uniform constant can exist.
KnappResult knapp_test(const DiscreteMeasure& mu, const Exponent& p, const Exponent& q, std::span<const double> widths,
                       double amplitude = 1.0, double violation_threshold = -0.05);

/// ||f^||_{L^q(mu)} / ||f||_{l^p} for the bump of half-width L lattice points
/// at x0, scaled by `amplitude`.
double knapp_ratio(const DiscreteMeasure& mu, const Index& center, std::int64_t half_width, const Exponent& p,
                   const Exponent& q, double amplitude = 1.0);

// Bilinear estimate -----------------------------------------------------------

/// ||f mu_eps * g mu_eps||_{L^p} <= ||mu_eps * mu_eps||_inf^{1/p'} ||f||_{L^p(mu_eps)} ||g||_{L^p(mu_eps)}.
InequalityCheck check_bilinear(const DiscreteMeasure& mu, std::span<const Complex> f, std::span<const Complex> g,
                               const Exponent& p, double epsilon);

}  // namespace rlab
