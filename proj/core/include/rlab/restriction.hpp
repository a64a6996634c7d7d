#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rlab/exponent.hpp"
#include "rlab/fit.hpp"
#include "rlab/measure.hpp"

namespace rlab {

inline constexpr double kDefaultMaxMatrixEntries = double(1 << 26);

/// Dense pairing of the lattice points x in [-X, X]^dim with the atoms
/// xi_j = j/N of a measure: e(x, j) = exp(2 pi i <x, xi_j>). Functions f on
/// the lattice have f^(xi) = sum_x f(x) exp(-2 pi i <x, xi>), so the
/// restriction f -> f^|_supp(mu) is the adjoint E^H.
class ExtensionOperator {
 public:
  ExtensionOperator(const DiscreteMeasure& mu, std::int64_t lattice_radius,
                    double max_entries = kDefaultMaxMatrixEntries);

  int dim() const { return dim_; }
  std::int64_t lattice_radius() const { return radius_; }
  Eigen::Index lattice_size() const { return matrix_.rows(); }
  Eigen::Index atom_count() const { return matrix_.cols(); }

  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  const std::vector<Index>& lattice() const { return lattice_; }

  /// u_j = f^(xi_j)
  Eigen::VectorXcd apply_restriction(const Eigen::VectorXcd& f) const;
  /// z(x) = sum_j e(x, j) v_j
  Eigen::VectorXcd apply_extension(const Eigen::VectorXcd& v) const;

 private:
  int dim_;
  std::int64_t radius_;
  Eigen::MatrixXcd matrix_;
  Eigen::VectorXd weights_;
  std::vector<Index> lattice_;
};

/// l^p norm on the lattice (counting measure).
double lattice_norm(const Eigen::VectorXcd& f, const Exponent& p);

/// L^q(mu) norm of values on the atoms.
double measure_norm(const Eigen::VectorXcd& u, const Eigen::VectorXd& weights, const Exponent& q);

/// ||f^||_{L^q(mu)} / ||f||_{l^p}, evaluated directly.
double rayleigh_quotient(const ExtensionOperator& op, const Eigen::VectorXcd& f, const Exponent& p,
                         const Exponent& q);

struct ProbeOptions {
  int restarts = 8;
  int max_iters = 500;
  double tol = 1e-9;
  std::uint64_t seed = 0;
  /// Extra starting witnesses tried before the random restarts.
  std::vector<Eigen::VectorXcd> warm_starts;
};

struct ProbeResult {
  Exponent p;
  Exponent q;
  double norm_lower_bound = 0.0;
  Eigen::VectorXcd witness;
  std::vector<double> trace;  ///< ratio per iteration of the winning start
  int restarts_used = 0;
  int iterations = 0;
  bool converged = false;
};

/// Certified lower bound for ||R||_{l^p -> L^q(mu)} by alternating Hoelder
/// alignment: u = Rf, v = L^q(mu)-dual of u, z = E v, f = l^p-dual of z.
/// The reported bound is recomputed from the stored witness.
ProbeResult restriction_norm(const ExtensionOperator& op, const Exponent& p, const Exponent& q,
                             const ProbeOptions& options = {});

/// Zero-pads a lattice function from radius `from` to radius `to`.
Eigen::VectorXcd embed_lattice(const Eigen::VectorXcd& f, int dim, std::int64_t from, std::int64_t to);

struct GrowthResult {
  std::vector<std::int64_t> radii;
  std::vector<double> norms;
  LogLogFit fit;
  std::vector<ProbeResult> probes;
};

/// Probes the norm at each lattice radius (ascending, each run warm-started
/// from the previous witness so the series is nondecreasing) and fits the
/// slope of log norm against log X.
GrowthResult growth_exponent(const DiscreteMeasure& mu, const Exponent& p, const Exponent& q,
                             std::span<const std::int64_t> radii, const ProbeOptions& options = {},
                             double max_entries = kDefaultMaxMatrixEntries);

}  // namespace rlab
