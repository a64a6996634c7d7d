#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rlab/grid.hpp"

namespace rlab {

/// Weight-sum tolerance every constructor output satisfies.
inline constexpr double kMassTolerance = 1e-12;

struct Atom {
  std::int64_t index = 0;  ///< linear grid index, row-major
  double weight = 0.0;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// How a measure was built; persisted alongside the atoms.
struct Descriptor {
  std::string kind;
  nlohmann::json params = nlohmann::json::object();
  std::uint64_t seed = 0;
};

/// A Borel probability measure on the torus [0,1)^dim discretized to atoms
/// on the grid {j/N}. Atoms are kept sorted by linear index, weights are
/// nonnegative and sum to one.
class DiscreteMeasure {
 public:
  /// Validates the invariants; throws std::invalid_argument on violation.
  DiscreteMeasure(GridShape shape, std::vector<Atom> atoms, Descriptor descriptor = {});

  /// Sorts, merges duplicate indices, drops zero weights and renormalizes.
  static DiscreteMeasure normalized(GridShape shape, std::vector<Atom> atoms, Descriptor descriptor = {});

  /// Builds a measure from a dense weight grid; entries <= drop_below are discarded.
  static DiscreteMeasure from_dense(GridShape shape, std::span<const double> weights, Descriptor descriptor = {},
                                    double drop_below = 0.0);

  const GridShape& shape() const { return shape_; }
  int dim() const { return shape_.dim; }
  std::int64_t resolution() const { return shape_.n; }
  std::span<const Atom> atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  const Descriptor& descriptor() const { return descriptor_; }
  Descriptor& descriptor() { return descriptor_; }

  Index coords(const Atom& a) const { return shape_.coords(a.index); }
  double total_mass() const;
  std::vector<double> dense() const;

  /// Weight at a grid index (0 if no atom sits there).
  double weight_at(std::int64_t linear_index) const;

  friend bool operator==(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    return a.shape_ == b.shape_ && a.atoms_ == b.atoms_;
  }

 private:
  GridShape shape_;
  std::vector<Atom> atoms_;
  Descriptor descriptor_;
};

/// Nonnegative density with respect to the normalized grid volume N^-dim.
struct MollifiedDensity {
  GridShape shape;
  std::vector<double> values;
  double epsilon = 1.0;

  /// (sum of values) * N^-dim
  double mass() const;
};

// Constructors -------------------------------------------------------------

DiscreteMeasure dirac(int dim, std::int64_t resolution, Index index);

/// Uniform weights on every grid point.
DiscreteMeasure uniform(int dim, std::int64_t resolution);

/// Uniform weights on the 1-d grid points start, ..., start+length-1 (mod N).
DiscreteMeasure interval(std::int64_t resolution, std::int64_t start, std::int64_t length);

struct CantorOptions {
  std::int64_t base = 4;
  std::vector<std::int64_t> digits{0, 3};
  int stage = 1;
  std::size_t max_atoms = std::size_t{1} << 22;
};

/// Stage-k Cantor measure on [0,1): uniform weight on the |D|^k points whose
/// base-b expansion has k digits drawn from D. N = b^k must be a power of two.
DiscreteMeasure cantor(const CantorOptions& options);

struct RandomFlatOptions {
  std::int64_t resolution = 4096;
  std::int64_t atoms = 185;
  std::uint64_t seed = 0;
  double flatness_bound = 4.0;
  int max_retries = 200;
};

/// Acceptance threshold for an m-subset of Z_N: C * max(1, m^2/N) * ln N.
double random_flat_threshold(std::int64_t resolution, std::int64_t atoms, double flatness_bound);

/// Thrown by random_flat when no sampled set meets the flatness bound.
class FlatnessNotReached : public std::runtime_error {
 public:
  FlatnessNotReached(DiscreteMeasure best, double ratio);
  const DiscreteMeasure& best() const { return best_; }
  double ratio() const { return ratio_; }

 private:
  DiscreteMeasure best_;
  double ratio_;
};

/// Uniform measure on a random m-subset S of Z_N, resampled until the
/// largest off-zero autocorrelation count max_{t != 0} |S cap (S + t)| is at
/// most random_flat_threshold(). The achieved ratio
/// max_{t != 0} r_S(t) / (max(1, m^2/N) ln N) and the retry count are stored
/// in the descriptor.
DiscreteMeasure random_flat(const RandomFlatOptions& options);

/// Equal weights on the grid points nearest to ceil(2 pi rho N) equispaced
/// points on the circle of radius rho centered at (1/2, 1/2).
DiscreteMeasure circle(std::int64_t resolution, double radius);

/// Atom at j moves to -j mod N.
DiscreteMeasure reflect(const DiscreteMeasure& mu);

/// Re-embeds mu in a finer grid (same indices) so its support sits inside
/// [0, 1/(2 n_max)) per axis, letting n-fold circular convolutions behave
/// like convolutions on R^d.
DiscreteMeasure confine(const DiscreteMeasure& mu, int n_max);

/// Circular convolution of the atom weights with a triangular (Fejer-type)
/// kernel of half-width epsilon cells, returned as a density.
MollifiedDensity mollify(const DiscreteMeasure& mu, double epsilon);

/// The normalized triangular kernel (sums to 1) on the grid.
std::vector<double> triangular_kernel(const GridShape& shape, double epsilon);

}  // namespace rlab
