#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rlab/exponent.hpp"
#include "rlab/measure.hpp"
#include "rlab/restriction.hpp"

namespace rlab {

enum class Classification { bounded, growing, inconclusive };

std::string to_string(Classification c);
Classification classification_from_string(const std::string& s);

struct SweepConfig {
  std::vector<Exponent> p_grid;
  std::vector<Exponent> q_grid;
  std::vector<std::int64_t> radii{64, 128, 256, 512};
  double tau_bounded = 0.05;   ///< slope below this: bounded
  double tau_growing = 0.10;   ///< slope above this: growing
  int n = 2;                   ///< convolution power assumed for the overlay
  Exponent r = Exponent::infinity();
  std::optional<double> gamma;  ///< overrides the Billingsley estimate for the Knapp overlay
  int restarts = 8;
  int max_iters = 500;
  double tol = 1e-9;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  double max_entries = kDefaultMaxMatrixEntries;
};

struct SweepCell {
  Exponent p;
  Exponent q;
  std::vector<double> norms;  ///< one per lattice radius
  double slope = 0.0;
  double residual = 0.0;
  Classification cls = Classification::inconclusive;
  bool in_theorem_region = false;
  bool in_knapp_region = false;
};

struct SweepGrid {
  std::vector<std::int64_t> radii;
  double gamma = 0.0;
  std::vector<SweepCell> cells;
};

Classification classify(double slope, double tau_bounded, double tau_growing);

/// Inclusive arithmetic progression "a:b:step" of exact rationals, or a comma list.
std::vector<Exponent> parse_exponent_grid(const std::string& spec);

/// Per-(p, q) growth fits across lattice radii with region overlays. Cells
/// run on up to `threads` workers; each uses a seed derived from
/// (seed, p, q), so the output does not depend on scheduling.
SweepGrid sweep(const DiscreteMeasure& mu, const SweepConfig& config);

/// CSV with columns p, q, norm_X..., slope, residual, class,
/// in_theorem_region, in_knapp_region. `header_comment` lines are emitted
/// first, each prefixed with "# ".
std::string to_csv(const SweepGrid& grid, const std::vector<std::string>& header_comment = {});

/// Inverse of to_csv (comment lines are skipped). Throws std::invalid_argument on malformed input.
SweepGrid sweep_from_csv(const std::string& text);

}  // namespace rlab
