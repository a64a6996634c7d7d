#pragma once

#include <span>
#include <string>
#include <vector>

#include "rlab/fit.hpp"
#include "rlab/measure.hpp"
#include "rlab/spectral.hpp"

namespace rlab {

struct ScalePoint {
  double scale = 0.0;
  double value = 0.0;
};

/// An exponent estimated from a log-log fit, with the data it came from.
/// `fit.intercept` is the log of the fitted constant.
struct RegularityReport {
  double estimate = 0.0;
  LogLogFit fit;
  std::vector<ScalePoint> points;
  double window_min = 0.0;  ///< smallest scale inspected
  double window_max = 0.0;  ///< largest scale inspected
};

/// Number of grid cells within torus distance `radius` (radius in units of
/// the torus) along one axis: floor(radius * N).
std::int64_t radius_cells(std::int64_t resolution, double radius);

/// mu(B(x, r)) for every grid center x (closed balls, wrap-around metric).
std::vector<double> ball_masses(const DiscreteMeasure& mu, double radius);

/// mu(B(center, r)).
double ball_mass(const DiscreteMeasure& mu, const Index& center, double radius);

/// Scales base^-1, base^-2, ... inside (1/N, 1/4].
std::vector<double> geometric_scales(std::int64_t resolution, double base = 2.0);

/// alpha-hat: slope of log max_x mu(B(x, r)) against log r.
RegularityReport ahlfors_alpha(const DiscreteMeasure& mu, std::span<const double> scales);

struct BetaReport {
  RegularityReport sup;      ///< sup_{|k| in annulus} |mu^(k)|^2 against the arg-max |k|
  RegularityReport average;  ///< annulus average of |mu^(k)|^2 against the annulus mid-radius
};

/// beta-hat: negative slope of the squared Fourier modulus over annuli
/// [base^j, base^(j+1)) that fit inside the truncation.
BetaReport fourier_beta(const Spectrum& spectrum, double annulus_base = 2.0);

struct BillingsleyReport {
  Index center{0, 0};
  RegularityReport fit;
};

/// Locates the support point with the largest ball mass at the finest scale
/// and fits the exponent of mu(B(x0, r)) across the scales.
BillingsleyReport billingsley_gamma(const DiscreteMeasure& mu, std::span<const double> scales);

}  // namespace rlab
