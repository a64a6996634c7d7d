#pragma once

#include <cstddef>
#include <span>

namespace rlab {

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;   ///< log of the fitted constant
  double residual = 0.0;    ///< RMS residual in log space
  std::size_t points = 0;   ///< points actually used
  bool reliable = true;     ///< residual <= the unreliable-fit threshold
};

/// Ordinary least squares of log(y) against log(x). With `drop_boundary`
/// and at least five points, the smallest-x and largest-x points are
/// excluded. All y must be positive.
LogLogFit fit_loglog(std::span<const double> x, std::span<const double> y, bool drop_boundary,
                     double unreliable_residual = 0.2);

}  // namespace rlab
