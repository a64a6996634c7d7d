#include "rlab/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rlab/fft.hpp"

namespace rlab {

namespace {

void check_scales(const DiscreteMeasure& mu, std::span<const double> scales) {
  if (scales.size() < 3) throw std::invalid_argument("regularity fits need at least 3 scales");
  const double finest = 1.0 / static_cast<double>(mu.resolution());
  for (double s : scales) {
    if (!(s > finest) || s > 0.25 + 1e-12) {
      throw std::invalid_argument("scale " + std::to_string(s) + " outside the visible window (1/N, 1/4]");
    }
  }
}

double wrapped_distance_sq(const Index& a, const Index& b, const GridShape& shape) {
  double d2 = 0.0;
  for (int ax = 0; ax < shape.dim; ++ax) {
    const double d = static_cast<double>(centered(a[ax] - b[ax], shape.n));
    d2 += d * d;
  }
  return d2;
}

RegularityReport make_report(std::span<const double> scales, const std::vector<double>& values) {
  RegularityReport rep;
  for (std::size_t i = 0; i < scales.size(); ++i) rep.points.push_back({scales[i], values[i]});
  rep.fit = fit_loglog(scales, values, true);
  rep.estimate = rep.fit.slope;
  rep.window_min = *std::min_element(scales.begin(), scales.end());
  rep.window_max = *std::max_element(scales.begin(), scales.end());
  return rep;
}

}  // namespace

std::int64_t radius_cells(std::int64_t resolution, double radius) {
  return static_cast<std::int64_t>(std::floor(radius * static_cast<double>(resolution) + 1e-9));
}

std::vector<double> ball_masses(const DiscreteMeasure& mu, double radius) {
  const auto& shape = mu.shape();
  const auto n = shape.n;
  if (shape.dim == 1) {
    const auto r = radius_cells(n, radius);
    std::vector<double> out(static_cast<std::size_t>(n), 1.0);
    if (2 * r + 1 >= n) return out;
    // prefix sums over three periods
    const auto w = mu.dense();
    std::vector<double> prefix(static_cast<std::size_t>(3 * n + 1), 0.0);
    for (std::int64_t i = 0; i < 3 * n; ++i) {
      prefix[static_cast<std::size_t>(i + 1)] = prefix[static_cast<std::size_t>(i)] + w[static_cast<std::size_t>(i % n)];
    }
    for (std::int64_t c = 0; c < n; ++c) {
      const std::int64_t lo = c - r + n;  // shift into the doubled range
      out[static_cast<std::size_t>(c)] =
          prefix[static_cast<std::size_t>(lo + 2 * r + 1)] - prefix[static_cast<std::size_t>(lo)];
    }
    return out;
  }
  const double rr = radius * static_cast<double>(n);
  std::vector<double> disc(static_cast<std::size_t>(shape.cells()), 0.0);
  for (std::int64_t i = 0; i < shape.cells(); ++i) {
    const auto c = shape.coords(i);
    const double dx = static_cast<double>(centered(c[0], n));
    const double dy = static_cast<double>(centered(c[1], n));
    if (dx * dx + dy * dy <= rr * rr + 1e-9) disc[static_cast<std::size_t>(i)] = 1.0;
  }
  auto out = fft::circular_convolve(mu.dense(), disc, shape);
  for (auto& v : out) v = std::clamp(v, 0.0, 1.0);
  return out;
}

double ball_mass(const DiscreteMeasure& mu, const Index& center, double radius) {
  const auto& shape = mu.shape();
  double mass = 0.0;
  if (shape.dim == 1) {
    const auto r = radius_cells(shape.n, radius);
    for (const auto& a : mu.atoms()) {
      if (std::abs(centered(a.index - center[0], shape.n)) <= r) mass += a.weight;
    }
    return mass;
  }
  const double rr = radius * static_cast<double>(shape.n);
  for (const auto& a : mu.atoms()) {
    if (wrapped_distance_sq(mu.coords(a), center, shape) <= rr * rr + 1e-9) mass += a.weight;
  }
  return mass;
}

std::vector<double> geometric_scales(std::int64_t resolution, double base) {
  if (!(base > 1.0)) throw std::invalid_argument("scale base must exceed 1");
  std::vector<double> out;
  const double finest = 1.0 / static_cast<double>(resolution);
  for (double s = 1.0 / base; s > finest * (1.0 + 1e-12); s /= base) {
    if (s <= 0.25 + 1e-12) out.push_back(s);
  }
  return out;
}

RegularityReport ahlfors_alpha(const DiscreteMeasure& mu, std::span<const double> scales) {
  check_scales(mu, scales);
  std::vector<double> maxima;
  for (double s : scales) {
    const auto masses = ball_masses(mu, s);
    maxima.push_back(*std::max_element(masses.begin(), masses.end()));
  }
  return make_report(scales, maxima);
}

BetaReport fourier_beta(const Spectrum& spectrum, double annulus_base) {
  const auto K = spectrum.truncation();
  if (K < 16) throw std::invalid_argument("fourier_beta needs truncation K >= 16");
  if (!(annulus_base > 1.0)) throw std::invalid_argument("annulus base must exceed 1");

  struct Annulus {
    double lo, hi;
    double sup = 0.0;
    double argmax = 0.0;
    double sum = 0.0;
    std::size_t count = 0;
  };
  std::vector<Annulus> annuli;
  for (double lo = 1.0; lo * annulus_base <= static_cast<double>(K) + 1.0; lo *= annulus_base) {
    annuli.push_back({lo, lo * annulus_base});
  }
  const auto& coeffs = spectrum.coefficients();
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const auto k = spectrum.frequency(i);
    const double radius = std::hypot(static_cast<double>(k[0]), static_cast<double>(k[1]));
    const double power = std::norm(coeffs[i]);
    for (auto& a : annuli) {
      if (radius >= a.lo && radius < a.hi) {
        if (power > a.sup || (power == a.sup && radius < a.argmax)) {
          a.sup = power;
          a.argmax = radius;
        }
        a.sum += power;
        ++a.count;
        break;
      }
    }
  }
  std::vector<double> sup_x, sup_y, avg_x, avg_y;
  for (const auto& a : annuli) {
    if (a.sup == 0.0) {
      throw std::domain_error("fourier_beta: annulus [" + std::to_string(a.lo) + ", " + std::to_string(a.hi) +
                              ") has no Fourier mass");
    }
    sup_x.push_back(a.argmax);
    sup_y.push_back(a.sup);
    avg_x.push_back(std::sqrt(a.lo * a.hi));
    avg_y.push_back(a.sum / static_cast<double>(a.count));
  }
  BetaReport rep;
  rep.sup = make_report(sup_x, sup_y);
  rep.sup.estimate = -rep.sup.fit.slope;
  rep.average = make_report(avg_x, avg_y);
  rep.average.estimate = -rep.average.fit.slope;
  return rep;
}

BillingsleyReport billingsley_gamma(const DiscreteMeasure& mu, std::span<const double> scales) {
  check_scales(mu, scales);
  const double finest = *std::min_element(scales.begin(), scales.end());
  const auto masses = ball_masses(mu, finest);
  const Atom* best = nullptr;
  for (const auto& a : mu.atoms()) {
    if (best == nullptr || masses[static_cast<std::size_t>(a.index)] > masses[static_cast<std::size_t>(best->index)]) {
      best = &a;
    }
  }
  BillingsleyReport rep;
  rep.center = mu.coords(*best);
  std::vector<double> values;
  for (double s : scales) values.push_back(ball_mass(mu, rep.center, s));
  rep.fit = make_report(scales, values);
  return rep;
}

}  // namespace rlab
