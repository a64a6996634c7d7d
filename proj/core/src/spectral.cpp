#include "rlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rlab/errors.hpp"
#include "rlab/fft.hpp"

namespace rlab {

namespace {

// FFT output below this magnitude is treated as round-off at unreachable sites.
constexpr double kDropTolerance = 1e-13;
constexpr double kNegativeTolerance = 1e-8;
constexpr double kDirectBudget = 1 << 24;

std::vector<Complex> unit_roots(std::int64_t n) {
  std::vector<Complex> roots(static_cast<std::size_t>(n));
  for (std::int64_t t = 0; t < n; ++t) {
    const double a = -2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(n);
    roots[static_cast<std::size_t>(t)] = {std::cos(a), std::sin(a)};
  }
  return roots;
}

void require_same_grid(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  if (!(a.shape() == b.shape())) throw std::invalid_argument("measures live on different grids");
}

DiscreteMeasure from_fft_values(const GridShape& shape, std::vector<double> values, Descriptor desc) {
  double worst = 0.0;
  for (auto& v : values) {
    if (v < 0.0) worst = std::max(worst, -v);
    if (v <= kDropTolerance) v = 0.0;
  }
  if (worst > kNegativeTolerance) {
    throw PrecisionError("convolution produced negative mass " + std::to_string(-worst) +
                         "; resolution or precision is insufficient");
  }
  return DiscreteMeasure::from_dense(shape, values, std::move(desc));
}

DiscreteMeasure convolve_direct(const DiscreteMeasure& a, const DiscreteMeasure& b, Descriptor desc) {
  const auto& shape = a.shape();
  std::vector<double> out(static_cast<std::size_t>(shape.cells()), 0.0);
  for (const auto& x : a.atoms()) {
    const auto cx = a.coords(x);
    for (const auto& y : b.atoms()) {
      const auto cy = b.coords(y);
      const auto t = shape.wrap({cx[0] + cy[0], cx[1] + cy[1]});
      out[static_cast<std::size_t>(shape.linear(t))] += x.weight * y.weight;
    }
  }
  return DiscreteMeasure::from_dense(shape, out, std::move(desc));
}

Method resolve(Method m, double direct_cost) {
  if (m != Method::automatic) return m;
  return direct_cost <= kDirectBudget ? Method::direct : Method::fft;
}

}  // namespace

Spectrum::Spectrum(int dim, std::int64_t truncation) : dim_(dim), truncation_(truncation) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("spectrum dimension must be 1 or 2");
  if (truncation < 0) throw std::invalid_argument("spectrum truncation must be >= 0");
  const auto side = static_cast<std::size_t>(2 * truncation + 1);
  coefficients_.assign(dim == 1 ? side : side * side, Complex{});
}

std::size_t Spectrum::offset(std::int64_t k0, std::int64_t k1) const {
  if (std::abs(k0) > truncation_ || std::abs(k1) > truncation_ || (dim_ == 1 && k1 != 0)) {
    throw std::out_of_range("frequency outside spectrum truncation");
  }
  const auto a = static_cast<std::size_t>(k0 + truncation_);
  if (dim_ == 1) return a;
  return a * static_cast<std::size_t>(side()) + static_cast<std::size_t>(k1 + truncation_);
}

Index Spectrum::frequency(std::size_t i) const {
  const auto s = static_cast<std::size_t>(side());
  if (dim_ == 1) return {static_cast<std::int64_t>(i) - truncation_, 0};
  return {static_cast<std::int64_t>(i / s) - truncation_, static_cast<std::int64_t>(i % s) - truncation_};
}

Spectrum fourier(const DiscreteMeasure& mu, std::int64_t truncation, Method method) {
  const auto& shape = mu.shape();
  Spectrum out(shape.dim, truncation);
  const double lattice = static_cast<double>(out.size());
  if (method == Method::automatic) {
    const bool fft_ok = 2 * truncation <= shape.n;
    method = (fft_ok && static_cast<double>(mu.size()) * lattice > static_cast<double>(shape.cells()) * 8.0)
                 ? Method::fft
                 : Method::direct;
  }
  if (method == Method::fft) {
    if (2 * truncation > shape.n) throw std::invalid_argument("FFT path requires K <= N/2");
    const auto grid = fft::forward_real(mu.dense(), shape);
    for (std::size_t i = 0; i < out.size(); ++i) {
      const auto k = shape.wrap(out.frequency(i));
      out.coefficients()[i] = grid[static_cast<std::size_t>(shape.linear(k))];
    }
    return out;
  }
  const auto roots = unit_roots(shape.n);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto k = out.frequency(i);
    Complex sum{};
    for (const auto& a : mu.atoms()) {
      const auto j = mu.coords(a);
      std::int64_t phase = (k[0] % shape.n) * j[0] + (k[1] % shape.n) * j[1];
      phase = ((phase % shape.n) + shape.n) % shape.n;
      sum += a.weight * roots[static_cast<std::size_t>(phase)];
    }
    out.coefficients()[i] = sum;
  }
  return out;
}

DiscreteMeasure convolve(const DiscreteMeasure& a, const DiscreteMeasure& b, Method method) {
  require_same_grid(a, b);
  Descriptor desc{"convolution", {{"left", a.descriptor().kind}, {"right", b.descriptor().kind}}, a.descriptor().seed};
  method = resolve(method, static_cast<double>(a.size()) * static_cast<double>(b.size()));
  if (method == Method::direct) return convolve_direct(a, b, std::move(desc));
  return from_fft_values(a.shape(), fft::circular_convolve(a.dense(), b.dense(), a.shape()), std::move(desc));
}

DiscreteMeasure convolve_power(const DiscreteMeasure& mu, int n, Method method) {
  if (n < 1) throw std::invalid_argument("convolution power requires n >= 1");
  if (n == 1) return mu;
  const auto& shape = mu.shape();
  Descriptor desc{"convolution_power", {{"base", mu.descriptor().kind}, {"n", n}}, mu.descriptor().seed};

  // Cost of repeated sparse convolution, with support growth capped by the grid.
  double cost = 0.0;
  double support = static_cast<double>(mu.size());
  for (int k = 1; k < n; ++k) {
    cost += support * static_cast<double>(mu.size());
    support = std::min(support * static_cast<double>(mu.size()), static_cast<double>(shape.cells()));
  }
  method = resolve(method, cost);
  if (method == Method::direct) {
    DiscreteMeasure acc = mu;
    for (int k = 1; k < n; ++k) acc = convolve_direct(acc, mu, desc);
    return acc;
  }
  auto spec = fft::forward_real(mu.dense(), shape);
  for (auto& c : spec) c = std::pow(c, n);
  fft::inverse(spec, shape);
  std::vector<double> values(spec.size());
  const double scale = 1.0 / static_cast<double>(shape.cells());
  for (std::size_t i = 0; i < spec.size(); ++i) values[i] = spec[i].real() * scale;
  return from_fft_values(shape, std::move(values), std::move(desc));
}

DiscreteMeasure autocorrelation(const DiscreteMeasure& mu, Method method) {
  auto out = convolve(mu, reflect(mu), method);
  out.descriptor().kind = "autocorrelation";
  return out;
}

double density_norm(const std::vector<double>& density, const GridShape& shape, const Exponent& r) {
  if (r < Exponent(1)) throw std::invalid_argument("density_norm requires r >= 1");
  if (r.is_infinite()) {
    double m = 0.0;
    for (double v : density) m = std::max(m, std::abs(v));
    return m;
  }
  const double rr = r.to_double();
  double sum = 0.0;
  for (double v : density) sum += std::pow(std::abs(v), rr);
  return std::pow(sum / static_cast<double>(shape.cells()), 1.0 / rr);
}

double density_norm(const DiscreteMeasure& mu, const Exponent& r) {
  if (r < Exponent(1)) throw std::invalid_argument("density_norm requires r >= 1");
  const double cells = static_cast<double>(mu.shape().cells());
  if (r.is_infinite()) {
    double m = 0.0;
    for (const auto& a : mu.atoms()) m = std::max(m, a.weight);
    return m * cells;
  }
  const double rr = r.to_double();
  double sum = 0.0;
  for (const auto& a : mu.atoms()) sum += std::pow(a.weight * cells, rr);
  return std::pow(sum / cells, 1.0 / rr);
}

Flatness flatness(const DiscreteMeasure& mu) {
  const auto ac = autocorrelation(mu);
  Flatness f;
  const double zero = ac.weight_at(0);
  const double off_mass = std::max(0.0, 1.0 - zero);
  const double sites = static_cast<double>(mu.shape().cells() - 1);
  for (const auto& a : ac.atoms()) {
    if (a.index != 0) f.max_offzero = std::max(f.max_offzero, a.weight);
  }
  if (f.max_offzero == 0.0 || sites == 0.0) return Flatness{};
  f.mean_offzero = off_mass / sites;
  f.ratio = f.max_offzero / f.mean_offzero;
  return f;
}

}  // namespace rlab
