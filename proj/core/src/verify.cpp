#include "rlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>

#include "rlab/exponents.hpp"
#include "rlab/fft.hpp"
#include "rlab/regularity.hpp"

namespace rlab {

namespace {

// (sum |v|^t * weight)^{1/t}, max |v| when t is infinite.
double weighted_norm(std::span<const double> magnitudes, double weight, const Exponent& t) {
  double m = 0.0;
  for (double v : magnitudes) m = std::max(m, std::abs(v));
  if (t.is_infinite() || m == 0.0) return m;
  const double td = t.to_double();
  double sum = 0.0;
  for (double v : magnitudes) sum += std::pow(std::abs(v) / m, td);
  return m * std::pow(sum * weight, 1.0 / td);
}

std::vector<double> magnitudes(std::span<const Complex> v) {
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [](const Complex& z) { return std::abs(z); });
  return out;
}

double cell_volume(const GridShape& shape) { return 1.0 / static_cast<double>(shape.cells()); }

void check_size(std::size_t size, const GridShape& shape, const char* what) {
  if (static_cast<std::int64_t>(size) != shape.cells()) {
    throw std::invalid_argument(std::string(what) + ": expected one value per grid cell");
  }
}

// ||f||_{L^t(D)} for f on the grid and a density D; the sup runs over the support of D.
double density_weighted_norm(std::span<const Complex> f, std::span<const double> density, const GridShape& shape,
                             const Exponent& t) {
  const double v = cell_volume(shape);
  if (t.is_infinite()) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (density[i] > 0.0) m = std::max(m, std::abs(f[i]));
    }
    return m;
  }
  const double td = t.to_double();
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) sum += std::pow(std::abs(f[i]), td) * density[i] * v;
  return std::pow(sum, 1.0 / td);
}

std::vector<Complex> to_complex(std::span<const double> v) { return {v.begin(), v.end()}; }

std::vector<double> clamped_real(std::span<const Complex> v) {
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [](const Complex& z) { return std::max(0.0, z.real()); });
  return out;
}

double fejer(double u, std::int64_t half_width) {
  const double m = static_cast<double>(half_width + 1);
  const double d = std::sin(std::numbers::pi * u);
  if (std::abs(d) < 1e-15) return 1.0;
  const double v = std::sin(std::numbers::pi * m * u) / (m * d);
  return v * v;
}

double bump_lattice_norm(std::int64_t half_width, int dim, const Exponent& p) {
  const double m = static_cast<double>(half_width + 1);
  if (p.is_infinite()) return std::pow(1.0 / m, dim);
  const double pd = p.to_double();
  double sum = 0.0;
  for (std::int64_t x = -half_width; x <= half_width; ++x) {
    sum += std::pow((1.0 - static_cast<double>(std::abs(x)) / m) / m, pd);
  }
  return std::pow(sum, static_cast<double>(dim) / pd);
}

}  // namespace

nlohmann::json to_json(const VerifyTolerances& t) {
  return {{"chain_relative", t.chain_relative},
          {"hausdorff_young_relative", t.hausdorff_young_relative},
          {"oracle_absolute", t.oracle_absolute},
          {"prop1_margin", t.prop1_margin},
          {"prop2_diverging_slope", t.prop2_diverging_slope},
          {"prop3_margin", t.prop3_margin},
          {"knapp_violation", t.knapp_violation},
          {"bilinear_relative", t.bilinear_relative}};
}

VerifyTolerances tolerances_from_json(const nlohmann::json& j) {
  VerifyTolerances t;
  t.chain_relative = j.value("chain_relative", t.chain_relative);
  t.hausdorff_young_relative = j.value("hausdorff_young_relative", t.hausdorff_young_relative);
  t.oracle_absolute = j.value("oracle_absolute", t.oracle_absolute);
  t.prop1_margin = j.value("prop1_margin", t.prop1_margin);
  t.prop2_diverging_slope = j.value("prop2_diverging_slope", t.prop2_diverging_slope);
  t.prop3_margin = j.value("prop3_margin", t.prop3_margin);
  t.knapp_violation = j.value("knapp_violation", t.knapp_violation);
  t.bilinear_relative = j.value("bilinear_relative", t.bilinear_relative);
  return t;
}

bool InequalityCheck::holds(double relative_tol) const {
  const double scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
  if (identity) return std::abs(slack) <= relative_tol * scale;
  return slack >= -relative_tol * scale;
}

InequalityCheck make_check(std::string name, double lhs, double rhs, bool identity) {
  return InequalityCheck{std::move(name), lhs, rhs, rhs - lhs, identity};
}

InequalityCheck check_hausdorff_young(std::span<const Complex> density, const GridShape& shape, const Exponent& s) {
  check_size(density.size(), shape, "check_hausdorff_young");
  if (s < Exponent(2)) throw std::invalid_argument("Hausdorff-Young needs s >= 2");
  std::vector<Complex> c(density.begin(), density.end());
  fft::forward(c, shape);
  const double v = cell_volume(shape);
  for (auto& z : c) z *= v;
  const double lhs = weighted_norm(magnitudes(c), 1.0, s);
  const double rhs = weighted_norm(magnitudes(density), v, s.conjugate());
  return make_check("hausdorff_young", lhs, rhs, s == Exponent(2));
}

InequalityCheck check_hausdorff_young_lattice(std::span<const Complex> f, const GridShape& shape, const Exponent& s) {
  check_size(f.size(), shape, "check_hausdorff_young_lattice");
  if (s < Exponent(2)) throw std::invalid_argument("Hausdorff-Young needs s >= 2");
  std::vector<Complex> t(f.begin(), f.end());
  fft::forward(t, shape);
  const double lhs = weighted_norm(magnitudes(t), cell_volume(shape), s);
  const double rhs = weighted_norm(magnitudes(f), 1.0, s.conjugate());
  return make_check("hausdorff_young_lattice", lhs, rhs, s == Exponent(2));
}

bool ChainReport::steps_hold(double relative_tol) const {
  return std::all_of(steps.begin(), steps.end(), [&](const auto& c) { return c.holds(relative_tol); });
}

bool ChainReport::passes(const VerifyTolerances& tol) const {
  return steps_hold(tol.chain_relative) && end_to_end.holds(tol.chain_relative) && exponent_identity &&
         oracle_error <= tol.oracle_absolute;
}

std::vector<Complex> random_bounded_function(const GridShape& shape, std::uint64_t seed, double bound) {
  if (!(bound > 0.0)) throw std::invalid_argument("bound must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Complex> g(static_cast<std::size_t>(shape.cells()));
  for (auto& z : g) {
    const double re = normal(rng);
    const double im = normal(rng);
    z = {re, im};
    const double a = std::abs(z);
    if (a > bound) z *= bound / a;
  }
  return g;
}

std::vector<Complex> density_convolution_power(std::span<const Complex> h, const GridShape& shape, int n) {
  check_size(h.size(), shape, "density_convolution_power");
  if (n < 1) throw std::invalid_argument("convolution power needs n >= 1");
  std::vector<Complex> c(h.begin(), h.end());
  fft::forward(c, shape);
  const double v = cell_volume(shape);
  for (auto& z : c) z = std::pow(z * v, n);
  fft::inverse(c, shape);
  return c;
}

std::vector<Complex> materialized_inner_integral(std::span<const Complex> g, std::span<const double> density,
                                                 const GridShape& shape, int n) {
  check_size(g.size(), shape, "materialized_inner_integral");
  check_size(density.size(), shape, "materialized_inner_integral");
  if (n < 1) throw std::invalid_argument("materialized_inner_integral needs n >= 1");
  const auto cells = shape.cells();
  const double v = cell_volume(shape);
  auto diff = [&](std::int64_t a, std::int64_t b) {
    const auto ca = shape.coords(a);
    const auto cb = shape.coords(b);
    return shape.linear(shape.wrap({ca[0] - cb[0], ca[1] - cb[1]}));
  };
  std::vector<Complex> out(static_cast<std::size_t>(cells));
  for (std::int64_t xi = 0; xi < cells; ++xi) {
    // eta_0 = xi; walk eta_1 .. eta_{n-1} and close with g(eta_{n-1}) D(eta_{n-1})
    std::function<Complex(int, std::int64_t, Complex, double)> walk = [&](int depth, std::int64_t prev, Complex gp,
                                                                         double mp) -> Complex {
      if (depth == n) {
        const auto u = static_cast<std::size_t>(prev);
        return gp * g[u] * (mp * density[u]);
      }
      Complex acc{0.0, 0.0};
      for (std::int64_t eta = 0; eta < cells; ++eta) {
        const auto d = static_cast<std::size_t>(diff(prev, eta));
        if (density[d] == 0.0) continue;
        acc += walk(depth + 1, eta, gp * g[d], mp * density[d]);
      }
      return acc;
    };
    out[static_cast<std::size_t>(xi)] = walk(1, xi, {1.0, 0.0}, 1.0) * std::pow(v, n - 1);
  }
  return out;
}

ChainReport check_dual_chain(const DiscreteMeasure& mu, std::span<const Complex> g, int n, const Exponent& r,
                             const Exponent& p, double epsilon, double oracle_budget) {
  const auto& shape = mu.shape();
  check_size(g.size(), shape, "check_dual_chain");
  const auto ex = chain_exponents(n, r, p);

  ChainReport rep;
  rep.n = n;
  rep.r = r;
  rep.p = p;
  rep.q = ex.q;
  rep.s = ex.s;
  rep.epsilon = epsilon;
  rep.exponent_identity = exponent_identity(n, r, p);

  const auto dens = mollify(mu, epsilon);
  const auto& D = dens.values;
  const double v = cell_volume(shape);
  const auto cells = static_cast<std::size_t>(shape.cells());

  std::vector<Complex> h(cells);
  for (std::size_t i = 0; i < cells; ++i) h[i] = g[i] * D[i];
  std::vector<Complex> hat = h;
  fft::forward(hat, shape);
  for (auto& z : hat) z *= v;

  const Exponent ns = Exponent(n) * ex.s;
  const double lhs0 = std::pow(weighted_norm(magnitudes(hat), 1.0, ns), n);

  std::vector<Complex> hat_n(cells);
  for (std::size_t i = 0; i < cells; ++i) hat_n[i] = std::pow(hat[i], n);
  const double power_norm = weighted_norm(magnitudes(hat_n), 1.0, ex.s);
  rep.steps.push_back(make_check("power_identity", lhs0, power_norm, true));

  const auto h_n = density_convolution_power(h, shape, n);
  const double conv_norm = weighted_norm(magnitudes(h_n), v, ex.s_conj);
  rep.steps.push_back(make_check("hausdorff_young", power_norm, conv_norm));

  const auto D_n = clamped_real(density_convolution_power(to_complex(D), shape, n));
  double g_norm = 0.0;
  std::vector<double> holder(cells);
  if (ex.q_conj.is_infinite()) {
    g_norm = density_weighted_norm(g, D, shape, ex.q_conj);
    const double gn = std::pow(g_norm, n);
    for (std::size_t i = 0; i < cells; ++i) holder[i] = D_n[i] * gn;
  } else {
    const double qc = ex.q_conj.to_double();
    const double qd = ex.q.to_double();
    std::vector<Complex> weighted(cells);
    for (std::size_t i = 0; i < cells; ++i) weighted[i] = std::pow(std::abs(g[i]), qc) * D[i];
    const auto A = clamped_real(density_convolution_power(weighted, shape, n));
    for (std::size_t i = 0; i < cells; ++i) holder[i] = std::pow(D_n[i], 1.0 / qd) * std::pow(A[i], 1.0 / qc);
    g_norm = density_weighted_norm(g, D, shape, ex.q_conj);
  }
  const double holder_norm = weighted_norm(holder, v, ex.s_conj);
  rep.steps.push_back(make_check("inner_holder", conv_norm, holder_norm));

  const double inv_q = ex.q.is_infinite() ? 0.0 : 1.0 / ex.q.to_double();
  const double gn = std::pow(g_norm, n);
  const double mollified_bound = std::pow(density_norm(D_n, shape, r), inv_q) * gn;
  rep.steps.push_back(make_check("outer_holder", holder_norm, mollified_bound));

  const auto mu_n = convolve_power(mu, n);
  const double mu_norm = density_norm(mu_n, r);
  const double final_bound = std::pow(mu_norm, inv_q) * gn;
  rep.steps.push_back(make_check("young", mollified_bound, final_bound));

  rep.constant = std::pow(mu_norm, inv_q / n);
  rep.end_to_end = make_check("dual_estimate", std::pow(lhs0, 1.0 / n), rep.constant * g_norm);

  if (std::pow(static_cast<double>(cells), n) <= oracle_budget) {
    const auto direct = materialized_inner_integral(g, D, shape, n);
    double err = 0.0;
    double scale = 1.0;
    for (std::size_t i = 0; i < cells; ++i) {
      err = std::max(err, std::abs(direct[i] - h_n[i]));
      scale = std::max(scale, std::abs(h_n[i]));
    }
    rep.oracle_error = err / scale;
  }
  return rep;
}

Prop1Result check_prop1(const DiscreteMeasure& mu, int n, std::span<const double> scales, double margin) {
  if (n < 1) throw std::invalid_argument("check_prop1 needs n >= 1");
  Prop1Result res;
  res.n = n;
  res.alpha_measure = ahlfors_alpha(mu, scales).estimate;
  res.alpha_convolution = ahlfors_alpha(convolve_power(mu, n), scales).estimate;
  res.verdict = res.alpha_measure >= res.alpha_convolution / n - margin;
  return res;
}

Prop2Result check_prop2(const Spectrum& spectrum, double gamma, const Exponent& s,
                        std::span<const std::int64_t> truncations, double diverging_slope) {
  if (truncations.size() < 2) throw std::invalid_argument("check_prop2 needs at least 2 truncations");
  if (s.is_infinite() || !(s > Exponent(0))) throw std::invalid_argument("check_prop2 needs finite s > 0");
  Prop2Result res;
  res.truncations.assign(truncations.begin(), truncations.end());
  std::sort(res.truncations.begin(), res.truncations.end());
  if (res.truncations.back() > spectrum.truncation() || res.truncations.front() < 1) {
    throw std::invalid_argument("truncations must lie in [1, spectrum truncation]");
  }
  const double sd = s.to_double();
  const auto& coeffs = spectrum.coefficients();
  std::vector<double> sums(res.truncations.size(), 0.0);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const auto k = spectrum.frequency(i);
    const auto radius = std::max(std::abs(k[0]), std::abs(k[1]));
    const double term = std::pow(std::abs(coeffs[i]), sd);
    for (std::size_t t = 0; t < sums.size(); ++t) {
      if (radius <= res.truncations[t]) sums[t] += term;
    }
  }
  res.partial_sums = sums;
  std::vector<double> x(res.truncations.begin(), res.truncations.end());
  res.fit = fit_loglog(x, sums, false);
  res.diverging = res.fit.slope > diverging_slope;
  res.predicted_diverging = gamma <= 0.0 || sd < 2.0 * spectrum.dim() / gamma;
  return res;
}

std::vector<Index> greedy_packing(const DiscreteMeasure& mu, double radius) {
  const auto& shape = mu.shape();
  std::vector<Index> centers;
  if (shape.dim == 1) {
    const auto r = radius_cells(shape.n, radius);
    for (const auto& a : mu.atoms()) {
      if (a.weight <= 0.0) continue;
      const auto c = mu.coords(a);
      // atoms are sorted, so only the last and the first (across the wrap) can collide
      if (!centers.empty()) {
        if (std::abs(centered(c[0] - centers.back()[0], shape.n)) <= 2 * r) continue;
        if (std::abs(centered(c[0] - centers.front()[0], shape.n)) <= 2 * r) continue;
      }
      centers.push_back(c);
    }
    return centers;
  }
  const double sep = 2.0 * radius * static_cast<double>(shape.n);
  for (const auto& a : mu.atoms()) {
    if (a.weight <= 0.0) continue;
    const auto c = mu.coords(a);
    const bool clear = std::none_of(centers.begin(), centers.end(), [&](const Index& o) {
      const double dx = static_cast<double>(centered(c[0] - o[0], shape.n));
      const double dy = static_cast<double>(centered(c[1] - o[1], shape.n));
      return dx * dx + dy * dy <= sep * sep + 1e-9;
    });
    if (clear) centers.push_back(c);
  }
  return centers;
}

Prop3Result check_prop3(const DiscreteMeasure& mu, double gamma, std::span<const double> radii, double margin) {
  if (radii.size() < 2) throw std::invalid_argument("check_prop3 needs at least 2 radii");
  Prop3Result res;
  res.gamma = gamma;
  res.radii.assign(radii.begin(), radii.end());
  const auto ac = autocorrelation(mu);
  res.packing_bounds_hold = true;
  for (double eps : res.radii) {
    const double mass = ball_mass(ac, {0, 0}, eps);
    res.masses.push_back(mass);
    const auto centers = greedy_packing(mu, eps / 2.0);
    double bound = 0.0;
    for (const auto& c : centers) {
      const double b = ball_mass(mu, c, eps / 2.0);
      bound += b * b;
    }
    res.packing_counts.push_back(static_cast<std::int64_t>(centers.size()));
    res.packing_bounds.push_back(bound);
    if (bound > mass * (1.0 + 1e-9) + 1e-15) res.packing_bounds_hold = false;
  }
  res.fit = fit_loglog(res.radii, res.masses, false);
  res.verdict = res.fit.slope <= gamma + margin && res.packing_bounds_hold;
  return res;
}

double knapp_ratio(const DiscreteMeasure& mu, const Index& center, std::int64_t half_width, const Exponent& p,
                   const Exponent& q, double amplitude) {
  if (half_width < 0) throw std::invalid_argument("half width must be >= 0");
  if (!(amplitude > 0.0)) throw std::invalid_argument("amplitude must be positive");
  const auto& shape = mu.shape();
  const double n = static_cast<double>(shape.n);
  std::vector<double> values;
  std::vector<double> weights;
  for (const auto& a : mu.atoms()) {
    const auto c = mu.coords(a);
    double v = amplitude;
    for (int ax = 0; ax < shape.dim; ++ax) v *= fejer(static_cast<double>(c[ax] - center[ax]) / n, half_width);
    values.push_back(v);
    weights.push_back(a.weight);
  }
  double num = 0.0;
  if (q.is_infinite()) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (weights[i] > 0.0) num = std::max(num, values[i]);
    }
  } else {
    const double qd = q.to_double();
    for (std::size_t i = 0; i < values.size(); ++i) num += weights[i] * std::pow(values[i], qd);
    num = std::pow(num, 1.0 / qd);
  }
  return num / (amplitude * bump_lattice_norm(half_width, shape.dim, p));
}

KnappResult knapp_test(const DiscreteMeasure& mu, const Exponent& p, const Exponent& q, std::span<const double> widths,
                       double amplitude, double violation_threshold) {
  if (widths.size() < 2) throw std::invalid_argument("knapp_test needs at least 2 widths");
  const auto scales = geometric_scales(mu.resolution());
  if (scales.size() < 3) throw std::invalid_argument("knapp_test needs a resolution with at least 3 visible scales");
  const auto bill = billingsley_gamma(mu, scales);
  KnappResult res;
  res.center = bill.center;
  res.gamma = bill.fit.estimate;
  res.widths.assign(widths.begin(), widths.end());
  for (double w : res.widths) {
    if (!(w > 0.0) || w > 1.0) throw std::invalid_argument("knapp widths must lie in (0, 1]");
    const auto half = std::max<std::int64_t>(0, std::llround(1.0 / w) - 1);
    res.ratios.push_back(knapp_ratio(mu, res.center, half, p, q, amplitude));
  }
  res.fit = fit_loglog(res.widths, res.ratios, false);
  res.fitted = res.fit.slope;
  const double inv_q = q.is_infinite() ? 0.0 : 1.0 / q.to_double();
  const Exponent pc = p.conjugate();
  const double inv_pc = pc.is_infinite() ? 0.0 : 1.0 / pc.to_double();
  res.predicted = res.gamma * inv_q - mu.dim() * inv_pc;
  res.violation = res.fitted < violation_threshold;
  return res;
}

InequalityCheck check_bilinear(const DiscreteMeasure& mu, std::span<const Complex> f, std::span<const Complex> g,
                               const Exponent& p, double epsilon) {
  const auto& shape = mu.shape();
  check_size(f.size(), shape, "check_bilinear");
  check_size(g.size(), shape, "check_bilinear");
  if (p < Exponent(1)) throw std::invalid_argument("check_bilinear needs p >= 1");
  const auto dens = mollify(mu, epsilon);
  const auto& D = dens.values;
  const double v = cell_volume(shape);
  const auto cells = static_cast<std::size_t>(shape.cells());
  std::vector<Complex> F(cells), G(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    F[i] = f[i] * D[i];
    G[i] = g[i] * D[i];
  }
  auto conv = fft::circular_convolve(F, G, shape);
  for (auto& z : conv) z *= v;
  const double lhs = weighted_norm(magnitudes(conv), v, p);

  const auto DD = clamped_real(density_convolution_power(to_complex(D), shape, 2));
  const double sup = *std::max_element(DD.begin(), DD.end());
  const Exponent pc = p.conjugate();
  const double inv_pc = pc.is_infinite() ? 0.0 : 1.0 / pc.to_double();
  const double rhs =
      std::pow(sup, inv_pc) * density_weighted_norm(f, D, shape, p) * density_weighted_norm(g, D, shape, p);
  return make_check("bilinear", lhs, rhs);
}

}  // namespace rlab
