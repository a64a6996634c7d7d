#include "rlab/restriction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "rlab/errors.hpp"
#include "rlab/seed.hpp"

namespace rlab {

namespace {

using Eigen::VectorXcd;
using Eigen::VectorXd;

std::complex<double> phase_of(const std::complex<double>& z) {
  const double a = std::abs(z);
  return a > 0.0 ? z / a : std::complex<double>{0.0, 0.0};
}

double max_abs(const VectorXcd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

// Hoelder-extremal functional on L^q(mu) for u, up to a positive factor.
VectorXcd measure_dual(const VectorXcd& u, const VectorXd& w, const Exponent& q) {
  const double m = max_abs(u);
  VectorXcd v = VectorXcd::Zero(u.size());
  if (q.is_infinite()) {
    Eigen::Index best = -1;
    for (Eigen::Index j = 0; j < u.size(); ++j) {
      if (w[j] > 0.0 && (best < 0 || std::abs(u[j]) > std::abs(u[best]))) best = j;
    }
    if (best >= 0) v[best] = phase_of(u[best]);
    return v;
  }
  const double qd = q.to_double();
  for (Eigen::Index j = 0; j < u.size(); ++j) {
    const double a = std::abs(u[j]) / m;
    v[j] = w[j] * (qd == 1.0 ? 1.0 : std::pow(a, qd - 1.0)) * phase_of(u[j]);
  }
  return v;
}

// l^p-extremal vector for the functional z, normalized to unit l^p norm.
VectorXcd lattice_dual(const VectorXcd& z, const Exponent& p) {
  const double m = max_abs(z);
  VectorXcd f = VectorXcd::Zero(z.size());
  const Exponent pc = p.conjugate();
  if (pc.is_infinite()) {
    Eigen::Index best = 0;
    for (Eigen::Index x = 1; x < z.size(); ++x) {
      if (std::abs(z[x]) > std::abs(z[best])) best = x;
    }
    f[best] = phase_of(z[best]);
    return f;
  }
  const double e = pc.to_double() - 1.0;
  for (Eigen::Index x = 0; x < z.size(); ++x) {
    const double a = std::abs(z[x]) / m;
    f[x] = (e == 0.0 ? (a > 0.0 ? 1.0 : 0.0) : std::pow(a, e)) * phase_of(z[x]);
  }
  const double n = lattice_norm(f, p);
  return n > 0.0 ? VectorXcd(f / n) : f;
}

VectorXcd gaussian_start(Eigen::Index size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  VectorXcd f(size);
  for (Eigen::Index i = 0; i < size; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    f[i] = {re, im};
  }
  return f;
}

}  // namespace

ExtensionOperator::ExtensionOperator(const DiscreteMeasure& mu, std::int64_t lattice_radius, double max_entries)
    : dim_(mu.dim()), radius_(lattice_radius) {
  if (lattice_radius < 0) throw std::invalid_argument("lattice radius must be >= 0");
  const auto side = 2 * lattice_radius + 1;
  const std::int64_t rows = dim_ == 1 ? side : side * side;
  std::vector<const Atom*> atoms;
  for (const auto& a : mu.atoms()) {
    if (a.weight > 0.0) atoms.push_back(&a);
  }
  const double entries = static_cast<double>(rows) * static_cast<double>(atoms.size());
  if (entries > max_entries) throw BudgetExceeded("max_matrix_entries", entries, max_entries);

  lattice_.reserve(static_cast<std::size_t>(rows));
  for (std::int64_t i = -lattice_radius; i <= lattice_radius; ++i) {
    if (dim_ == 1) {
      lattice_.push_back({i, 0});
    } else {
      for (std::int64_t k = -lattice_radius; k <= lattice_radius; ++k) lattice_.push_back({i, k});
    }
  }

  const auto n = mu.resolution();
  std::vector<std::complex<double>> roots(static_cast<std::size_t>(n));
  for (std::int64_t t = 0; t < n; ++t) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(n);
    roots[static_cast<std::size_t>(t)] = {std::cos(a), std::sin(a)};
  }
  matrix_.resize(rows, static_cast<Eigen::Index>(atoms.size()));
  weights_.resize(static_cast<Eigen::Index>(atoms.size()));
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    const auto xi = mu.coords(*atoms[j]);
    weights_[static_cast<Eigen::Index>(j)] = atoms[j]->weight;
    for (std::int64_t r = 0; r < rows; ++r) {
      const auto& x = lattice_[static_cast<std::size_t>(r)];
      std::int64_t t = x[0] * xi[0] + x[1] * xi[1];
      t = ((t % n) + n) % n;
      matrix_(r, static_cast<Eigen::Index>(j)) = roots[static_cast<std::size_t>(t)];
    }
  }
}

Eigen::VectorXcd ExtensionOperator::apply_restriction(const Eigen::VectorXcd& f) const {
  return matrix_.adjoint() * f;
}

Eigen::VectorXcd ExtensionOperator::apply_extension(const Eigen::VectorXcd& v) const { return matrix_ * v; }

double lattice_norm(const Eigen::VectorXcd& f, const Exponent& p) {
  const double m = max_abs(f);
  if (p.is_infinite() || m == 0.0) return m;
  const double pd = p.to_double();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i) sum += std::pow(std::abs(f[i]) / m, pd);
  return m * std::pow(sum, 1.0 / pd);
}

double measure_norm(const Eigen::VectorXcd& u, const Eigen::VectorXd& weights, const Exponent& q) {
  if (u.size() != weights.size()) throw std::invalid_argument("measure_norm: size mismatch");
  double m = 0.0;
  for (Eigen::Index j = 0; j < u.size(); ++j) {
    if (weights[j] > 0.0) m = std::max(m, std::abs(u[j]));
  }
  if (q.is_infinite() || m == 0.0) return m;
  const double qd = q.to_double();
  double sum = 0.0;
  for (Eigen::Index j = 0; j < u.size(); ++j) sum += weights[j] * std::pow(std::abs(u[j]) / m, qd);
  return m * std::pow(sum, 1.0 / qd);
}

double rayleigh_quotient(const ExtensionOperator& op, const Eigen::VectorXcd& f, const Exponent& p,
                         const Exponent& q) {
  const double denom = lattice_norm(f, p);
  if (denom == 0.0) return 0.0;
  return measure_norm(op.apply_restriction(f), op.weights(), q) / denom;
}

ProbeResult restriction_norm(const ExtensionOperator& op, const Exponent& p, const Exponent& q,
                             const ProbeOptions& options) {
  if (p < Exponent(1) || q < Exponent(1)) throw std::invalid_argument("restriction_norm requires p, q >= 1");
  if (options.restarts < 0 || options.max_iters < 1) throw std::invalid_argument("invalid probe iteration limits");

  ProbeResult result;
  result.p = p;
  result.q = q;
  result.norm_lower_bound = -1.0;

  std::vector<VectorXcd> starts;
  for (const auto& w : options.warm_starts) {
    if (w.size() == op.lattice_size()) starts.push_back(w);
  }
  const auto warm = static_cast<int>(starts.size());
  for (int r = 0; r < options.restarts; ++r) {
    starts.push_back(gaussian_start(op.lattice_size(), derive_seed(options.seed, {static_cast<std::uint64_t>(r)})));
  }

  for (std::size_t s = 0; s < starts.size(); ++s) {
    VectorXcd f = starts[s];
    const double n0 = lattice_norm(f, p);
    if (!(n0 > 0.0) || !std::isfinite(n0)) continue;
    f /= n0;
    VectorXcd u = op.apply_restriction(f);
    double ratio = measure_norm(u, op.weights(), q);
    VectorXcd best_f = f;
    double best = ratio;
    std::vector<double> trace{ratio};
    bool converged = false;
    int iters = 0;
    for (; iters < options.max_iters; ++iters) {
      if (max_abs(u) == 0.0) break;
      const VectorXcd z = op.apply_extension(measure_dual(u, op.weights(), q));
      if (max_abs(z) == 0.0) break;
      VectorXcd next = lattice_dual(z, p);
      VectorXcd next_u = op.apply_restriction(next);
      const double next_ratio = measure_norm(next_u, op.weights(), q);
      if (!std::isfinite(next_ratio)) break;
      trace.push_back(next_ratio);
      if (next_ratio > best) {
        best = next_ratio;
        best_f = next;
      }
      const double change = std::abs(next_ratio - ratio) / std::max(ratio, 1e-300);
      f = std::move(next);
      u = std::move(next_u);
      ratio = next_ratio;
      if (change < options.tol) {
        converged = true;
        ++iters;
        break;
      }
    }
    if (best > result.norm_lower_bound) {
      result.norm_lower_bound = best;
      result.witness = best_f;
      result.trace = std::move(trace);
      result.iterations = iters;
      result.converged = converged;
    }
    if (static_cast<int>(s) >= warm) ++result.restarts_used;
  }
  if (result.witness.size() == 0) throw std::runtime_error("restriction_norm: no usable starting vector");
  // the certificate is the witness itself, not the iteration's bookkeeping
  result.norm_lower_bound = rayleigh_quotient(op, result.witness, p, q);
  return result;
}

Eigen::VectorXcd embed_lattice(const Eigen::VectorXcd& f, int dim, std::int64_t from, std::int64_t to) {
  if (to < from) throw std::invalid_argument("embed_lattice: target radius smaller than source");
  const auto side_from = 2 * from + 1;
  const auto side_to = 2 * to + 1;
  const auto off = to - from;
  if (dim == 1) {
    VectorXcd out = VectorXcd::Zero(side_to);
    out.segment(off, side_from) = f;
    return out;
  }
  VectorXcd out = VectorXcd::Zero(side_to * side_to);
  for (std::int64_t i = 0; i < side_from; ++i) {
    for (std::int64_t k = 0; k < side_from; ++k) out[(i + off) * side_to + (k + off)] = f[i * side_from + k];
  }
  return out;
}

GrowthResult growth_exponent(const DiscreteMeasure& mu, const Exponent& p, const Exponent& q,
                             std::span<const std::int64_t> radii, const ProbeOptions& options, double max_entries) {
  if (radii.size() < 4) throw std::invalid_argument("growth_exponent needs at least 4 lattice radii");
  std::vector<std::int64_t> sorted(radii.begin(), radii.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() || sorted.front() < 1) {
    throw std::invalid_argument("growth_exponent needs distinct positive radii");
  }
  GrowthResult out;
  out.radii = sorted;
  Eigen::VectorXcd previous;
  std::int64_t previous_radius = 0;
  for (auto radius : sorted) {
    const ExtensionOperator op(mu, radius, max_entries);
    ProbeOptions opts = options;
    opts.seed = derive_seed(options.seed, {static_cast<std::uint64_t>(radius)});
    if (previous.size() > 0) opts.warm_starts.push_back(embed_lattice(previous, mu.dim(), previous_radius, radius));
    auto res = restriction_norm(op, p, q, opts);
    out.norms.push_back(res.norm_lower_bound);
    previous = res.witness;
    previous_radius = radius;
    out.probes.push_back(std::move(res));
  }
  std::vector<double> x(sorted.begin(), sorted.end());
  out.fit = fit_loglog(x, out.norms, false);
  return out;
}

}  // namespace rlab
