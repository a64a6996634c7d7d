#include "rlab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <unordered_set>

#include "rlab/errors.hpp"
#include "rlab/fft.hpp"

namespace rlab {

namespace {

void renormalize(std::vector<Atom>& atoms) {
  double sum = 0.0;
  for (const auto& a : atoms) sum += a.weight;
  if (!(sum > 0.0)) throw std::invalid_argument("measure has no mass");
  for (auto& a : atoms) a.weight /= sum;
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(GridShape shape, std::vector<Atom> atoms, Descriptor descriptor)
    : shape_(shape), atoms_(std::move(atoms)), descriptor_(std::move(descriptor)) {
  check_shape(shape_);
  if (atoms_.empty()) throw std::invalid_argument("measure needs at least one atom");
  double sum = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const auto& a = atoms_[i];
    if (a.index < 0 || a.index >= shape_.cells()) throw std::invalid_argument("atom index out of range");
    if (!(a.weight >= 0.0) || !std::isfinite(a.weight)) throw std::invalid_argument("atom weight must be >= 0");
    if (i > 0 && atoms_[i - 1].index >= a.index) {
      throw std::invalid_argument("atoms must be sorted by index without duplicates");
    }
    sum += a.weight;
  }
  if (std::abs(sum - 1.0) > kMassTolerance) {
    throw std::invalid_argument("atom weights sum to " + std::to_string(sum) + ", expected 1");
  }
}

DiscreteMeasure DiscreteMeasure::normalized(GridShape shape, std::vector<Atom> atoms, Descriptor descriptor) {
  check_shape(shape);
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.index < b.index; });
  std::vector<Atom> merged;
  merged.reserve(atoms.size());
  for (const auto& a : atoms) {
    if (a.weight < 0.0) throw std::invalid_argument("negative atom weight");
    if (!merged.empty() && merged.back().index == a.index) {
      merged.back().weight += a.weight;
    } else {
      merged.push_back(a);
    }
  }
  std::erase_if(merged, [](const Atom& a) { return a.weight == 0.0; });
  renormalize(merged);
  return DiscreteMeasure(shape, std::move(merged), std::move(descriptor));
}

DiscreteMeasure DiscreteMeasure::from_dense(GridShape shape, std::span<const double> weights, Descriptor descriptor,
                                            double drop_below) {
  check_shape(shape);
  if (static_cast<std::int64_t>(weights.size()) != shape.cells()) {
    throw std::invalid_argument("dense grid size does not match shape");
  }
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] > drop_below) atoms.push_back({static_cast<std::int64_t>(i), weights[i]});
  }
  return normalized(shape, std::move(atoms), std::move(descriptor));
}

double DiscreteMeasure::total_mass() const {
  double sum = 0.0;
  for (const auto& a : atoms_) sum += a.weight;
  return sum;
}

std::vector<double> DiscreteMeasure::dense() const {
  std::vector<double> out(static_cast<std::size_t>(shape_.cells()), 0.0);
  for (const auto& a : atoms_) out[static_cast<std::size_t>(a.index)] = a.weight;
  return out;
}

double DiscreteMeasure::weight_at(std::int64_t linear_index) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), linear_index,
                             [](const Atom& a, std::int64_t i) { return a.index < i; });
  return (it != atoms_.end() && it->index == linear_index) ? it->weight : 0.0;
}

double MollifiedDensity::mass() const {
  const double sum = std::accumulate(values.begin(), values.end(), 0.0);
  return sum / static_cast<double>(shape.cells());
}

DiscreteMeasure dirac(int dim, std::int64_t resolution, Index index) {
  const GridShape shape{dim, resolution};
  check_shape(shape);
  for (int a = 0; a < dim; ++a) {
    if (index[a] < 0 || index[a] >= resolution) throw std::invalid_argument("dirac index out of range");
  }
  Descriptor d{"dirac", {{"index", std::vector<std::int64_t>(index.begin(), index.begin() + dim)}}, 0};
  return DiscreteMeasure(shape, {{shape.linear(index), 1.0}}, std::move(d));
}

DiscreteMeasure uniform(int dim, std::int64_t resolution) {
  const GridShape shape{dim, resolution};
  check_shape(shape);
  std::vector<Atom> atoms(static_cast<std::size_t>(shape.cells()));
  const double w = 1.0 / static_cast<double>(shape.cells());
  for (std::size_t i = 0; i < atoms.size(); ++i) atoms[i] = {static_cast<std::int64_t>(i), w};
  return DiscreteMeasure::normalized(shape, std::move(atoms), {"uniform", nlohmann::json::object(), 0});
}

DiscreteMeasure interval(std::int64_t resolution, std::int64_t start, std::int64_t length) {
  const GridShape shape{1, resolution};
  check_shape(shape);
  if (length < 1 || length > resolution) throw std::invalid_argument("interval length out of range");
  std::vector<Atom> atoms;
  for (std::int64_t i = 0; i < length; ++i) atoms.push_back({((start + i) % resolution + resolution) % resolution, 1.0});
  return DiscreteMeasure::normalized(shape, std::move(atoms),
                                     {"interval", {{"start", start}, {"length", length}}, 0});
}

DiscreteMeasure cantor(const CantorOptions& options) {
  const auto& digits = options.digits;
  if (options.stage < 1) throw std::invalid_argument("cantor stage must be >= 1");
  if (options.base < 2) throw std::invalid_argument("cantor base must be >= 2");
  if (digits.empty()) throw std::invalid_argument("cantor digit set is empty");
  std::unordered_set<std::int64_t> seen;
  for (auto d : digits) {
    if (d < 0 || d >= options.base) throw std::invalid_argument("cantor digit outside [0, base)");
    if (!seen.insert(d).second) throw std::invalid_argument("duplicate cantor digit");
  }
  const double count = std::pow(static_cast<double>(digits.size()), options.stage);
  if (count > static_cast<double>(options.max_atoms)) {
    throw BudgetExceeded("max_atoms", count, static_cast<double>(options.max_atoms));
  }
  std::int64_t n = 1;
  for (int k = 0; k < options.stage; ++k) n *= options.base;
  if (!is_power_of_two(n)) throw std::invalid_argument("cantor resolution base^stage must be a power of two");

  std::vector<std::int64_t> indices{0};
  for (int k = 0; k < options.stage; ++k) {
    std::vector<std::int64_t> next;
    next.reserve(indices.size() * digits.size());
    for (auto i : indices) {
      for (auto d : digits) next.push_back(i * options.base + d);
    }
    indices = std::move(next);
  }
  std::vector<Atom> atoms;
  atoms.reserve(indices.size());
  for (auto i : indices) atoms.push_back({i, 1.0});

  Descriptor desc{"cantor",
                  {{"base", options.base},
                   {"digits", digits},
                   {"stage", options.stage},
                   {"similarity_dimension",
                    std::log(static_cast<double>(digits.size())) / std::log(static_cast<double>(options.base))}},
                  0};
  return DiscreteMeasure::normalized({1, n}, std::move(atoms), std::move(desc));
}

double random_flat_threshold(std::int64_t resolution, std::int64_t atoms, double flatness_bound) {
  const double n = static_cast<double>(resolution);
  const double m = static_cast<double>(atoms);
  return flatness_bound * std::max(1.0, m * m / n) * std::log(n);
}

FlatnessNotReached::FlatnessNotReached(DiscreteMeasure best, double ratio)
    : std::runtime_error("random_flat: retries exhausted; best flatness ratio " + std::to_string(ratio)),
      best_(std::move(best)),
      ratio_(ratio) {}

namespace {

// Largest off-zero difference count max_{t != 0} #{(a, b) in S^2 : a - b = t}.
std::int64_t max_offzero_autocorrelation(const std::vector<std::int64_t>& set, std::int64_t n) {
  std::vector<double> indicator(static_cast<std::size_t>(n), 0.0);
  for (auto s : set) indicator[static_cast<std::size_t>(s)] = 1.0;
  auto spec = fft::forward_real(indicator, {1, n});
  for (auto& c : spec) c = std::norm(c);
  fft::inverse(spec, {1, n});
  std::int64_t best = 0;
  for (std::int64_t t = 1; t < n; ++t) {
    best = std::max<std::int64_t>(best, std::llround(spec[static_cast<std::size_t>(t)].real() / static_cast<double>(n)));
  }
  return best;
}

}  // namespace

DiscreteMeasure random_flat(const RandomFlatOptions& o) {
  const GridShape shape{1, o.resolution};
  check_shape(shape);
  if (o.atoms < 1 || o.atoms > o.resolution) throw std::invalid_argument("random_flat requires 1 <= m <= N");
  if (o.max_retries < 0) throw std::invalid_argument("random_flat: max_retries must be >= 0");

  const double threshold = random_flat_threshold(o.resolution, o.atoms, o.flatness_bound);
  const double scale = std::max(1.0, static_cast<double>(o.atoms) * static_cast<double>(o.atoms) /
                                         static_cast<double>(o.resolution)) *
                       std::log(static_cast<double>(o.resolution));

  std::mt19937_64 rng(o.seed);
  std::vector<std::int64_t> pool(static_cast<std::size_t>(o.resolution));
  std::vector<std::int64_t> best_set;
  double best_ratio = std::numeric_limits<double>::infinity();
  std::int64_t best_max = 0;
  int attempts = 0;

  for (int attempt = 0; attempt <= o.max_retries; ++attempt) {
    ++attempts;
    std::iota(pool.begin(), pool.end(), std::int64_t{0});
    // partial Fisher-Yates: the first m entries are a uniform m-subset
    for (std::int64_t i = 0; i < o.atoms; ++i) {
      std::uniform_int_distribution<std::int64_t> pick(i, o.resolution - 1);
      std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick(rng))]);
    }
    std::vector<std::int64_t> set(pool.begin(), pool.begin() + o.atoms);
    const auto max_r = max_offzero_autocorrelation(set, o.resolution);
    const double ratio = static_cast<double>(max_r) / scale;
    if (ratio < best_ratio) {
      best_ratio = ratio;
      best_set = std::move(set);
      best_max = max_r;
    }
    if (static_cast<double>(max_r) <= threshold) break;
  }

  std::vector<Atom> atoms;
  atoms.reserve(best_set.size());
  for (auto s : best_set) atoms.push_back({s, 1.0});
  Descriptor desc{"random_flat",
                  {{"m", o.atoms},
                   {"flatness_bound", o.flatness_bound},
                   {"max_retries", o.max_retries},
                   {"threshold", threshold},
                   {"max_offzero_count", best_max},
                   {"flatness_ratio", best_ratio},
                   {"attempts", attempts},
                   {"retries", attempts - 1}},
                  o.seed};
  auto mu = DiscreteMeasure::normalized(shape, std::move(atoms), std::move(desc));
  if (static_cast<double>(best_max) > threshold) throw FlatnessNotReached(std::move(mu), best_ratio);
  return mu;
}

DiscreteMeasure circle(std::int64_t resolution, double radius) {
  const GridShape shape{2, resolution};
  check_shape(shape);
  if (!(radius > 0.0 && radius < 0.5)) throw std::invalid_argument("circle radius must lie in (0, 1/2)");
  const auto points = static_cast<std::int64_t>(std::ceil(2.0 * std::numbers::pi * radius * static_cast<double>(resolution)));
  std::vector<Atom> atoms;
  atoms.reserve(static_cast<std::size_t>(points));
  const double n = static_cast<double>(resolution);
  for (std::int64_t i = 0; i < points; ++i) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(points);
    const Index idx{std::llround((0.5 + radius * std::cos(theta)) * n), std::llround((0.5 + radius * std::sin(theta)) * n)};
    atoms.push_back({shape.linear(shape.wrap(idx)), 1.0});
  }
  return DiscreteMeasure::normalized(shape, std::move(atoms),
                                     {"circle", {{"radius", radius}, {"points", points}}, 0});
}

DiscreteMeasure reflect(const DiscreteMeasure& mu) {
  const auto& shape = mu.shape();
  std::vector<Atom> atoms;
  atoms.reserve(mu.size());
  for (const auto& a : mu.atoms()) {
    auto c = mu.coords(a);
    for (int ax = 0; ax < shape.dim; ++ax) c[ax] = -c[ax];
    atoms.push_back({shape.linear(shape.wrap(c)), a.weight});
  }
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.index < b.index; });
  Descriptor desc = mu.descriptor();
  desc.params["reflected"] = !desc.params.value("reflected", false);
  return DiscreteMeasure(shape, std::move(atoms), std::move(desc));
}

DiscreteMeasure confine(const DiscreteMeasure& mu, int n_max) {
  if (n_max < 1) throw std::invalid_argument("confine: n_max must be >= 1");
  const auto& shape = mu.shape();
  std::int64_t factor = 1;
  while (factor < 2 * n_max) factor *= 2;
  const GridShape fine{shape.dim, shape.n * factor};
  std::vector<Atom> atoms;
  atoms.reserve(mu.size());
  for (const auto& a : mu.atoms()) atoms.push_back({fine.linear(mu.coords(a)), a.weight});
  Descriptor desc = mu.descriptor();
  desc.params["confine"] = {{"n_max", n_max}, {"factor", factor}};
  return DiscreteMeasure(fine, std::move(atoms), std::move(desc));
}

std::vector<double> triangular_kernel(const GridShape& shape, double epsilon) {
  if (!(epsilon >= 1.0)) throw std::invalid_argument("mollifier half-width must be >= 1 cell");
  if (epsilon > static_cast<double>(shape.n) / 2.0) throw std::invalid_argument("mollifier wider than the grid");
  std::vector<double> axis(static_cast<std::size_t>(shape.n), 0.0);
  double axis_sum = 0.0;
  for (std::int64_t i = 0; i < shape.n; ++i) {
    const double t = std::abs(static_cast<double>(centered(i, shape.n)));
    axis[static_cast<std::size_t>(i)] = std::max(0.0, epsilon - t);
    axis_sum += axis[static_cast<std::size_t>(i)];
  }
  for (auto& v : axis) v /= axis_sum;
  if (shape.dim == 1) return axis;
  std::vector<double> out(static_cast<std::size_t>(shape.cells()));
  for (std::int64_t i = 0; i < shape.n; ++i) {
    for (std::int64_t j = 0; j < shape.n; ++j) {
      out[static_cast<std::size_t>(i * shape.n + j)] = axis[static_cast<std::size_t>(i)] * axis[static_cast<std::size_t>(j)];
    }
  }
  return out;
}

MollifiedDensity mollify(const DiscreteMeasure& mu, double epsilon) {
  const auto& shape = mu.shape();
  const auto kernel = triangular_kernel(shape, epsilon);
  auto values = fft::circular_convolve(mu.dense(), kernel, shape);
  const double cells = static_cast<double>(shape.cells());
  // FFT round-off outside the kernel's support is zeroed
  const double floor = 1e-13 * *std::max_element(values.begin(), values.end());
  double sum = 0.0;
  for (auto& v : values) {
    if (v <= floor) v = 0.0;
    sum += v;
  }
  for (auto& v : values) v = v / sum * cells;
  return MollifiedDensity{shape, std::move(values), epsilon};
}

}  // namespace rlab
