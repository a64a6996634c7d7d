#include "rlab/sweep.hpp"

#include <atomic>
#include <cmath>
#include <algorithm>
#include <exception>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "rlab/exponents.hpp"
#include "rlab/regularity.hpp"
#include "rlab/seed.hpp"

namespace rlab {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string format_double(double v) {
  std::ostringstream ss;
  ss << std::setprecision(12) << v;
  return ss.str();
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

std::uint64_t exponent_key(const Exponent& e) {
  if (e.is_infinite()) return 0xffffffffffffffffULL;
  const auto v = e.value();
  return derive_seed(static_cast<std::uint64_t>(v.numerator()), {static_cast<std::uint64_t>(v.denominator())});
}

}  // namespace

std::string to_string(Classification c) {
  switch (c) {
    case Classification::bounded: return "bounded";
    case Classification::growing: return "growing";
    case Classification::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Classification classification_from_string(const std::string& s) {
  if (s == "bounded") return Classification::bounded;
  if (s == "growing") return Classification::growing;
  if (s == "inconclusive") return Classification::inconclusive;
  throw std::invalid_argument("unknown classification '" + s + "'");
}

Classification classify(double slope, double tau_bounded, double tau_growing) {
  if (slope < tau_bounded) return Classification::bounded;
  if (slope > tau_growing) return Classification::growing;
  return Classification::inconclusive;
}

std::vector<Exponent> parse_exponent_grid(const std::string& spec) {
  std::vector<Exponent> out;
  if (spec.find(':') != std::string::npos) {
    const auto parts = split(spec, ':');
    if (parts.size() != 3) throw std::invalid_argument("grid must be a:b:step");
    const Rational a = parse_rational(parts[0]);
    const Rational b = parse_rational(parts[1]);
    const Rational step = parse_rational(parts[2]);
    if (step <= Rational(0)) throw std::invalid_argument("grid step must be positive");
    if (b < a) throw std::invalid_argument("grid end precedes start");
    for (Rational v = a; v <= b; v += step) out.emplace_back(v);
    return out;
  }
  for (const auto& part : split(spec, ',')) {
    if (!part.empty()) out.push_back(Exponent::parse(part));
  }
  if (out.empty()) throw std::invalid_argument("empty exponent grid");
  return out;
}

SweepGrid sweep(const DiscreteMeasure& mu, const SweepConfig& config) {
  if (!(config.tau_bounded < config.tau_growing)) throw std::invalid_argument("sweep needs tau_bounded < tau_growing");
  SweepGrid grid;
  grid.radii = config.radii;
  std::sort(grid.radii.begin(), grid.radii.end());
  if (config.gamma) {
    grid.gamma = *config.gamma;
  } else {
    const auto scales = geometric_scales(mu.resolution());
    grid.gamma = scales.size() >= 3 ? billingsley_gamma(mu, scales).fit.estimate : static_cast<double>(mu.dim());
  }
  const auto region = theorem_range(config.n, config.r);

  for (const auto& p : config.p_grid) {
    for (const auto& q : config.q_grid) {
      SweepCell cell;
      cell.p = p;
      cell.q = q;
      cell.in_theorem_region = region.contains(p, q);
      const Exponent pc = p.conjugate();
      cell.in_knapp_region =
          pc.is_infinite() || q.to_double() <= grid.gamma / static_cast<double>(mu.dim()) * pc.to_double() + 1e-12;
      grid.cells.push_back(std::move(cell));
    }
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < grid.cells.size(); i = next++) {
      auto& cell = grid.cells[i];
      try {
        ProbeOptions opts;
        opts.restarts = config.restarts;
        opts.max_iters = config.max_iters;
        opts.tol = config.tol;
        opts.seed = derive_seed(config.seed, {exponent_key(cell.p), exponent_key(cell.q)});
        const auto g = growth_exponent(mu, cell.p, cell.q, grid.radii, opts, config.max_entries);
        cell.norms = g.norms;
        cell.slope = g.fit.slope;
        cell.residual = g.fit.residual;
        cell.cls = classify(cell.slope, config.tau_bounded, config.tau_growing);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(grid.cells.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return grid;
}

std::string to_csv(const SweepGrid& grid, const std::vector<std::string>& header_comment) {
  std::ostringstream out;
  for (const auto& line : header_comment) out << "# " << line << "\n";
  out << "# gamma=" << format_double(grid.gamma) << "\n";
  out << "p,q";
  for (auto x : grid.radii) out << ",norm_X" << x;
  out << ",slope,residual,class,in_theorem_region,in_knapp_region\n";
  for (const auto& c : grid.cells) {
    out << c.p.str() << "," << c.q.str();
    for (double v : c.norms) out << "," << format_double(v);
    out << "," << format_double(c.slope) << "," << format_double(c.residual) << "," << to_string(c.cls) << ","
        << (c.in_theorem_region ? 1 : 0) << "," << (c.in_knapp_region ? 1 : 0) << "\n";
  }
  return out.str();
}

SweepGrid sweep_from_csv(const std::string& text) {
  SweepGrid grid;
  std::istringstream in(text);
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("#", 0) == 0) {
      const auto pos = line.find("gamma=");
      if (pos != std::string::npos) grid.gamma = parse_double(line.substr(pos + 6));
      continue;
    }
    const auto fields = split(line, ',');
    if (!header) {
      if (fields.size() < 7 || fields[0] != "p" || fields[1] != "q") throw std::invalid_argument("malformed sweep header");
      for (std::size_t i = 2; i + 5 < fields.size(); ++i) {
        if (fields[i].rfind("norm_X", 0) != 0) throw std::invalid_argument("malformed sweep header column");
        grid.radii.push_back(std::stoll(fields[i].substr(6)));
      }
      header = true;
      continue;
    }
    if (fields.size() != grid.radii.size() + 7) throw std::invalid_argument("malformed sweep row: '" + line + "'");
    SweepCell c;
    c.p = Exponent::parse(fields[0]);
    c.q = Exponent::parse(fields[1]);
    std::size_t k = 2;
    for (std::size_t i = 0; i < grid.radii.size(); ++i) c.norms.push_back(parse_double(fields[k++]));
    c.slope = parse_double(fields[k++]);
    c.residual = parse_double(fields[k++]);
    c.cls = classification_from_string(fields[k++]);
    c.in_theorem_region = fields[k++] == "1";
    c.in_knapp_region = fields[k++] == "1";
    grid.cells.push_back(std::move(c));
  }
  if (!header) throw std::invalid_argument("sweep CSV has no header");
  return grid;
}

}  // namespace rlab
