#include "rlab/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "rlab/config.hpp"
#include "rlab/errors.hpp"
#include "rlab/exponents.hpp"
#include "rlab/io.hpp"
#include "rlab/regularity.hpp"
#include "rlab/restriction.hpp"
#include "rlab/seed.hpp"
#include "rlab/spectral.hpp"
#include "rlab/verify.hpp"

namespace rlab::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Globals {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 20240601;
  bool seed_given = false;
  unsigned threads = 1;
};

std::string fmt(double v, int precision = 6) {
  std::ostringstream ss;
  ss << std::setprecision(precision) << v;
  return ss.str();
}

std::vector<std::int64_t> parse_int_list(const std::string& s) {
  std::vector<std::int64_t> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const auto v = std::stoll(item, &used);
    if (used != item.size()) throw UsageError("bad integer '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw UsageError("empty integer list");
  return out;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    out.push_back(boost::rational_cast<double>(parse_rational(item)));
  }
  if (out.empty()) throw UsageError("empty number list");
  return out;
}

Method parse_method(const std::string& s) {
  if (s == "auto") return Method::automatic;
  if (s == "fft") return Method::fft;
  if (s == "direct") return Method::direct;
  throw UsageError("unknown method '" + s + "'");
}

json exponent_json(const Exponent& e) { return e.str(); }

class Session {
 public:
  Session(const Globals& g, std::ostream& out, std::ostream& err) : globals_(g), out_(out), err_(err) {
    if (!g.config_path.empty()) config_ = config_from_json(json::parse(read_file(g.config_path)));
    if (g.seed_given) config_.seed = g.seed;
    if (!g.out_dir.empty()) {
      config_.output_dir = g.out_dir;
    } else if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') {
      config_.output_dir = env;
    }
  }

  const ExperimentConfig& config() const { return config_; }
  std::ostream& out() { return out_; }
  std::ostream& err() { return err_; }
  unsigned threads() const { return globals_.threads; }

  fs::path resolve(const std::string& name) const {
    const fs::path p(name);
    return p.is_absolute() || p.has_parent_path() ? p : config_.output_dir / p;
  }

  json envelope(const std::string& kind) const {
    return {{"schema_version", kSchemaVersion}, {"kind", kind}, {"config_hash", config_.hash()},
            {"seed", config_.seed}, {"config", to_json(config_)}};
  }

  void write_json(const std::string& name, const json& j) {
    const auto path = resolve(name);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    write_atomically(path, j.dump(2) + "\n");
    out_ << "wrote " << path.string() << "\n";
  }

  void write_text(const std::string& name, const std::string& text) {
    const auto path = resolve(name);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    write_atomically(path, text);
    out_ << "wrote " << path.string() << "\n";
  }

  DiscreteMeasure load(const std::string& name) const {
    if (name.empty()) throw UsageError("--measure is required");
    return load_measure(resolve(name));
  }

 private:
  Globals globals_;
  ExperimentConfig config_;
  std::ostream& out_;
  std::ostream& err_;
};

// measure ---------------------------------------------------------------------

struct MeasureArgs {
  std::string kind;
  int dim = 1;
  std::int64_t resolution = 256;
  std::string at = "0";
  std::int64_t start = 0;
  std::int64_t length = 1;
  std::int64_t base = 4;
  std::string digits = "0,3";
  int stage = 4;
  std::int64_t atoms = 185;
  double flatness = 4.0;
  int retries = 200;
  double radius = 0.25;
  bool reflected = false;
  int confine_n = 0;
  std::string out = "measure.json";
};

int cmd_measure_new(Session& s, const MeasureArgs& a) {
  const auto& budgets = s.config().budgets;
  DiscreteMeasure mu = [&]() -> DiscreteMeasure {
    if (a.kind == "dirac") {
      const auto c = parse_int_list(a.at);
      if (static_cast<int>(c.size()) != a.dim) throw UsageError("--at needs one coordinate per axis");
      return dirac(a.dim, a.resolution, {c[0], a.dim == 2 ? c[1] : 0});
    }
    if (a.kind == "uniform") return uniform(a.dim, a.resolution);
    if (a.kind == "interval") return interval(a.resolution, a.start, a.length);
    if (a.kind == "cantor") {
      CantorOptions o;
      o.base = a.base;
      o.digits = parse_int_list(a.digits);
      o.stage = a.stage;
      o.max_atoms = budgets.max_atoms;
      return cantor(o);
    }
    if (a.kind == "random_flat") {
      RandomFlatOptions o;
      o.resolution = a.resolution;
      o.atoms = a.atoms;
      o.seed = s.config().seed;
      o.flatness_bound = a.flatness;
      o.max_retries = a.retries;
      return random_flat(o);
    }
    if (a.kind == "circle") return circle(a.resolution, a.radius);
    throw UsageError("unknown measure kind '" + a.kind + "'");
  }();
  if (mu.size() > budgets.max_atoms) throw BudgetExceeded("max_atoms", double(mu.size()), double(budgets.max_atoms));
  if (a.reflected) mu = reflect(mu);
  if (a.confine_n > 0) mu = confine(mu, a.confine_n);
  s.out() << "measure " << mu.descriptor().kind << ": dim " << mu.dim() << ", N " << mu.resolution() << ", "
          << mu.size() << " atoms\n";
  const auto path = s.resolve(a.out);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  save_measure(mu, path);
  s.out() << "wrote " << path.string() << "\n";
  return kExitOk;
}

// analyze ---------------------------------------------------------------------

struct AnalyzeArgs {
  std::string measure;
  bool alpha = false;
  bool beta = false;
  bool gamma = false;
  bool flat = false;
  std::int64_t truncation = 0;
  double base = 2.0;
  std::string out = "analysis.json";
};

json report_json(const RegularityReport& r) {
  json pts = json::array();
  for (const auto& p : r.points) pts.push_back({p.scale, p.value});
  return {{"estimate", r.estimate}, {"slope", r.fit.slope},           {"residual", r.fit.residual},
          {"reliable", r.fit.reliable}, {"window", {r.window_min, r.window_max}}, {"points", pts}};
}

int cmd_analyze(Session& s, AnalyzeArgs a) {
  const auto mu = s.load(a.measure);
  if (!a.alpha && !a.beta && !a.gamma && !a.flat) a.alpha = a.beta = a.gamma = a.flat = true;
  auto j = s.envelope("analysis");
  j["measure"] = {{"kind", mu.descriptor().kind}, {"dim", mu.dim()}, {"N", mu.resolution()}, {"atoms", mu.size()}};
  const auto scales = geometric_scales(mu.resolution(), a.base);
  if (a.alpha) {
    const auto r = ahlfors_alpha(mu, scales);
    j["alpha"] = report_json(r);
    s.out() << "alpha = " << fmt(r.estimate, 4) << " (residual " << fmt(r.fit.residual, 3) << ")\n";
  }
  if (a.beta) {
    const auto K = a.truncation > 0 ? a.truncation : std::min<std::int64_t>(mu.resolution() / 2, 512);
    const auto r = fourier_beta(fourier(mu, K), a.base);
    j["beta"] = {{"sup", report_json(r.sup)}, {"average", report_json(r.average)}, {"truncation", K}};
    s.out() << "beta = " << fmt(r.sup.estimate, 4) << " (sup), " << fmt(r.average.estimate, 4) << " (average)\n";
  }
  if (a.gamma) {
    const auto r = billingsley_gamma(mu, scales);
    j["gamma"] = report_json(r.fit);
    j["gamma"]["center"] = {r.center[0], r.center[1]};
    s.out() << "gamma = " << fmt(r.fit.estimate, 4) << " at (" << r.center[0];
    if (mu.dim() == 2) s.out() << ", " << r.center[1];
    s.out() << ")\n";
  }
  if (a.flat) {
    const auto f = flatness(mu);
    j["flatness"] = {{"max_offzero", f.max_offzero}, {"mean_offzero", f.mean_offzero}, {"ratio", f.ratio}};
    s.out() << "flatness ratio = " << fmt(f.ratio, 4) << "\n";
  }
  s.write_json(a.out, j);
  return kExitOk;
}

// conv ------------------------------------------------------------------------

struct ConvArgs {
  std::string measure;
  int n = 2;
  std::string r = "inf";
  std::string method = "auto";
  std::string resolutions;
  std::string out;
};

std::int64_t rescale(std::int64_t v, std::int64_t from, std::int64_t to) {
  return static_cast<std::int64_t>(static_cast<double>(v) * static_cast<double>(to) / static_cast<double>(from));
}

// Rebuilds a stage-parameterized measure at resolution N from its descriptor.
DiscreteMeasure rebuild_at(const DiscreteMeasure& mu, std::int64_t N) {
  const auto& d = mu.descriptor();
  const auto n0 = mu.resolution();
  if (d.kind == "uniform") return uniform(mu.dim(), N);
  if (d.kind == "dirac") {
    const auto idx = d.params.at("index").get<std::vector<std::int64_t>>();
    return dirac(mu.dim(), N, {rescale(idx[0], n0, N), mu.dim() == 2 ? rescale(idx[1], n0, N) : 0});
  }
  if (d.kind == "interval") {
    return interval(N, rescale(d.params.at("start").get<std::int64_t>(), n0, N),
                    std::max<std::int64_t>(1, rescale(d.params.at("length").get<std::int64_t>(), n0, N)));
  }
  if (d.kind == "circle") return circle(N, d.params.at("radius").get<double>());
  if (d.kind == "cantor") {
    CantorOptions o;
    o.base = d.params.at("base").get<std::int64_t>();
    o.digits = d.params.at("digits").get<std::vector<std::int64_t>>();
    std::int64_t size = 1;
    int stage = 0;
    while (size < N) {
      size *= o.base;
      ++stage;
    }
    if (size != N) throw UsageError("resolution " + std::to_string(N) + " is not a power of the cantor base");
    o.stage = stage;
    return cantor(o);
  }
  if (d.kind == "random_flat") {
    RandomFlatOptions o;
    o.resolution = N;
    const double m0 = d.params.at("m").get<double>();
    const double scale = std::sqrt(static_cast<double>(N) * std::log(static_cast<double>(N)) /
                                   (static_cast<double>(n0) * std::log(static_cast<double>(n0))));
    o.atoms = std::clamp<std::int64_t>(std::llround(m0 * scale), 1, N);
    o.seed = d.seed;
    o.flatness_bound = d.params.at("flatness_bound").get<double>();
    o.max_retries = d.params.at("max_retries").get<int>();
    return random_flat(o);
  }
  throw UsageError("measure kind '" + d.kind + "' cannot be rebuilt at other resolutions");
}

int cmd_conv(Session& s, const ConvArgs& a) {
  const auto mu = s.load(a.measure);
  const auto r = Exponent::parse(a.r);
  const auto method = parse_method(a.method);
  if (!a.resolutions.empty()) {
    std::ostringstream csv;
    csv << "# schema_version=" << kSchemaVersion << "\n# config_hash=" << s.config().hash()
        << "\n# seed=" << s.config().seed << "\n# measure=" << mu.descriptor().kind << "\n";
    csv << "N,n,r,density_norm\n";
    for (auto N : parse_int_list(a.resolutions)) {
      const auto power = convolve_power(rebuild_at(mu, N), a.n, method);
      csv << N << "," << a.n << "," << r.str() << "," << std::setprecision(17) << density_norm(power, r) << "\n";
    }
    s.out() << csv.str().substr(csv.str().find("N,n,r"));
    s.write_text(a.out.empty() ? "conv.csv" : a.out, csv.str());
    return kExitOk;
  }
  const auto power = convolve_power(mu, a.n, method);
  s.out() << "mu^{*" << a.n << "}: " << power.size() << " atoms, ||.||_" << r.str() << " = "
          << fmt(density_norm(power, r), 12) << "\n";
  const auto path = s.resolve(a.out.empty() ? "convolution.json" : a.out);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  save_measure(power, path);
  s.out() << "wrote " << path.string() << "\n";
  return kExitOk;
}

// exponents -------------------------------------------------------------------

struct ExponentArgs {
  int n = 2;
  std::string r = "inf";
  std::string p;
  int d = 1;
  std::string alpha;
  std::string beta;
  std::string gamma;
};

int cmd_exponents(Session& s, const ExponentArgs& a) {
  const auto r = Exponent::parse(a.r);
  const auto range = theorem_range(a.n, r);
  s.out() << "p_max = " << range.p_max.str() << ", q_max(p) = " << describe_q_max(a.n, r) << "\n";
  if (!range.feasible) s.out() << "no admissible exponents with q >= 1\n";
  if (!a.alpha.empty() && !a.beta.empty()) {
    s.out() << "p0 = " << mockenhaupt_p0(a.d, parse_rational(a.alpha), parse_rational(a.beta)).str() << "\n";
  }
  if (!a.p.empty()) {
    const auto p = Exponent::parse(a.p);
    if (!a.gamma.empty()) {
      s.out() << "knapp q_max(" << p.str() << ") = " << knapp_bound(a.d, parse_rational(a.gamma), p).str() << "\n";
    }
    if (p > range.p_max) {
      s.out() << "p = " << p.str() << " exceeds p_max\n";
      return kExitCheckFailed;
    }
    s.out() << "q_max(" << p.str() << ") = " << range.q_max(p).str() << "\n";
  }
  return kExitOk;
}

// probe -----------------------------------------------------------------------

struct ProbeArgs {
  std::string measure;
  std::string p = "2";
  std::string q = "2";
  std::int64_t radius = 64;
  std::string radii;
  int restarts = 8;
  int iters = 500;
  double tol = 1e-9;
  std::string out = "probe.json";
};

int cmd_probe(Session& s, const ProbeArgs& a) {
  const auto mu = s.load(a.measure);
  const auto p = Exponent::parse(a.p);
  const auto q = Exponent::parse(a.q);
  ProbeOptions opts;
  opts.restarts = a.restarts;
  opts.max_iters = a.iters;
  opts.tol = a.tol;
  opts.seed = s.config().seed;
  auto j = s.envelope("probe");
  j["p"] = exponent_json(p);
  j["q"] = exponent_json(q);
  if (!a.radii.empty()) {
    const auto radii = parse_int_list(a.radii);
    const auto g = growth_exponent(mu, p, q, radii, opts, s.config().budgets.max_matrix_entries);
    j["radii"] = g.radii;
    j["norms"] = g.norms;
    j["slope"] = g.fit.slope;
    j["residual"] = g.fit.residual;
    for (std::size_t i = 0; i < g.radii.size(); ++i) {
      s.out() << "X = " << g.radii[i] << ": norm >= " << fmt(g.norms[i], 10) << "\n";
    }
    s.out() << "growth slope = " << fmt(g.fit.slope, 4) << "\n";
  } else {
    const ExtensionOperator op(mu, a.radius, s.config().budgets.max_matrix_entries);
    const auto r = restriction_norm(op, p, q, opts);
    j["radius"] = a.radius;
    j["norm_lower_bound"] = r.norm_lower_bound;
    j["iterations"] = r.iterations;
    j["converged"] = r.converged;
    j["restarts_used"] = r.restarts_used;
    j["trace"] = r.trace;
    s.out() << "||R||_{l^" << p.str() << " -> L^" << q.str() << "(mu)} >= " << fmt(r.norm_lower_bound, 12)
            << " at X = " << a.radius << (r.converged ? "" : " (not converged)") << "\n";
  }
  s.write_json(a.out, j);
  return kExitOk;
}

// sweep -----------------------------------------------------------------------

struct SweepArgs {
  std::string measure;
  std::string p_grid = "1,5/4,4/3,8/5,2";
  std::string q_grid = "1,3/2,2,4";
  std::string radii = "64,128,256,512";
  int n = 2;
  std::string r = "inf";
  double gamma = -1.0;
  int restarts = 8;
  int iters = 500;
  double tol = 1e-9;
  std::string out = "sweep.csv";
};

int cmd_sweep(Session& s, const SweepArgs& a) {
  const auto mu = s.load(a.measure);
  SweepConfig c;
  c.p_grid = parse_exponent_grid(a.p_grid);
  c.q_grid = parse_exponent_grid(a.q_grid);
  c.radii = parse_int_list(a.radii);
  c.n = a.n;
  c.r = Exponent::parse(a.r);
  if (a.gamma >= 0.0) c.gamma = a.gamma;
  c.tau_bounded = s.config().tau_bounded;
  c.tau_growing = s.config().tau_growing;
  c.restarts = a.restarts;
  c.max_iters = a.iters;
  c.tol = a.tol;
  c.seed = s.config().seed;
  c.threads = s.threads();
  c.max_entries = s.config().budgets.max_matrix_entries;
  s.err() << "sweeping " << c.p_grid.size() * c.q_grid.size() << " cells over X = " << a.radii << "\n";
  const auto t0 = std::chrono::steady_clock::now();
  const auto grid = sweep(mu, c);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  s.err() << "sweep finished in " << fmt(secs, 3) << " s\n";
  const std::vector<std::string> header{"schema_version=" + std::to_string(kSchemaVersion),
                                        "config_hash=" + s.config().hash(),
                                        "seed=" + std::to_string(s.config().seed),
                                        "measure=" + mu.descriptor().kind + " N=" + std::to_string(mu.resolution()),
                                        "n=" + std::to_string(c.n) + " r=" + c.r.str()};
  for (const auto& cell : grid.cells) {
    s.out() << "(" << cell.p.str() << ", " << cell.q.str() << "): slope " << fmt(cell.slope, 4) << " -> "
            << to_string(cell.cls) << "\n";
  }
  s.write_text(a.out, to_csv(grid, header));
  return kExitOk;
}

// verify ----------------------------------------------------------------------

struct VerifyArgs {
  std::string suite;
  std::string measure;
  int trials = 10;
  int n = 2;
  std::string r = "inf";
  std::string p = "4/3";
  std::string q = "2";
  std::string s = "2";
  double epsilon = 2.0;
  double gamma = -1.0;
  int dim = 1;
  std::int64_t resolution = 64;
  std::string list;
  std::string out = "verify.json";
};

json check_json(const InequalityCheck& c, double tol) {
  return {{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"slack", c.slack}, {"identity", c.identity},
          {"holds", c.holds(tol)}};
}

double measure_gamma(const DiscreteMeasure& mu) {
  return billingsley_gamma(mu, geometric_scales(mu.resolution())).fit.estimate;
}

int cmd_verify(Session& ses, const VerifyArgs& a) {
  const auto& tol = ses.config().tolerances;
  const auto seed = ses.config().seed;
  auto j = ses.envelope("verify");
  j["suite"] = a.suite;
  j["tolerances"] = to_json(tol);
  json instances = json::array();
  bool pass = true;

  if (a.suite == "expid") {
    const auto r = Exponent::parse(a.r);
    const auto p = Exponent::parse(a.p);
    const auto e = chain_exponents(a.n, r, p);
    const bool ok = exponent_identity(a.n, r, p);
    instances.push_back({{"n", a.n}, {"r", r.str()}, {"p", p.str()}, {"s", e.s.str()}, {"q", e.q.str()},
                         {"s_conj", e.s_conj.str()}, {"q_conj", e.q_conj.str()}, {"holds", ok}});
    ses.out() << "1/s' - 1/(q r) = 1/q' with s = " << e.s.str() << ", q = " << e.q.str() << ": "
              << (ok ? "holds" : "fails") << "\n";
    pass = ok;
  } else if (a.suite == "hy") {
    const GridShape shape{a.dim, a.resolution};
    check_shape(shape);
    const std::vector<Exponent> ss{Exponent(2), Exponent(4), Exponent(8), Exponent::infinity()};
    int violations = 0;
    for (int t = 0; t < a.trials; ++t) {
      const auto f = random_bounded_function(shape, derive_seed(seed, {static_cast<std::uint64_t>(t)}));
      const auto& s = ss[static_cast<std::size_t>(t) % ss.size()];
      for (const auto& c : {check_hausdorff_young(f, shape, s), check_hausdorff_young_lattice(f, shape, s)}) {
        const bool ok = c.holds(tol.hausdorff_young_relative);
        if (!ok) ++violations;
        auto cj = check_json(c, tol.hausdorff_young_relative);
        cj["trial"] = t;
        cj["s"] = s.str();
        instances.push_back(cj);
      }
    }
    ses.out() << "Hausdorff-Young: " << violations << " violations in " << instances.size() << " checks\n";
    pass = violations == 0;
  } else if (a.suite == "chain") {
    const auto mu = ses.load(a.measure);
    const auto r = Exponent::parse(a.r);
    const auto p = Exponent::parse(a.p);
    int failures = 0;
    double worst = 0.0;
    for (int t = 0; t < a.trials; ++t) {
      const auto gseed = derive_seed(seed, {static_cast<std::uint64_t>(t)});
      const auto g = random_bounded_function(mu.shape(), gseed);
      const auto rep = check_dual_chain(mu, g, a.n, r, p, a.epsilon);
      const bool ok = rep.passes(tol);
      if (!ok) ++failures;
      json steps = json::array();
      for (const auto& c : rep.steps) {
        steps.push_back(check_json(c, tol.chain_relative));
        const double scale = std::max({std::abs(c.lhs), std::abs(c.rhs), 1.0});
        worst = std::min(worst, c.slack / scale);
      }
      instances.push_back({{"trial", t}, {"g_seed", gseed}, {"n", a.n}, {"r", r.str()}, {"p", p.str()},
                           {"q", rep.q.str()}, {"s", rep.s.str()}, {"epsilon", a.epsilon}, {"steps", steps},
                           {"end_to_end", check_json(rep.end_to_end, tol.chain_relative)},
                           {"exponent_identity", rep.exponent_identity}, {"oracle_error", rep.oracle_error},
                           {"constant", rep.constant}, {"passes", ok}});
    }
    ses.out() << "dual chain: " << failures << " failing instances of " << a.trials << ", worst relative slack "
              << fmt(worst, 3) << "\n";
    pass = failures == 0;
  } else if (a.suite == "prop1") {
    const auto mu = ses.load(a.measure);
    const auto r = check_prop1(mu, a.n, geometric_scales(mu.resolution()), tol.prop1_margin);
    instances.push_back({{"n", a.n}, {"alpha_measure", r.alpha_measure}, {"alpha_convolution", r.alpha_convolution},
                         {"verdict", r.verdict}});
    ses.out() << "alpha(mu) = " << fmt(r.alpha_measure, 4) << ", alpha(mu^{*" << a.n
              << "}) = " << fmt(r.alpha_convolution, 4) << ": " << (r.verdict ? "pass" : "fail") << "\n";
    pass = r.verdict;
  } else if (a.suite == "prop2") {
    const auto mu = ses.load(a.measure);
    const double gamma = a.gamma >= 0.0 ? a.gamma : measure_gamma(mu);
    std::vector<std::int64_t> ks;
    if (!a.list.empty()) {
      ks = parse_int_list(a.list);
    } else {
      for (std::int64_t k = 16; k <= std::min<std::int64_t>(mu.resolution() / 2, 4096); k *= 2) ks.push_back(k);
    }
    const auto spec = fourier(mu, *std::max_element(ks.begin(), ks.end()));
    const auto sx = Exponent::parse(a.s);
    const auto r = check_prop2(spec, gamma, sx, ks, tol.prop2_diverging_slope);
    instances.push_back({{"s", sx.str()}, {"gamma", gamma}, {"truncations", r.truncations},
                         {"partial_sums", r.partial_sums}, {"slope", r.fit.slope}, {"diverging", r.diverging},
                         {"predicted_diverging", r.predicted_diverging}});
    ses.out() << "partial sums of |mu^|^" << sx.str() << ": slope " << fmt(r.fit.slope, 4) << " -> "
              << (r.diverging ? "diverging" : "leveling") << " (predicted "
              << (r.predicted_diverging ? "diverging" : "finite") << ")\n";
    pass = r.diverging == r.predicted_diverging;
  } else if (a.suite == "prop3") {
    const auto mu = ses.load(a.measure);
    const double gamma = a.gamma >= 0.0 ? a.gamma : measure_gamma(mu);
    const auto radii = a.list.empty() ? geometric_scales(mu.resolution()) : parse_double_list(a.list);
    const auto r = check_prop3(mu, gamma, radii, tol.prop3_margin);
    instances.push_back({{"gamma", gamma}, {"radii", r.radii}, {"masses", r.masses},
                         {"packing_counts", r.packing_counts}, {"packing_bounds", r.packing_bounds},
                         {"slope", r.fit.slope}, {"packing_bounds_hold", r.packing_bounds_hold},
                         {"verdict", r.verdict}});
    ses.out() << "mu*mu~(B(0,eps)) exponent " << fmt(r.fit.slope, 4) << " vs gamma " << fmt(gamma, 4) << ": "
              << (r.verdict ? "pass" : "fail") << "\n";
    pass = r.verdict;
  } else if (a.suite == "knapp") {
    const auto mu = ses.load(a.measure);
    const auto p = Exponent::parse(a.p);
    const auto q = Exponent::parse(a.q);
    std::vector<double> widths;
    if (!a.list.empty()) {
      widths = parse_double_list(a.list);
    } else {
      for (double w : geometric_scales(mu.resolution())) {
        if (w * static_cast<double>(mu.resolution()) >= 4.0) widths.push_back(w);
      }
    }
    const auto r = knapp_test(mu, p, q, widths, 1.0, tol.knapp_violation);
    instances.push_back({{"p", p.str()}, {"q", q.str()}, {"center", {r.center[0], r.center[1]}},
                         {"gamma", r.gamma}, {"widths", r.widths}, {"ratios", r.ratios}, {"fitted", r.fitted},
                         {"predicted", r.predicted}, {"violation", r.violation}});
    ses.out() << "Knapp exponent " << fmt(r.fitted, 4) << " (predicted " << fmt(r.predicted, 4) << "): "
              << (r.violation ? "necessary condition violated" : "no violation") << "\n";
    pass = !r.violation;
  } else if (a.suite == "bilinear") {
    const auto mu = ses.load(a.measure);
    const auto p = Exponent::parse(a.p);
    int failures = 0;
    for (int t = 0; t < a.trials; ++t) {
      const auto f = random_bounded_function(mu.shape(), derive_seed(seed, {static_cast<std::uint64_t>(t), 0}));
      const auto g = random_bounded_function(mu.shape(), derive_seed(seed, {static_cast<std::uint64_t>(t), 1}));
      const auto c = check_bilinear(mu, f, g, p, a.epsilon);
      if (!c.holds(tol.bilinear_relative)) ++failures;
      auto cj = check_json(c, tol.bilinear_relative);
      cj["trial"] = t;
      instances.push_back(cj);
    }
    ses.out() << "bilinear: " << failures << " failing instances of " << a.trials << "\n";
    pass = failures == 0;
  } else {
    throw UsageError("unknown suite '" + a.suite + "'");
  }
  j["instances"] = instances;
  j["pass"] = pass;
  ses.write_json(a.out, j);
  ses.out() << (pass ? "pass" : "FAIL") << "\n";
  return pass ? kExitOk : kExitCheckFailed;
}

// report ----------------------------------------------------------------------

int cmd_report(Session& s, const std::string& sweep_path, const std::string& analysis_path, const std::string& out) {
  SweepGrid grid;
  try {
    grid = sweep_from_csv(read_file(s.resolve(sweep_path)));
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("malformed sweep CSV: ") + e.what());
  }
  json analysis;
  if (!analysis_path.empty()) analysis = json::parse(read_file(s.resolve(analysis_path)));
  const auto md = render_report(grid, analysis);
  if (out.empty()) {
    s.out() << md;
  } else {
    s.write_text(out, md);
  }
  return kExitOk;
}

}  // namespace

std::string describe_q_max(int n, const Exponent& r) {
  const Rational inv_r_conj = Rational(1) - r.reciprocal();
  if (inv_r_conj == Rational(0)) return "inf";
  const Rational c = inv_r_conj / Rational(n);
  std::string out = c.numerator() == 1 ? "p'" : std::to_string(c.numerator()) + "p'";
  if (c.denominator() != 1) out += "/" + std::to_string(c.denominator());
  return out;
}

std::string render_report(const SweepGrid& grid, const json& analysis) {
  std::ostringstream md;
  md << "# Restriction sweep\n\n";
  md << "| p | q |";
  for (auto x : grid.radii) md << " X=" << x << " |";
  md << " slope | class | theorem | knapp |\n";
  md << "|---|---|";
  for (std::size_t i = 0; i < grid.radii.size(); ++i) md << "---|";
  md << "---|---|---|---|\n";
  for (const auto& c : grid.cells) {
    md << "| " << c.p.str() << " | " << c.q.str() << " |";
    for (double v : c.norms) md << " " << fmt(v, 5) << " |";
    md << " " << fmt(c.slope, 3) << " | " << to_string(c.cls) << " | " << (c.in_theorem_region ? "yes" : "no")
       << " | " << (c.in_knapp_region ? "yes" : "no") << " |\n";
  }
  md << "\ngamma used for the Knapp overlay: " << fmt(grid.gamma, 4) << "\n";
  if (analysis.is_object()) {
    md << "\n## Regularity\n\n| quantity | estimate | residual |\n|---|---|---|\n";
    for (const char* key : {"alpha", "gamma"}) {
      if (analysis.contains(key)) {
        md << "| " << key << " | " << fmt(analysis[key]["estimate"].get<double>(), 4) << " | "
           << fmt(analysis[key]["residual"].get<double>(), 3) << " |\n";
      }
    }
    if (analysis.contains("beta")) {
      md << "| beta (sup) | " << fmt(analysis["beta"]["sup"]["estimate"].get<double>(), 4) << " | "
         << fmt(analysis["beta"]["sup"]["residual"].get<double>(), 3) << " |\n";
    }
    if (analysis.contains("flatness")) {
      md << "| flatness ratio | " << fmt(analysis["flatness"]["ratio"].get<double>(), 4) << " | |\n";
    }
  }
  return md.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical laboratory for Fourier restriction estimates", "rlab"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "experiment config JSON");
  app.add_option("--out-dir", g.out_dir, std::string("artifact directory (default $") + kOutputDirEnv + " or .)");
  auto* seed_opt = app.add_option("--seed", g.seed, "global seed");
  app.add_option("--threads", g.threads, "maximum worker threads")->check(CLI::PositiveNumber);

  auto* measure_cmd = app.add_subcommand("measure", "construct measures");
  measure_cmd->require_subcommand(1);
  MeasureArgs ma;
  auto* mnew = measure_cmd->add_subcommand("new", "build a measure and save it as JSON");
  mnew->add_option("--kind", ma.kind, "dirac|uniform|interval|cantor|random_flat|circle")->required();
  mnew->add_option("--dim", ma.dim);
  mnew->add_option("--N", ma.resolution, "grid resolution");
  mnew->add_option("--at", ma.at, "dirac location, comma separated");
  mnew->add_option("--start", ma.start);
  mnew->add_option("--length", ma.length);
  mnew->add_option("--base", ma.base);
  mnew->add_option("--digits", ma.digits);
  mnew->add_option("--stage", ma.stage);
  mnew->add_option("--atoms", ma.atoms);
  mnew->add_option("--flatness", ma.flatness);
  mnew->add_option("--retries", ma.retries);
  mnew->add_option("--radius", ma.radius);
  mnew->add_flag("--reflect", ma.reflected);
  mnew->add_option("--confine", ma.confine_n, "re-embed for n-fold convolutions");
  mnew->add_option("--out", ma.out);

  AnalyzeArgs aa;
  auto* analyze_cmd = app.add_subcommand("analyze", "regularity and decay estimates");
  analyze_cmd->add_option("--measure", aa.measure)->required();
  analyze_cmd->add_flag("--alpha", aa.alpha);
  auto* beta_opt = analyze_cmd->add_option("--beta", aa.truncation, "Fourier decay with truncation K (default min(N/2, 512))")
      ->expected(0, 1);
  analyze_cmd->add_flag("--gamma", aa.gamma);
  analyze_cmd->add_flag("--flatness", aa.flat);
  analyze_cmd->add_option("--base", aa.base, "scale ratio");
  analyze_cmd->add_option("--out", aa.out);

  ConvArgs ca;
  auto* conv_cmd = app.add_subcommand("conv", "convolution powers and their density norms");
  conv_cmd->add_option("--measure", ca.measure)->required();
  conv_cmd->add_option("-n,--n", ca.n)->check(CLI::PositiveNumber);
  conv_cmd->add_option("-r,--r", ca.r, "norm exponent");
  conv_cmd->add_option("--method", ca.method, "auto|fft|direct");
  conv_cmd->add_option("--resolutions", ca.resolutions, "rebuild the measure at each N and tabulate");
  conv_cmd->add_option("--out", ca.out);

  ExponentArgs ea;
  auto* ex_cmd = app.add_subcommand("exponents", "admissible exponent range");
  ex_cmd->add_option("--n", ea.n)->check(CLI::PositiveNumber);
  ex_cmd->add_option("--r", ea.r);
  ex_cmd->add_option("--p", ea.p);
  ex_cmd->add_option("--d", ea.d)->check(CLI::PositiveNumber);
  ex_cmd->add_option("--alpha", ea.alpha);
  ex_cmd->add_option("--beta", ea.beta);
  ex_cmd->add_option("--gamma", ea.gamma);

  ProbeArgs pa;
  auto* probe_cmd = app.add_subcommand("probe", "restriction operator norm lower bounds");
  probe_cmd->add_option("--measure", pa.measure)->required();
  probe_cmd->add_option("-p,--p", pa.p);
  probe_cmd->add_option("-q,--q", pa.q);
  probe_cmd->add_option("-X,--X", pa.radius, "lattice radius");
  probe_cmd->add_option("--radii", pa.radii, "comma list: fit the growth exponent");
  probe_cmd->add_option("--restarts", pa.restarts);
  probe_cmd->add_option("--iters", pa.iters);
  probe_cmd->add_option("--tol", pa.tol);
  probe_cmd->add_option("--out", pa.out);

  SweepArgs sa;
  auto* sweep_cmd = app.add_subcommand("sweep", "classify a (p, q) grid by norm growth");
  sweep_cmd->add_option("--measure", sa.measure)->required();
  sweep_cmd->add_option("--p-grid", sa.p_grid);
  sweep_cmd->add_option("--q-grid", sa.q_grid);
  sweep_cmd->add_option("--X,--radii", sa.radii, "lattice radii, comma separated");
  sweep_cmd->add_option("--n", sa.n);
  sweep_cmd->add_option("--r", sa.r);
  sweep_cmd->add_option("--gamma", sa.gamma);
  sweep_cmd->add_option("--restarts", sa.restarts);
  sweep_cmd->add_option("--iters", sa.iters);
  sweep_cmd->add_option("--tol", sa.tol);
  sweep_cmd->add_option("--out", sa.out);

  VerifyArgs va;
  auto* verify_cmd = app.add_subcommand("verify", "check inequalities and propositions");
  verify_cmd->add_option("--suite", va.suite, "hy|chain|prop1|prop2|prop3|knapp|bilinear|expid")
      ->required()
      ->check(CLI::IsMember({"hy", "chain", "prop1", "prop2", "prop3", "knapp", "bilinear", "expid"}));
  verify_cmd->add_option("--measure", va.measure);
  verify_cmd->add_option("--trials", va.trials);
  verify_cmd->add_option("--n", va.n);
  verify_cmd->add_option("--r", va.r);
  verify_cmd->add_option("--p", va.p);
  verify_cmd->add_option("--q", va.q);
  verify_cmd->add_option("--s", va.s);
  verify_cmd->add_option("--eps", va.epsilon, "mollifier half-width in cells");
  verify_cmd->add_option("--gamma", va.gamma);
  verify_cmd->add_option("--dim", va.dim);
  verify_cmd->add_option("--N", va.resolution);
  verify_cmd->add_option("--list", va.list, "truncations, radii or widths");
  verify_cmd->add_option("--out", va.out);

  std::string rep_sweep, rep_analysis, rep_out;
  auto* report_cmd = app.add_subcommand("report", "markdown summary of a sweep");
  report_cmd->add_option("--sweep", rep_sweep)->required();
  report_cmd->add_option("--analysis", rep_analysis);
  report_cmd->add_option("--out", rep_out);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }
  g.seed_given = seed_opt->count() > 0;

  try {
    Session s(g, out, err);
    if (mnew->parsed()) return cmd_measure_new(s, ma);
    if (analyze_cmd->parsed()) {
      aa.beta = beta_opt->count() > 0;
      return cmd_analyze(s, aa);
    }
    if (conv_cmd->parsed()) return cmd_conv(s, ca);
    if (ex_cmd->parsed()) return cmd_exponents(s, ea);
    if (probe_cmd->parsed()) return cmd_probe(s, pa);
    if (sweep_cmd->parsed()) return cmd_sweep(s, sa);
    if (verify_cmd->parsed()) return cmd_verify(s, va);
    if (report_cmd->parsed()) return cmd_report(s, rep_sweep, rep_analysis, rep_out);
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace rlab::cli
