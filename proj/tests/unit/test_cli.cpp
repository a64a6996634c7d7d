#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "rlab/cli.hpp"
#include "rlab/io.hpp"

using rlab::cli::run;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("rlab_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("exponents") {
  const auto r = call({"exponents", "--n", "2", "--r", "inf"});
  CHECK(r.code == 0);
  CHECK(r.out.find("p_max = 4/3, q_max(p) = p'/2") != std::string::npos);
  CHECK(call({"exponents", "--n", "2", "--r", "2"}).out.find("p_max = 4/3, q_max(p) = p'/4") != std::string::npos);
  const auto m = call({"exponents", "--d", "1", "--alpha", "1/2", "--beta", "1/2"});
  CHECK(m.out.find("p0 = 6/5") != std::string::npos);
  CHECK(call({"exponents", "--n", "2", "--r", "inf", "--p", "3/2"}).code == 1);
}

TEST_CASE("usage errors") {
  CHECK(call({}).code == 2);
  CHECK(call({"frobnicate"}).code == 2);
  CHECK(call({"exponents", "--bogus"}).code == 2);
  CHECK(call({"verify", "--suite", "nope"}).code == 2);
  CHECK(call({"exponents", "--r", "x/y"}).code == 2);
  CHECK(call({"--help"}).code == 0);
}

TEST_CASE("measure and analyze pipeline") {
  const auto dir = scratch("pipeline");
  const auto d = dir.string();
  CHECK(call({"--out-dir", d, "measure", "new", "--kind", "dirac", "--dim", "1", "--N", "256"}).code == 0);
  CHECK(fs::exists(dir / "measure.json"));
  const auto a = call({"--out-dir", d, "analyze", "--alpha", "--measure", "measure.json"});
  CHECK(a.code == 0);
  CHECK(a.out.find("alpha = 0") != std::string::npos);
  const auto j = nlohmann::json::parse(rlab::read_file(dir / "analysis.json"));
  CHECK(j["schema_version"] == rlab::kSchemaVersion);
  CHECK(j.contains("config_hash"));
  CHECK(j.contains("seed"));
  fs::remove_all(dir);
}

TEST_CASE("verify suites") {
  const auto dir = scratch("verify");
  const auto d = dir.string();
  CHECK(call({"--out-dir", d, "verify", "--suite", "expid", "--n", "2", "--r", "2", "--p", "4/3"}).code == 0);
  CHECK(call({"--out-dir", d, "verify", "--suite", "expid", "--n", "2", "--r", "inf", "--p", "3/2"}).code == 2);
  CHECK(call({"--out-dir", d, "--seed", "3", "verify", "--suite", "hy", "--trials", "20"}).code == 0);
  CHECK(call({"--out-dir", d, "--seed", "5", "measure", "new", "--kind", "random_flat", "--N", "256", "--atoms", "24",
              "--flatness", "8"})
            .code == 0);
  CHECK(call({"--out-dir", d, "verify", "--suite", "chain", "--measure", "measure.json", "--trials", "5"}).code == 0);
  const auto chain = nlohmann::json::parse(rlab::read_file(dir / "verify.json"));
  CHECK(chain["instances"].size() == 5);
  CHECK(chain["instances"][0]["steps"].size() == 5);
  CHECK(call({"--out-dir", d, "verify", "--suite", "bilinear", "--measure", "measure.json", "--trials", "3"}).code == 0);
  CHECK(call({"--out-dir", d, "verify", "--suite", "prop1", "--measure", "measure.json"}).code == 0);
  CHECK(call({"--out-dir", d, "verify", "--suite", "chain"}).code == 2);
  fs::remove_all(dir);
}

TEST_CASE("budgets") {
  const auto dir = scratch("budget");
  const auto d = dir.string();
  nlohmann::json cfg = {{"budgets", {{"max_atoms", 10}, {"max_matrix_entries", 100.0}}}};
  rlab::write_atomically(dir / "config.json", cfg.dump());
  const auto cfg_path = (dir / "config.json").string();
  const auto r = call({"--config", cfg_path, "--out-dir", d, "measure", "new", "--kind", "cantor", "--stage", "4"});
  CHECK(r.code == 1);
  CHECK(r.err.find("max_atoms") != std::string::npos);
  CHECK(call({"--out-dir", d, "measure", "new", "--kind", "cantor", "--stage", "3"}).code == 0);
  const auto p = call({"--config", cfg_path, "--out-dir", d, "probe", "--measure", "measure.json", "-X", "64"});
  CHECK(p.code == 1);
  CHECK(p.err.find("max_matrix_entries") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("sweep, report and determinism") {
  const auto dir = scratch("sweep");
  const auto d = dir.string();
  CHECK(call({"--out-dir", d, "measure", "new", "--kind", "dirac", "--N", "1024"}).code == 0);
  const std::vector<std::string> args{"--out-dir", d, "--seed", "9", "sweep", "--measure", "measure.json", "--p-grid",
                                      "1,2", "--q-grid", "2", "--X", "8,16,32,64", "--restarts", "2"};
  CHECK(call(args).code == 0);
  const auto first = rlab::read_file(dir / "sweep.csv");
  CHECK(call(args).code == 0);
  CHECK(rlab::read_file(dir / "sweep.csv") == first);
  CHECK(first.find("# seed=9") != std::string::npos);
  CHECK(first.find("# config_hash=") != std::string::npos);

  CHECK(call({"--out-dir", d, "analyze", "--measure", "measure.json"}).code == 0);
  const auto rep = call({"--out-dir", d, "report", "--sweep", "sweep.csv", "--analysis", "analysis.json"});
  CHECK(rep.code == 0);
  CHECK(rep.out.find("| 2 | 2 |") != std::string::npos);
  CHECK(rep.out.find("growing") != std::string::npos);

  rlab::write_atomically(dir / "empty.csv", "p,q,norm_X8,slope,residual,class,in_theorem_region,in_knapp_region\n");
  const auto e = call({"--out-dir", d, "report", "--sweep", "empty.csv"});
  CHECK(e.code == 0);
  CHECK(e.out.find("| p | q |") != std::string::npos);

  rlab::write_atomically(dir / "bad.csv", "p,q\n1,2,3\n");
  CHECK(call({"--out-dir", d, "report", "--sweep", "bad.csv"}).code == 2);
  fs::remove_all(dir);
}

TEST_CASE("conv table") {
  const auto dir = scratch("conv");
  const auto d = dir.string();
  CHECK(call({"--out-dir", d, "measure", "new", "--kind", "cantor", "--stage", "2"}).code == 0);
  const auto r = call({"--out-dir", d, "conv", "--measure", "measure.json", "-n", "2", "-r", "inf", "--resolutions",
                       "16,64,256"});
  CHECK(r.code == 0);
  CHECK(r.out.find("16,2,inf,4\n") != std::string::npos);
  CHECK(r.out.find("256,2,inf,16\n") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("output directory from the environment") {
  const auto dir = scratch("env");
  setenv(rlab::cli::kOutputDirEnv, dir.string().c_str(), 1);
  CHECK(call({"measure", "new", "--kind", "uniform", "--N", "16"}).code == 0);
  unsetenv(rlab::cli::kOutputDirEnv);
  CHECK(fs::exists(dir / "measure.json"));
  fs::remove_all(dir);
}
