#include "rlab/io.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace rlab {

nlohmann::json to_json(const DiscreteMeasure& mu) {
  nlohmann::json atoms = nlohmann::json::array();
  for (const auto& a : mu.atoms()) {
    const auto c = mu.coords(a);
    nlohmann::json row = nlohmann::json::array();
    for (int ax = 0; ax < mu.dim(); ++ax) row.push_back(c[ax]);
    row.push_back(a.weight);
    atoms.push_back(std::move(row));
  }
  return {{"schema_version", kSchemaVersion},
          {"dim", mu.dim()},
          {"N", mu.resolution()},
          {"constructor", {{"kind", mu.descriptor().kind}, {"params", mu.descriptor().params}}},
          {"seed", mu.descriptor().seed},
          {"atoms", std::move(atoms)}};
}

DiscreteMeasure measure_from_json(const nlohmann::json& j) {
  if (j.value("schema_version", 0) != kSchemaVersion) throw std::invalid_argument("unsupported measure schema_version");
  const GridShape shape{j.at("dim").get<int>(), j.at("N").get<std::int64_t>()};
  check_shape(shape);
  std::vector<Atom> atoms;
  for (const auto& row : j.at("atoms")) {
    if (!row.is_array() || static_cast<int>(row.size()) != shape.dim + 1) {
      throw std::invalid_argument("atom rows must be [index..., weight]");
    }
    Index idx{0, 0};
    for (int ax = 0; ax < shape.dim; ++ax) {
      idx[ax] = row.at(ax).get<std::int64_t>();
      if (idx[ax] < 0 || idx[ax] >= shape.n) throw std::invalid_argument("atom index out of range");
    }
    atoms.push_back({shape.linear(idx), row.at(shape.dim).get<double>()});
  }
  Descriptor desc;
  if (j.contains("constructor")) {
    desc.kind = j["constructor"].value("kind", "");
    desc.params = j["constructor"].value("params", nlohmann::json::object());
  }
  desc.seed = j.value("seed", std::uint64_t{0});
  // Weights are taken verbatim so a save/load round trip is bit-exact.
  return DiscreteMeasure(shape, std::move(atoms), std::move(desc));
}

void save_measure(const DiscreteMeasure& mu, const std::filesystem::path& path) {
  write_atomically(path, to_json(mu).dump(1) + "\n");
}

DiscreteMeasure load_measure(const std::filesystem::path& path) {
  return measure_from_json(nlohmann::json::parse(read_file(path)));
}

void write_atomically(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << contents;
    if (!out.flush()) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream ss;
  ss << std::hex << std::setw(16) << std::setfill('0') << h;
  return ss.str();
}

}  // namespace rlab
