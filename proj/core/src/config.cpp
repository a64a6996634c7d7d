#include "rlab/config.hpp"

#include "rlab/io.hpp"

namespace rlab {

nlohmann::json to_json(const ExperimentConfig& c) {
  return {{"seed", c.seed},
          {"tolerances", to_json(c.tolerances)},
          {"tau_bounded", c.tau_bounded},
          {"tau_growing", c.tau_growing},
          {"budgets", {{"max_atoms", c.budgets.max_atoms}, {"max_matrix_entries", c.budgets.max_matrix_entries}}},
          {"output_dir", c.output_dir.string()}};
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  c.seed = j.value("seed", c.seed);
  if (j.contains("tolerances")) c.tolerances = tolerances_from_json(j.at("tolerances"));
  c.tau_bounded = j.value("tau_bounded", c.tau_bounded);
  c.tau_growing = j.value("tau_growing", c.tau_growing);
  if (j.contains("budgets")) {
    const auto& b = j.at("budgets");
    c.budgets.max_atoms = b.value("max_atoms", c.budgets.max_atoms);
    c.budgets.max_matrix_entries = b.value("max_matrix_entries", c.budgets.max_matrix_entries);
  }
  c.output_dir = j.value("output_dir", c.output_dir.string());
  return c;
}

std::string ExperimentConfig::hash() const {
  auto j = to_json(*this);
  j.erase("output_dir");
  return fnv1a_hex(j.dump());
}

}  // namespace rlab
