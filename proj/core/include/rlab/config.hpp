#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "rlab/verify.hpp"

namespace rlab {

struct Budgets {
  std::size_t max_atoms = std::size_t{1} << 22;
  double max_matrix_entries = double(1 << 26);
};

/// Everything that, together with the inputs, determines an experiment's outputs.
struct ExperimentConfig {
  std::uint64_t seed = 20240601;
  VerifyTolerances tolerances;
  double tau_bounded = 0.05;
  double tau_growing = 0.10;
  Budgets budgets;
  std::filesystem::path output_dir = ".";

  /// FNV-1a of the canonical JSON form, excluding the output directory.
  std::string hash() const;
};

nlohmann::json to_json(const ExperimentConfig& c);
ExperimentConfig config_from_json(const nlohmann::json& j);

}  // namespace rlab
