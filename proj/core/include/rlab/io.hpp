#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "rlab/measure.hpp"

namespace rlab {

inline constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const DiscreteMeasure& mu);
DiscreteMeasure measure_from_json(const nlohmann::json& j);

void save_measure(const DiscreteMeasure& mu, const std::filesystem::path& path);
DiscreteMeasure load_measure(const std::filesystem::path& path);

/// Writes `contents` to a sibling temporary file, then renames it over `path`.
void write_atomically(const std::filesystem::path& path, const std::string& contents);

std::string read_file(const std::filesystem::path& path);

/// 64-bit FNV-1a digest rendered as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace rlab
