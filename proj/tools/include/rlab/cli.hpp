#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rlab/sweep.hpp"

namespace rlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Environment variable naming the default artifact directory.
inline constexpr const char* kOutputDirEnv = "RLAB_OUTPUT_DIR";

/// Runs one command line (without the program name). Human-readable output
/// goes to `out`, diagnostics and progress to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Markdown table of a sweep with theorem and Knapp overlays, followed by the
/// regularity estimates found in `analysis` (may be null).
std::string render_report(const SweepGrid& grid, const nlohmann::json& analysis);

/// "p'/2", "p'/4", "2p'/3", or "inf" when r' is infinite.
std::string describe_q_max(int n, const Exponent& r);

}  // namespace rlab::cli
