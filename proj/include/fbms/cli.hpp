#pragma once

#include <string>

#include "json.hpp"

namespace fbms::cli {

inline constexpr const char* kVersion = "fbms 1.0.0";

enum ExitCode : int { ok = 0, usage_or_io = 1, check_failure = 2 };

/// Result of one subcommand: the report body and its exit code. Files named
/// in the run configuration are written by `run`, not here.
struct Outcome {
    nlohmann::json report;
    int exit_code = ExitCode::ok;
};

/// Runs a subcommand from its serialized configuration (the `run_config`
/// object embedded in every report). With `write_files` false nothing is
/// written, which is how reports are replayed.
Outcome execute(const nlohmann::json& run_config, bool write_files);

/// Compares two reports' scalar outputs; returns the paths that differ by
/// more than `rel_tol` (relative to max(1, |x|)).
std::vector<std::string> compare_reports(const nlohmann::json& a, const nlohmann::json& b, double rel_tol);

int run(int argc, char** argv);

}  // namespace fbms::cli
