#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "jetphase_cli/config.hpp"

namespace jetphase::cli {

// Shortest decimal string that reads back to the same double.
std::string format_double(double x);

// JETPHASE_THREADS if set and positive, else hardware concurrency.
std::size_t worker_count();

// Writes <prefix>_<k>.csv per initial point, drift.csv and summary.json into
// out_dir and returns the summary.
nlohmann::json run_integrate(const RunConfig& cfg, const std::filesystem::path& out_dir);

nlohmann::json run_audit(const RunConfig& cfg);

// Full command line; returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace jetphase::cli
