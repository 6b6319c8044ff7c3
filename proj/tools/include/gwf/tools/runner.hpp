#pragma once

#include <ostream>
#include <string>
#include <string_view>

#include "gwf/tools/config.hpp"

namespace gwf::tools {

// Runs the experiment, writes its CSV outputs and a manifest
// "<out>.manifest.json" (suite: "<out>/manifest.json"), and prints a short
// summary to `out`. Library and configuration errors propagate.
ExitCode run(const ExperimentConfig& config, std::ostream& out);

// run() with every error mapped to its exit code and reported on `err` as a
// single JSON line {"error": kind, "key": ..., "message": ...}.
int run_guarded(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

std::string error_line(std::string_view kind, std::string_view message, std::string_view key = {});
int report_error(const std::exception& e, std::ostream& err);

std::string sha256_hex(std::string_view data);

}  // namespace gwf::tools
