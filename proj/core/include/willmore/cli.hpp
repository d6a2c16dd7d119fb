#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "willmore/config.hpp"

namespace willmore {

enum ExitCode : int { kExitSuccess = 0, kExitFailed = 1, kExitConfiguration = 2 };

/// solve | verify-identity | norms | energy | sweep | convergence-study
const std::vector<std::string>& commands();

struct RunOptions {
    bool quiet = false;
    std::ostream* out = nullptr;  // summary, defaults to std::cout
    std::ostream* err = nullptr;  // diagnostics, defaults to std::cerr
};

/// Executes one command, writing report.json and CSV dumps under
/// config.output_dir. Returns 0 on success, 1 when a run diverges or a study
/// fails, 2 on a configuration error. Every outcome writes the JSON report.
int run(const std::string& command, const RunConfig& config, const RunOptions& options = {});

/// Parses `text` (with `overrides` appended as later lines) and runs it.
/// Parse failures return 2 after writing a report with a failure block to
/// `fallback_out_dir` when possible.
int run_text(const std::string& command, const std::string& text, const std::vector<std::string>& overrides,
             const RunOptions& options = {}, const std::string& fallback_out_dir = "willmore-out");

}  // namespace willmore
