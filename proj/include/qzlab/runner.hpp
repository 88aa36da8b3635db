#pragma once

#include "qzlab/config.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace qzlab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumeric = 3;

struct RunArtifacts {
    std::string csv;
    std::string summary; // JSON
    std::string csv_name;
    std::string summary_name;
};

/// Runs the configured protocol and renders both output documents. Output
/// bytes depend only on the config (seed included).
RunArtifacts execute(const RunConfig& cfg);

/// execute() + write into cfg.output. Library errors are reported on `err`
/// and mapped to exit codes 1 (parse), 2 (validation), 3 (numeric).
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err, bool quiet = false);

/// Maps the exception currently being handled to an exit code and message.
int report_current_exception(std::ostream& err);

} // namespace qzlab
