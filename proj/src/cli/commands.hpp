#pragma once

#include <filesystem>
#include <string>

#include "config.hpp"

namespace andersonspec::cli {

/// Exit-code contract: 0 ok, 1 verification failure, 2 config error,
/// 3 numerical failure.
enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kConfigError = 2, kNumericalError = 3 };

/// Runs one subcommand and writes its payload, the resolved config copy and
/// the provenance envelope into config.output.dir. Errors are reported by the
/// returned exit code; a machine-readable error document goes to `error_out`
/// (the CLI prints it on stderr).
int run_command(const ExperimentConfig& config, std::string* error_out = nullptr);

}  // namespace andersonspec::cli
