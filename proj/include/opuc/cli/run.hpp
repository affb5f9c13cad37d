#pragma once

// Dispatch of a parsed scenario to the library. Every run writes
// result.json (scalars and verdicts), scenario.json (the normalized config)
// and zero or more tables in the scenario's output format.

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "opuc/cli/scenario.hpp"

namespace opuc::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInvalid = 1,
  kExitNumerical = 2,
};

/// Runs the scenario and writes its outputs under out_dir. Library errors
/// propagate: ParameterError for invalid input, NumericalError for
/// overflow and zero-finder failures.
void run(const Scenario& scenario, const std::filesystem::path& out_dir, std::uint64_t seed);

/// Reads, validates and runs a config file, reporting failures on `err`.
/// Returns the process exit code.
int run_config(const std::filesystem::path& config, const std::filesystem::path& out_dir,
               std::uint64_t seed, std::ostream& err);

}  // namespace opuc::cli
