#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "opuc/cli/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"opuc-lab: scenario runner for orthogonal polynomials on the unit circle"};
  std::string config;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  app.add_option("--config", config, "Scenario config (JSON)")->required();
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--seed", seed, "Seed for randomized sweeps");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : opuc::cli::kExitInvalid;
  }
  return opuc::cli::run_config(config, out_dir, seed, std::cerr);
}
