#pragma once

// A scenario is one JSON config file describing a single run: the command,
// the (possibly nested) sequence, numeric parameters and output options.
//
//   {"command": "zeros",
//    "sequence": {"kind": "zero"},
//    "n": 4, "beta": [1, 0],
//    "output": {"format": "csv"}}

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "opuc/cli/table.hpp"
#include "opuc/coeffs.hpp"

namespace opuc::cli {

enum class Command {
  eval,
  kernel,
  zeros,
  quadrature,
  cmv,
  commute,
  gram,
  mub,
  balance,
  infinite,
  sieved_balance,
  diagnostic,
};

std::string_view to_string(Command command);
std::optional<Command> command_from_string(std::string_view name);
const std::vector<Command>& all_commands();

struct DensitySpec {
  std::string kind = "lebesgue";  // "lebesgue" or "ranga"
  double b = 0.0;

  bool operator==(const DensitySpec&) const = default;
};

struct SweepSpec {
  long long trials = 0;
  long long max_dimension = 0;

  bool operator==(const SweepSpec&) const = default;
};

struct Scenario {
  Command command = Command::eval;
  // Normalized sequence records (re-serialized after parsing).
  std::optional<nlohmann::json> sequence;
  std::optional<nlohmann::json> second_sequence;

  std::optional<long long> n;
  std::optional<long long> N;
  std::optional<long long> j;
  std::optional<long long> p;
  std::optional<double> b;
  std::optional<double> tolerance;
  std::optional<Complex> lambda;
  std::optional<Complex> beta;
  std::optional<Complex> beta2;
  std::optional<Complex> u;
  std::optional<Complex> z;
  std::optional<Complex> w;
  std::optional<Complex> zeta;
  std::optional<std::vector<Complex>> w_samples;
  std::optional<std::vector<Complex>> sample_points;
  std::optional<std::vector<double>> thetas;
  std::optional<std::vector<long long>> checkpoints;
  std::optional<DensitySpec> density;
  std::optional<SweepSpec> sweep;

  TableFormat format = TableFormat::csv;
  unsigned threads = 1;

  bool operator==(const Scenario&) const = default;
};

/// Parses and validates a scenario: unknown fields, missing required
/// parameters and out-of-range values raise ParameterError naming the field.
Scenario parse_scenario(const nlohmann::json& config);

/// Canonical config for a scenario; parse_scenario(scenario_to_json(s)) == s.
nlohmann::json scenario_to_json(const Scenario& scenario);

VerblunskySequence scenario_sequence(const Scenario& scenario);

}  // namespace opuc::cli
