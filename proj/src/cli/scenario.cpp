#include "opuc/cli/scenario.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "opuc/errors.hpp"
#include "opuc/sequence_io.hpp"

namespace opuc::cli {

using nlohmann::json;

namespace {

struct CommandName {
  Command command;
  std::string_view name;
};

constexpr CommandName kCommandNames[] = {
    {Command::eval, "eval"},
    {Command::kernel, "kernel"},
    {Command::zeros, "zeros"},
    {Command::quadrature, "quadrature"},
    {Command::cmv, "cmv"},
    {Command::commute, "commute"},
    {Command::gram, "gram"},
    {Command::mub, "mub"},
    {Command::balance, "balance"},
    {Command::infinite, "infinite"},
    {Command::sieved_balance, "sieved-balance"},
    {Command::diagnostic, "diagnostic"},
};

const std::set<std::string> kKnownFields = {
    "command", "sequence", "second_sequence", "n",       "N",           "j",
    "p",       "b",        "tolerance",       "lambda",  "beta",        "beta2",
    "u",       "z",        "w",               "zeta",    "w_samples",   "sample_points",
    "thetas",  "checkpoints", "density",      "sweep",   "output",      "threads",
};

long long read_integer(const json& config, const std::string& field) {
  const auto& value = config[field];
  if (!value.is_number_integer()) throw ParameterError(field + ": expected an integer");
  return value.get<long long>();
}

double read_real(const json& config, const std::string& field) {
  const auto& value = config[field];
  if (!value.is_number()) throw ParameterError(field + ": expected a number");
  return value.get<double>();
}

std::vector<Complex> read_complex_list(const json& config, const std::string& field) {
  const auto& value = config[field];
  std::vector<Complex> out;
  if (value.is_object() && value.contains("grid")) {
    // {"grid": m}: the m midpoints e^{2 pi i (k + 1/2) / m}, which avoid z = 1.
    if (value.size() != 1 || !value["grid"].is_number_integer() || value["grid"].get<long long>() < 1)
      throw ParameterError(field + ".grid: expected a positive integer");
    const auto count = value["grid"].get<long long>();
    for (long long k = 0; k < count; ++k)
      out.push_back(std::polar(1.0, 2.0 * std::numbers::pi * (static_cast<double>(k) + 0.5) /
                                        static_cast<double>(count)));
    return out;
  }
  if (!value.is_array()) throw ParameterError(field + ": expected an array or {\"grid\": m}");
  for (std::size_t i = 0; i < value.size(); ++i)
    out.push_back(complex_from_json(value[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<double> read_thetas(const json& config) {
  const auto& value = config["thetas"];
  std::vector<double> out;
  if (value.is_object()) {
    // {"count": m, "min": a, "max": b}: m equispaced angles on [a, b].
    for (const auto& [key, unused] : value.items())
      if (key != "count" && key != "min" && key != "max")
        throw ParameterError("thetas." + key + ": unknown field");
    if (!value.contains("count") || !value["count"].is_number_integer() ||
        value["count"].get<long long>() < 1)
      throw ParameterError("thetas.count: expected a positive integer");
    const auto count = value["count"].get<long long>();
    const double lo = value.contains("min") ? value["min"].get<double>() : 0.0;
    const double hi = value.contains("max") ? value["max"].get<double>() : 2.0 * std::numbers::pi;
    for (long long k = 0; k < count; ++k)
      out.push_back(count == 1 ? lo
                               : lo + (hi - lo) * static_cast<double>(k) /
                                          static_cast<double>(count - 1));
    return out;
  }
  if (!value.is_array()) throw ParameterError("thetas: expected an array or {count, min, max}");
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (!value[i].is_number()) throw ParameterError("thetas[" + std::to_string(i) + "]: expected a number");
    out.push_back(value[i].get<double>());
  }
  return out;
}

void require(bool present, const char* field, Command command) {
  if (!present)
    throw ParameterError(std::string(field) + ": required by command '" +
                         std::string(to_string(command)) + "'");
}

void require_unimodular(const std::optional<Complex>& value, const char* field) {
  if (value) checked_unimodular(*value, field);
}

void require_min(const std::optional<long long>& value, long long minimum, const char* field) {
  if (value && *value < minimum)
    throw ParameterError(std::string(field) + ": must be >= " + std::to_string(minimum));
}

void validate(const Scenario& s) {
  const auto c = s.command;
  const bool needs_sequence = c != Command::sieved_balance;
  if (needs_sequence) require(s.sequence.has_value(), "sequence", c);
  switch (c) {
    case Command::eval:
      require(s.n.has_value(), "n", c);
      require(s.z.has_value(), "z", c);
      require_min(s.n, s.beta ? 1 : 0, "n");
      break;
    case Command::kernel:
      require(s.n.has_value(), "n", c);
      require(s.z.has_value(), "z", c);
      require(s.w.has_value(), "w", c);
      require_min(s.n, 0, "n");
      require_min(s.N, 0, "N");
      break;
    case Command::zeros:
    case Command::quadrature:
      require(s.n.has_value(), "n", c);
      require(s.beta.has_value(), "beta", c);
      require_min(s.n, 1, "n");
      break;
    case Command::cmv:
      require(s.N.has_value(), "N", c);
      require_min(s.N, s.beta ? 1 : 2, "N");
      require_min(s.j, 0, "j");
      break;
    case Command::commute:
      require(s.second_sequence.has_value(), "second_sequence", c);
      require(s.N.has_value(), "N", c);
      require_min(s.N, 16, "N");
      break;
    case Command::gram:
    case Command::mub:
      require(s.n.has_value(), "n", c);
      require(s.lambda.has_value(), "lambda", c);
      require(s.beta.has_value(), "beta", c);
      require_min(s.n, 0, "n");
      if (s.sweep) {
        if (s.sweep->trials < 1) throw ParameterError("sweep.trials: must be >= 1");
        if (s.sweep->max_dimension < 2) throw ParameterError("sweep.max_dimension: must be >= 2");
      }
      break;
    case Command::balance:
      require(s.n.has_value(), "n", c);
      require(s.lambda.has_value(), "lambda", c);
      require_min(s.n, 0, "n");
      break;
    case Command::infinite:
      require(s.lambda.has_value(), "lambda", c);
      require(s.N.has_value(), "N", c);
      require(s.w.has_value() || s.w_samples.has_value(), "w", c);
      require_min(s.N, 1, "N");
      break;
    case Command::sieved_balance:
      require(s.b.has_value(), "b", c);
      require(s.p.has_value(), "p", c);
      require(s.lambda.has_value(), "lambda", c);
      require(s.u.has_value(), "u", c);
      require(s.w_samples.has_value(), "w_samples", c);
      require(s.N.has_value(), "N", c);
      require_min(s.p, 1, "p");
      require_min(s.N, 1, "N");
      if (!(*s.b > -0.5 && *s.b < 0.0)) throw ParameterError("b: must satisfy -1/2 < b < 0");
      break;
    case Command::diagnostic:
      require(s.n.has_value(), "n", c);
      require(s.thetas.has_value(), "thetas", c);
      require(s.density.has_value(), "density", c);
      require_min(s.n, 1, "n");
      break;
  }
  require_unimodular(s.lambda, "lambda");
  require_unimodular(s.beta, "beta");
  require_unimodular(s.beta2, "beta2");
  require_unimodular(s.u, "u");
  if (s.tolerance && !(*s.tolerance > 0.0)) throw ParameterError("tolerance: must be positive");
  if (s.density && s.density->kind == "ranga" && !(s.density->b > -0.5 && s.density->b < 0.0))
    throw ParameterError("density.b: must satisfy -1/2 < b < 0");
  if (s.checkpoints)
    for (auto k : *s.checkpoints)
      if (k < 0) throw ParameterError("checkpoints: entries must be >= 0");
}

}  // namespace

std::string_view to_string(Command command) {
  for (const auto& entry : kCommandNames)
    if (entry.command == command) return entry.name;
  return "unknown";
}

std::optional<Command> command_from_string(std::string_view name) {
  for (const auto& entry : kCommandNames)
    if (entry.name == name) return entry.command;
  return std::nullopt;
}

const std::vector<Command>& all_commands() {
  static const std::vector<Command> commands = [] {
    std::vector<Command> out;
    for (const auto& entry : kCommandNames) out.push_back(entry.command);
    return out;
  }();
  return commands;
}

Scenario parse_scenario(const json& config) {
  if (!config.is_object()) throw ParameterError("config: expected a JSON object");
  for (const auto& [key, unused] : config.items())
    if (!kKnownFields.contains(key)) throw ParameterError(key + ": unknown field");
  if (!config.contains("command") || !config["command"].is_string())
    throw ParameterError("command: missing or not a string");
  const auto command = command_from_string(config["command"].get<std::string>());
  if (!command)
    throw ParameterError("command: unknown command '" + config["command"].get<std::string>() + "'");

  Scenario s;
  s.command = *command;
  if (config.contains("sequence"))
    s.sequence = sequence_to_json(sequence_from_json(config["sequence"], "sequence"));
  if (config.contains("second_sequence"))
    s.second_sequence =
        sequence_to_json(sequence_from_json(config["second_sequence"], "second_sequence"));

  const auto integer = [&](const char* field, std::optional<long long>& slot) {
    if (config.contains(field)) slot = read_integer(config, field);
  };
  integer("n", s.n);
  integer("N", s.N);
  integer("j", s.j);
  integer("p", s.p);
  if (config.contains("b")) s.b = read_real(config, "b");
  if (config.contains("tolerance")) s.tolerance = read_real(config, "tolerance");

  const auto scalar = [&](const char* field, std::optional<Complex>& slot) {
    if (config.contains(field)) slot = complex_from_json(config[field], field);
  };
  scalar("lambda", s.lambda);
  scalar("beta", s.beta);
  scalar("beta2", s.beta2);
  scalar("u", s.u);
  scalar("z", s.z);
  scalar("w", s.w);
  scalar("zeta", s.zeta);

  if (config.contains("w_samples")) s.w_samples = read_complex_list(config, "w_samples");
  if (config.contains("sample_points")) s.sample_points = read_complex_list(config, "sample_points");
  if (config.contains("thetas")) s.thetas = read_thetas(config);
  if (config.contains("checkpoints")) {
    const auto& raw = config["checkpoints"];
    if (!raw.is_array()) throw ParameterError("checkpoints: expected an array of integers");
    std::vector<long long> values;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (!raw[i].is_number_integer())
        throw ParameterError("checkpoints[" + std::to_string(i) + "]: expected an integer");
      values.push_back(raw[i].get<long long>());
    }
    s.checkpoints = std::move(values);
  }

  if (config.contains("density")) {
    const auto& raw = config["density"];
    if (!raw.is_object() || !raw.contains("kind") || !raw["kind"].is_string())
      throw ParameterError("density.kind: missing or not a string");
    DensitySpec density;
    density.kind = raw["kind"].get<std::string>();
    if (density.kind == "ranga") {
      if (!raw.contains("b") || !raw["b"].is_number()) throw ParameterError("density.b: expected a number");
      density.b = raw["b"].get<double>();
    } else if (density.kind != "lebesgue") {
      throw ParameterError("density.kind: expected 'lebesgue' or 'ranga'");
    }
    for (const auto& [key, unused] : raw.items())
      if (key != "kind" && key != "b") throw ParameterError("density." + key + ": unknown field");
    s.density = density;
  }

  if (config.contains("sweep")) {
    const auto& raw = config["sweep"];
    if (!raw.is_object()) throw ParameterError("sweep: expected an object");
    SweepSpec sweep;
    for (const auto& [key, value] : raw.items()) {
      if (!value.is_number_integer()) throw ParameterError("sweep." + key + ": expected an integer");
      if (key == "trials") {
        sweep.trials = value.get<long long>();
      } else if (key == "max_dimension") {
        sweep.max_dimension = value.get<long long>();
      } else {
        throw ParameterError("sweep." + key + ": unknown field");
      }
    }
    s.sweep = sweep;
  }

  if (config.contains("output")) {
    const auto& raw = config["output"];
    if (!raw.is_object()) throw ParameterError("output: expected an object");
    for (const auto& [key, value] : raw.items()) {
      if (key != "format") throw ParameterError("output." + key + ": unknown field");
      const auto format = value.is_string() ? value.get<std::string>() : std::string();
      if (format == "csv") {
        s.format = TableFormat::csv;
      } else if (format == "json") {
        s.format = TableFormat::json;
      } else {
        throw ParameterError("output.format: expected 'csv' or 'json'");
      }
    }
  }
  if (config.contains("threads")) {
    const auto threads = read_integer(config, "threads");
    if (threads < 1 || threads > 256) throw ParameterError("threads: must be in [1, 256]");
    s.threads = static_cast<unsigned>(threads);
  }

  validate(s);
  return s;
}

json scenario_to_json(const Scenario& s) {
  json config;
  config["command"] = std::string(to_string(s.command));
  if (s.sequence) config["sequence"] = *s.sequence;
  if (s.second_sequence) config["second_sequence"] = *s.second_sequence;
  const auto put = [&](const char* field, const auto& slot) {
    if (slot) config[field] = *slot;
  };
  put("n", s.n);
  put("N", s.N);
  put("j", s.j);
  put("p", s.p);
  put("b", s.b);
  put("tolerance", s.tolerance);
  const auto put_complex = [&](const char* field, const std::optional<Complex>& slot) {
    if (slot) config[field] = complex_to_json(*slot);
  };
  put_complex("lambda", s.lambda);
  put_complex("beta", s.beta);
  put_complex("beta2", s.beta2);
  put_complex("u", s.u);
  put_complex("z", s.z);
  put_complex("w", s.w);
  put_complex("zeta", s.zeta);
  const auto put_list = [&](const char* field, const std::optional<std::vector<Complex>>& slot) {
    if (!slot) return;
    json list = json::array();
    for (const auto& value : *slot) list.push_back(complex_to_json(value));
    config[field] = std::move(list);
  };
  put_list("w_samples", s.w_samples);
  put_list("sample_points", s.sample_points);
  put("thetas", s.thetas);
  put("checkpoints", s.checkpoints);
  if (s.density) {
    config["density"] = {{"kind", s.density->kind}};
    if (s.density->kind == "ranga") config["density"]["b"] = s.density->b;
  }
  if (s.sweep)
    config["sweep"] = {{"trials", s.sweep->trials}, {"max_dimension", s.sweep->max_dimension}};
  config["output"] = {{"format", s.format == TableFormat::csv ? "csv" : "json"}};
  config["threads"] = s.threads;
  return config;
}

VerblunskySequence scenario_sequence(const Scenario& scenario) {
  if (!scenario.sequence) throw ParameterError("sequence: missing");
  return sequence_from_json(*scenario.sequence, "sequence");
}

}  // namespace opuc::cli
