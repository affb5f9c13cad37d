#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "opuc/cli/run.hpp"
#include "opuc/cli/scenario.hpp"
#include "opuc/cli/table.hpp"
#include "opuc/errors.hpp"

using namespace opuc;
using namespace opuc::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("opuc_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json run_json(const json& config, const std::string& name, std::uint64_t seed = 0) {
  const auto dir = fresh_dir(name);
  run(parse_scenario(config), dir, seed);
  return json::parse(slurp(dir / "result.json"));
}

int run_file(const json& config, const std::string& name, std::string* message = nullptr) {
  const auto dir = fresh_dir(name);
  std::ofstream(dir / "config.json") << config.dump();
  std::ostringstream err;
  const int code = run_config(dir / "config.json", dir / "out", 0, err);
  if (message) *message = err.str();
  return code;
}

const json kZero = {{"kind", "zero"}};
const json kRanga = {{"kind", "ranga"}, {"params", {-0.25}}};
const json kRangaFast = {{"kind", "ranga"}, {"params", {-0.49}}};

// One working config per command.
std::map<Command, json> sample_configs() {
  return {
      {Command::eval,
       {{"command", "eval"}, {"sequence", kRanga}, {"n", 6}, {"z", {1, 0}}, {"beta", {1, 0}},
        {"lambda", {0, 1}}}},
      {Command::kernel,
       {{"command", "kernel"}, {"sequence", kRanga}, {"n", 5}, {"z", {0, 1}}, {"w", {-1, 0}},
        {"lambda", {0, 1}}, {"zeta", {1, 0}}, {"N", 200}}},
      {Command::zeros,
       {{"command", "zeros"}, {"sequence", kZero}, {"n", 4}, {"beta", {1, 0}},
        {"beta2", {{"angle", 1.0}}}}},
      {Command::quadrature,
       {{"command", "quadrature"}, {"sequence", kZero}, {"n", 2}, {"beta", {1, 0}}}},
      {Command::cmv,
       {{"command", "cmv"}, {"sequence", kRanga}, {"N", 8}, {"j", 2}}},
      {Command::commute,
       {{"command", "commute"}, {"sequence", kRanga},
        {"second_sequence", {{"kind", "alexandrov"}, {"params", {{0, 1}}}, {"base", kRanga}}},
        {"N", 24}}},
      {Command::gram,
       {{"command", "gram"}, {"sequence", kZero}, {"n", 2}, {"lambda", {-1, 0}},
        {"beta", {1, 0}}}},
      {Command::mub,
       {{"command", "mub"}, {"sequence", kZero}, {"n", 2}, {"lambda", {-1, 0}},
        {"beta", {1, 0}}, {"sweep", {{"trials", 5}, {"max_dimension", 5}}}}},
      {Command::balance,
       {{"command", "balance"}, {"sequence", kRanga}, {"n", 2}, {"lambda", {0, 1}},
        {"tolerance", 1e-10}}},
      {Command::infinite,
       {{"command", "infinite"}, {"sequence", kRangaFast}, {"lambda", {0, 1}}, {"w", {-1, 0}},
        {"w_samples", {{"grid", 4}}}, {"N", 1000}, {"tolerance", 1e-8},
        {"checkpoints", {10, 100, 1000}}}},
      {Command::sieved_balance,
       {{"command", "sieved-balance"}, {"b", -0.49}, {"p", 2}, {"lambda", {0, 1}},
        {"u", {-1, 0}}, {"w_samples", {{0, 1}}}, {"N", 1000}, {"tolerance", 1e-8}}},
      {Command::diagnostic,
       {{"command", "diagnostic"}, {"sequence", kZero}, {"n", 4},
        {"thetas", {{"count", 5}, {"min", 0.0}, {"max", 3.0}}},
        {"density", {{"kind", "lebesgue"}}}}},
  };
}

}  // namespace

TEST_CASE("emit_table") {
  Table empty{{{"angle"}, {"node", true}}, {}};
  CHECK(emit_table(empty, TableFormat::csv) == "angle,re_node,im_node\n");
  CHECK(emit_table(empty, TableFormat::json) == "[]\n");

  Table one{{{"k"}, {"x"}, {"z", true}, {"label"}}, {}};
  one.add_row({3LL, 0.1, Complex(1.0, -2.0), std::string("a")});
  CHECK(emit_table(one, TableFormat::csv) ==
        "k,x,re_z,im_z,label\n3,0.10000000000000001,1,-2,a\n");
  const auto records = json::parse(emit_table(one, TableFormat::json));
  REQUIRE(records.size() == 1);
  CHECK(records[0]["k"] == 3);
  CHECK(records[0]["x"].get<double>() == 0.1);
  CHECK(records[0]["re_z"].get<double>() == 1.0);
  CHECK(records[0]["label"] == "a");

  CHECK(std::stod(format_double(0.1)) == 0.1);
  CHECK(format_double(1.0 / 3.0) == "0.33333333333333331");

  Table bad{{{"k"}}, {}};
  CHECK_THROWS_AS(bad.add_row({1LL, 2LL}), std::invalid_argument);
}

TEST_CASE("quadrature and gram tables") {
  const auto dir = fresh_dir("tables");
  run(parse_scenario(sample_configs().at(Command::quadrature)), dir, 0);
  std::istringstream csv(slurp(dir / "quadrature.csv"));
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(csv, line)) lines.push_back(line);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "angle,re_node,im_node,weight");
  for (std::size_t r = 1; r < 3; ++r) CHECK(std::count(lines[r].begin(), lines[r].end(), ',') == 3);

  auto config = sample_configs().at(Command::gram);
  config["output"] = {{"format", "json"}};
  const auto gdir = fresh_dir("gram");
  run(parse_scenario(config), gdir, 0);
  const auto gram = json::parse(slurp(gdir / "gram.json"));
  REQUIRE(gram.size() == 9);
  for (const auto& record : gram) {
    CHECK(record.size() == 5);
    for (const char* key : {"k", "m", "re_entry", "im_entry", "modulus"}) CHECK(record.contains(key));
  }
}

TEST_CASE("command examples") {
  const auto zeros = run_json(sample_configs().at(Command::zeros), "zeros");
  REQUIRE(zeros["count"] == 4);
  const double pi = std::numbers::pi;
  const std::vector<double> expect{0.0, pi / 2.0, pi, 3.0 * pi / 2.0};
  for (std::size_t k = 0; k < 4; ++k)
    CHECK(std::abs(zeros["angles"][k].get<double>() - expect[k]) < 1e-13);
  CHECK(zeros["interlacing"] == true);

  const auto mub = run_json(sample_configs().at(Command::mub), "mub");
  CHECK(std::abs(mub["deviation"].get<double>() - 0.24402) < 1e-5);
  CHECK(mub["mutually_unbiased"] == false);

  const auto balance = run_json(sample_configs().at(Command::balance), "balance");
  CHECK(balance["verdict"] == true);
  CHECK(balance["max_gap"].get<double>() <= 1e-10);
}

TEST_CASE("scenario round trip") {
  for (const auto& [command, config] : sample_configs()) {
    const auto scenario = parse_scenario(config);
    CHECK(scenario.command == command);
    const auto written = scenario_to_json(scenario);
    CHECK(parse_scenario(written) == scenario);
    CHECK(scenario_to_json(parse_scenario(written)) == written);
  }
  // The normalized config the tool writes also re-parses.
  const auto dir = fresh_dir("roundtrip");
  const auto scenario = parse_scenario(sample_configs().at(Command::infinite));
  run(scenario, dir, 0);
  CHECK(parse_scenario(json::parse(slurp(dir / "scenario.json"))) == scenario);
}

TEST_CASE("validation errors name the field") {
  const auto message = [](json config) {
    try {
      parse_scenario(config);
    } catch (const ParameterError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  auto config = sample_configs().at(Command::zeros);
  config["bogus"] = 1;
  CHECK(message(config).find("bogus") != std::string::npos);

  config = sample_configs().at(Command::zeros);
  config["command"] = "frobnicate";
  CHECK(message(config).find("frobnicate") != std::string::npos);

  config = sample_configs().at(Command::zeros);
  config.erase("beta");
  CHECK(message(config).find("beta") != std::string::npos);

  config = sample_configs().at(Command::zeros);
  config["beta"] = {2, 0};
  CHECK(message(config).find("beta") != std::string::npos);

  config = sample_configs().at(Command::zeros);
  config["n"] = 0;
  CHECK(message(config).find("n") != std::string::npos);

  config = sample_configs().at(Command::zeros);
  config["sequence"] = {{"kind", "constant"}, {"params", {{0.6, 0.9}}}};
  CHECK(message(config).find("sequence") != std::string::npos);

  config = sample_configs().at(Command::balance);
  config["tolerance"] = -1.0;
  CHECK(message(config).find("tolerance") != std::string::npos);

  config = sample_configs().at(Command::zeros);
  config["threads"] = 0;
  CHECK(message(config).find("threads") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(run_file(sample_configs().at(Command::zeros), "exit_ok") == kExitOk);

  std::string message;
  auto config = sample_configs().at(Command::zeros);
  config["command"] = "frobnicate";
  CHECK(run_file(config, "exit_command", &message) == kExitInvalid);
  CHECK(message.find("frobnicate") != std::string::npos);

  const auto dir = fresh_dir("exit_malformed");
  std::ofstream(dir / "config.json") << "{ not json";
  std::ostringstream err;
  CHECK(run_config(dir / "config.json", dir / "out", 0, err) == kExitInvalid);
  CHECK(run_config(dir / "missing.json", dir / "out", 0, err) == kExitInvalid);

  // A balanced check on a complex sequence fails validation inside the library.
  config = sample_configs().at(Command::balance);
  config["sequence"] = {{"kind", "constant"}, {"params", {{0.0, 0.5}}}};
  CHECK(run_file(config, "exit_library", &message) == kExitInvalid);
  CHECK(message.find("real") != std::string::npos);

  // |alpha| this close to 1 defeats the zero finder.
  config = {{"command", "zeros"},
            {"sequence", {{"kind", "constant"}, {"params", {1.0 - 1e-15}}}},
            {"n", 200},
            {"beta", {1, 0}}};
  CHECK(run_file(config, "exit_zero_finder", &message) == kExitNumerical);
  CHECK(message.find("zero") != std::string::npos);

  // Overflow of the recursion at a point far outside the disk.
  config = {{"command", "eval"},
            {"sequence", {{"kind", "constant"}, {"params", {0.999999}}}},
            {"n", 100000},
            {"z", {1e300, 0}}};
  CHECK(run_file(config, "exit_overflow") == kExitNumerical);
}

TEST_CASE("the binary honours the same exit codes") {
  const auto dir = fresh_dir("binary");
  std::ofstream(dir / "good.json") << sample_configs().at(Command::zeros).dump();
  std::ofstream(dir / "bad.json") << R"({"command": "zeros", "n": 4})";
  const std::string lab = OPUC_LAB_PATH;
  const auto status = [&](const std::string& config) {
    const std::string cmd = "\"" + lab + "\" --config \"" + (dir / config).string() +
                            "\" --out \"" + (dir / "out").string() + "\" > /dev/null 2>&1";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  CHECK(status("good.json") == 0);
  CHECK(fs::exists(dir / "out" / "result.json"));
  CHECK(fs::exists(dir / "out" / "zeros.csv"));
  CHECK(status("bad.json") == 1);
  CHECK(status("absent.json") == 1);
}

TEST_CASE("outputs are deterministic") {
  for (const auto& [command, config] : sample_configs()) {
    const auto first = fresh_dir("det_a");
    const auto second = fresh_dir("det_b");
    run(parse_scenario(config), first, 17);
    run(parse_scenario(config), second, 17);
    std::set<std::string> names;
    for (const auto& entry : fs::directory_iterator(first)) names.insert(entry.path().filename());
    for (const auto& name : names) CHECK(slurp(first / name) == slurp(second / name));
    CHECK(static_cast<std::size_t>(std::distance(fs::directory_iterator(second),
                                                 fs::directory_iterator())) == names.size());
  }

  // Thread count does not change any output besides the recorded config.
  for (const Command command : {Command::infinite, Command::mub, Command::sieved_balance}) {
    auto config = sample_configs().at(command);
    const auto one = fresh_dir("threads_1");
    const auto four = fresh_dir("threads_4");
    run(parse_scenario(config), one, 5);
    config["threads"] = 4;
    run(parse_scenario(config), four, 5);
    for (const auto& entry : fs::directory_iterator(one)) {
      const auto name = entry.path().filename();
      if (name == "scenario.json") continue;
      CHECK(slurp(one / name) == slurp(four / name));
    }
  }

  // The seed reaches the randomized sweep.
  const auto a = run_json(sample_configs().at(Command::mub), "seed_a", 1);
  const auto b = run_json(sample_configs().at(Command::mub), "seed_b", 2);
  CHECK(a["seed"] == 1);
  CHECK(a["sweep"]["min_deviation"] != b["sweep"]["min_deviation"]);
}

TEST_CASE("every command is reachable and covers the library") {
  const auto configs = sample_configs();
  std::set<std::string> keys;
  std::set<std::string> tables;
  for (const Command command : all_commands()) {
    REQUIRE(configs.contains(command));
    CHECK(command_from_string(to_string(command)) == command);
    const auto result = run_json(configs.at(command), "coverage");
    CHECK(result["command"] == std::string(to_string(command)));
    for (const auto& [key, unused] : result.items()) keys.insert(key);
    for (const auto& name : result["tables"]) tables.insert(name.get<std::string>());
  }

  // Library operations and the outputs that exercise them.
  const std::vector<std::string> expected_keys{
      "phi",            "monic",          "leading_norm",     "transfer_det",
      "popuc",          "ranga_phi1",     "cd_kernel",        "mixed_top",
      "mixed_bottom",   "mixed_kernel",   "christoffel",      "christoffel_oracle",
      "mass_estimate",  "count",          "interlacing",      "max_moment_error",
      "unitarity_defect", "theta_unitarity_defect", "charpoly_error", "moment",
      "interior_commutator", "deviation", "closed_form_gap",  "mutually_unbiased",
      "sweep",          "verdict",        "node_conjugacy_gap", "inner",
      "max_remainder_bound", "l1_growth", "tau",              "max_deviation"};
  for (const auto& key : expected_keys) {
    CAPTURE(key);
    CHECK(keys.contains(key));
  }
  for (const std::string name : {"values", "kernel", "zeros", "zeros_beta2", "quadrature", "moments",
                           "cmv", "gram", "mub_sweep", "balance", "samples", "multisets",
                           "l1_growth", "diagnostic"}) {
    CAPTURE(name);
    CHECK(tables.contains(name + ".csv"));
  }
}
