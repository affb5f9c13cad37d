#include "opuc/cli/run.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "opuc/bases.hpp"
#include "opuc/cmv.hpp"
#include "opuc/errors.hpp"
#include "opuc/kernel.hpp"
#include "opuc/popuc.hpp"
#include "opuc/sequence_io.hpp"
#include "opuc/szego.hpp"

namespace opuc::cli {

using nlohmann::json;

namespace {

constexpr double kDefaultTolerance = 1e-10;

// Non-finite doubles serialize as null.
json number(double value) { return std::isfinite(value) ? json(value) : json(nullptr); }

json complex_value(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return nullptr;
  return complex_to_json(z);
}

std::size_t as_size(long long value) { return static_cast<std::size_t>(value); }

class Output {
 public:
  Output(std::filesystem::path dir, TableFormat format) : dir_(std::move(dir)), format_(format) {}

  void table(const std::string& name, const Table& table) {
    const auto file = name + (format_ == TableFormat::csv ? ".csv" : ".json");
    write(file, emit_table(table, format_));
    tables_.push_back(file);
  }

  void write(const std::string& file, const std::string& bytes) const {
    std::ofstream os(dir_ / file, std::ios::binary);
    if (!os) throw std::ios_base::failure("cannot open " + (dir_ / file).string() + " for writing");
    os << bytes;
    if (!os) throw std::ios_base::failure("write failed for " + (dir_ / file).string());
  }

  const std::vector<std::string>& tables() const { return tables_; }

 private:
  std::filesystem::path dir_;
  TableFormat format_;
  std::vector<std::string> tables_;
};

// Uniform double in [0, 1) from the top 53 bits; portable across standard
// libraries, unlike std::uniform_real_distribution.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<Complex> default_samples(const Scenario& s) {
  if (s.sample_points) return *s.sample_points;
  return {std::polar(0.5, 0.3), std::polar(1.0, 1.1), std::polar(1.7, -2.4), {0.0, 0.0}};
}

double max_entry(const Eigen::MatrixXcd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void run_eval(const Scenario& s, const VerblunskySequence& seq, json& result, Output& out) {
  const auto n = as_size(*s.n);
  const Complex z = *s.z;
  Table table{{{"j"}, {"phi", true}, {"phi_star", true}, {"monic", true}}, {}};
  OrthonormalWalker walker(seq, z);
  double norm = 1.0;
  for (std::size_t j = 0;; ++j) {
    table.add_row({static_cast<long long>(j), walker.value(), walker.star(), walker.value() * norm});
    if (j == n) break;
    norm *= seq.rho(j);
    walker.step();
  }
  out.table("values", table);

  const auto pair = eval_pair(seq, n, z);
  const auto monic = eval_monic(seq, n, z);
  result["phi"] = complex_value(pair.unscaled_value());
  result["phi_star"] = complex_value(pair.unscaled_star());
  result["monic"] = complex_value(monic.unscaled_value());
  result["monic_star"] = complex_value(monic.unscaled_star());
  result["leading_norm"] = number(leading_norm(seq, n));
  if (n > 0) {
    const auto t = TransferMatrix::at(seq.alpha(n - 1), z);
    result["transfer_det"] = complex_value(t.det());
  }
  if (s.beta) result["popuc"] = complex_value(popuc_eval(seq, n, *s.beta, z));
  if (seq.kind() == SequenceKind::ranga && z == Complex{1.0, 0.0}) {
    const double closed = ranga_phi1(seq.params()[0].real(), n);
    result["ranga_phi1"] = number(closed);
    result["ranga_phi1_relative_error"] =
        number(std::abs(monic.unscaled_value() - closed) / std::abs(closed));
  }
}

void run_kernel(const Scenario& s, const VerblunskySequence& seq, json& result, Output& out) {
  const auto n = as_size(*s.n);
  const Complex z = *s.z;
  const Complex w = *s.w;
  const Complex lambda = s.lambda.value_or(Complex{1.0, 0.0});

  Table table{{{"j"}, {"kernel", true}, {"mixed", true}}, {}};
  OrthonormalWalker wz(seq, z);
  OrthonormalWalker ww(seq, w);
  OrthonormalWalker wl(alexandrov(seq, lambda), z);
  Complex kernel{0.0, 0.0};
  Complex mixed{0.0, 0.0};
  for (std::size_t j = 0;; ++j) {
    kernel += wz.value() * std::conj(ww.value());
    mixed += std::conj(ww.value()) * wl.value();
    table.add_row({static_cast<long long>(j), kernel, mixed});
    if (j == n) break;
    wz.step();
    ww.step();
    wl.step();
  }
  out.table("kernel", table);

  result["cd_kernel"] = complex_value(cd_kernel(seq, n, z, w).value);
  const Complex direct = mixed_direct_sum(seq, lambda, n, z, w);
  result["mixed_direct"] = complex_value(direct);
  if (std::abs(1.0 - z * std::conj(w)) > kDiagonalTolerance) {
    const Complex top = mixed_cd(seq, lambda, n, z, w, KernelForm::mixed_top).value;
    const Complex bottom = mixed_cd(seq, lambda, n, z, w, KernelForm::mixed_bottom).value;
    result["mixed_top"] = complex_value(top);
    result["mixed_bottom"] = complex_value(bottom);
    const double scale = std::max(1.0, std::abs(direct));
    result["mixed_relative_error"] =
        number(std::max(std::abs(top - direct), std::abs(bottom - direct)) / scale);
  } else {
    result["mixed_top"] = nullptr;
    result["mixed_bottom"] = nullptr;
  }
  result["mixed_kernel"] = complex_value(mixed_kernel(seq, lambda, n, z, w).value);

  if (s.zeta) {
    const Complex zeta = *s.zeta;
    result["christoffel"] = number(christoffel(seq, n, zeta));
    if (n <= 30) result["christoffel_oracle"] = number(christoffel_oracle(seq, n, zeta));
    const auto N = s.N ? as_size(*s.N) : std::size_t{1000};
    const auto mass = mass_estimate(seq, zeta, N);
    result["mass_estimate"] = {{"N", N},
                               {"partial_mass", number(mass.partial_mass)},
                               {"slope", number(mass.slope)},
                               {"diverging", mass.diverging}};
  }
}

Table zero_table(const std::vector<double>& angles) {
  Table table{{{"k"}, {"angle"}, {"node", true}}, {}};
  for (std::size_t k = 0; k < angles.size(); ++k)
    table.add_row({static_cast<long long>(k), angles[k], std::polar(1.0, angles[k])});
  return table;
}

void run_zeros(const Scenario& s, const VerblunskySequence& seq, json& result, Output& out) {
  const auto n = as_size(*s.n);
  const auto angles = popuc_zero_angles(seq, n, *s.beta);
  out.table("zeros", zero_table(angles));

  double max_residual = 0.0;
  double max_modulus_defect = 0.0;
  std::vector<Complex> nodes;
  for (double theta : angles) {
    const Complex zk = std::polar(1.0, theta);
    nodes.push_back(zk);
    max_residual = std::max(max_residual, std::abs(popuc_eval(seq, n, *s.beta, zk)));
    max_modulus_defect = std::max(max_modulus_defect, std::abs(std::abs(zk) - 1.0));
  }
  double min_gap = 2.0 * std::numbers::pi;
  for (std::size_t k = 0; k < angles.size(); ++k) {
    const double next = k + 1 < angles.size() ? angles[k + 1] : angles[0] + 2.0 * std::numbers::pi;
    min_gap = std::min(min_gap, next - angles[k]);
  }
  result["count"] = angles.size();
  result["angles"] = angles;
  result["min_gap"] = number(min_gap);
  result["max_residual"] = number(max_residual);
  result["max_modulus_defect"] = number(max_modulus_defect);

  if (s.beta2) {
    const auto second = popuc_zeros(seq, n, *s.beta2);
    std::vector<double> second_angles;
    for (const Complex zk : second) {
      double theta = std::arg(zk);
      if (theta < 0.0) theta += 2.0 * std::numbers::pi;
      second_angles.push_back(theta);
    }
    out.table("zeros_beta2", zero_table(second_angles));
    result["interlacing"] = interlacing_check(nodes, second);
  }
}

void run_quadrature(const Scenario& s, const VerblunskySequence& seq, json& result, Output& out) {
  const auto n = as_size(*s.n);
  const auto qm = quadrature(seq, n, *s.beta);
  Table nodes{{{"angle"}, {"node", true}, {"weight"}}, {}};
  double total = 0.0;
  double min_weight = qm.weights.empty() ? 0.0 : qm.weights.front();
  for (std::size_t k = 0; k < qm.nodes.size(); ++k) {
    nodes.add_row({qm.angles[k], qm.nodes[k], qm.weights[k]});
    total += qm.weights[k];
    min_weight = std::min(min_weight, qm.weights[k]);
  }
  out.table("quadrature", nodes);

  Table moments{{{"j"}, {"quadrature", true}, {"cmv", true}, {"error"}}, {}};
  double max_error = 0.0;
  const auto span = static_cast<long>(n);
  for (long j = -span; j <= span; ++j) {
    const Complex q = quadrature_moment(qm, j);
    const Complex c = cmv_moment(seq, j);
    const double error = std::abs(q - c);
    max_error = std::max(max_error, error);
    moments.add_row({static_cast<long long>(j), q, c, error});
  }
  out.table("moments", moments);
  result["weight_sum"] = number(total);
  result["min_weight"] = number(min_weight);
  result["max_moment_error"] = number(max_error);
}

void run_cmv(const Scenario& s, const VerblunskySequence& seq, json& result, Output& out) {
  const auto N = as_size(*s.N);
  const auto op = s.beta ? cmv_unitary_truncate(seq, N, *s.beta) : cmv_truncate(seq, N);
  const Eigen::MatrixXcd dense = op.dense();

  Table band{{{"row"}, {"col"}, {"entry", true}}, {}};
  for (std::size_t r = 0; r < N; ++r) {
    const std::size_t lo = r >= 2 ? r - 2 : 0;
    const std::size_t hi = std::min(N - 1, r + 2);
    for (std::size_t c = lo; c <= hi; ++c)
      band.add_row({static_cast<long long>(r), static_cast<long long>(c), op(r, c)});
  }
  out.table("cmv", band);

  double theta_defect = 0.0;
  for (std::size_t k = 0; k < N; ++k) {
    const Eigen::Matrix2cd t = theta_block(seq.alpha(k));
    theta_defect = std::max(theta_defect,
                            max_entry(t.adjoint() * t - Eigen::Matrix2cd::Identity()));
  }
  result["theta_unitarity_defect"] = number(theta_defect);
  result["unitarity_defect"] =
      number(max_entry(dense.adjoint() * dense - Eigen::MatrixXcd::Identity(
                                                     static_cast<Eigen::Index>(N),
                                                     static_cast<Eigen::Index>(N))));
  result["unitary_truncation"] = s.beta.has_value();
  const auto samples = default_samples(s);
  if (N <= 64) result["charpoly_error"] = number(charpoly_check(op, seq, N, samples));
  if (s.j) {
    const long j = static_cast<long>(*s.j);
    const Complex moment = cmv_moment(seq, j);
    result["moment"] = {{"j", j}, {"value", complex_value(moment)}};
  }
}

void run_commute(const Scenario& s, const VerblunskySequence& seq, json& result) {
  const auto second = sequence_from_json(*s.second_sequence, "second_sequence");
  result["interior_commutator"] = number(commutator_interior(seq, second, as_size(*s.N)));
}

Table gram_table(const CrossGram& gram) {
  Table table{{{"k"}, {"m"}, {"entry", true}, {"modulus"}}, {}};
  for (Eigen::Index k = 0; k < gram.direct.rows(); ++k)
    for (Eigen::Index m = 0; m < gram.direct.cols(); ++m)
      table.add_row({static_cast<long long>(k), static_cast<long long>(m), gram.direct(k, m),
                     std::abs(gram.direct(k, m))});
  return table;
}

void gram_scalars(const CrossGram& gram, json& result) {
  double row_defect = 0.0;
  for (Eigen::Index k = 0; k < gram.direct.rows(); ++k)
    row_defect = std::max(row_defect, std::abs(gram.direct.row(k).squaredNorm() - 1.0));
  for (Eigen::Index m = 0; m < gram.direct.cols(); ++m)
    row_defect = std::max(row_defect, std::abs(gram.direct.col(m).squaredNorm() - 1.0));
  result["dimension"] = gram.direct.rows();
  result["closed_form_gap"] = number(gram.closed_form_gap);
  result["unit_sum_defect"] = number(row_defect);
  result["deviation"] = number(mub_deviation(gram));
}

void run_gram(const Scenario& s, const VerblunskySequence& seq, json& result, Output& out) {
  const auto gram = cross_gram(seq, *s.lambda, as_size(*s.n), *s.beta);
  out.table("gram", gram_table(gram));
  gram_scalars(gram, result);
}

void run_mub(const Scenario& s, const VerblunskySequence& seq, json& result, Output& out,
             std::uint64_t seed) {
  const auto gram = cross_gram(seq, *s.lambda, as_size(*s.n), *s.beta);
  gram_scalars(gram, result);
  result["mutually_unbiased"] = mub_deviation(gram) <= 1e-10;
  if (!s.sweep) return;

  // Random real sequences at random dimensions in [3, max_dimension] with
  // random non-real lambda.
  std::mt19937_64 rng(seed);
  Table table{{{"trial"}, {"dimension"}, {"lambda", true}, {"deviation"}}, {}};
  double min_deviation = std::numeric_limits<double>::infinity();
  const long long max_dim = std::max<long long>(3, s.sweep->max_dimension);
  for (long long trial = 0; trial < s.sweep->trials; ++trial) {
    const auto dim = 3 + static_cast<long long>(unit_uniform(rng) * static_cast<double>(max_dim - 2));
    std::vector<Complex> entries;
    for (long long i = 0; i < dim + 1; ++i) entries.emplace_back(1.8 * unit_uniform(rng) - 0.9, 0.0);
    const double angle = 0.05 + (std::numbers::pi - 0.1) * unit_uniform(rng);
    const Complex lambda = std::polar(1.0, unit_uniform(rng) < 0.5 ? angle : -angle);
    const auto sweep_gram = cross_gram(list_sequence(entries), lambda, as_size(dim - 1), *s.beta);
    const double deviation = mub_deviation(sweep_gram);
    min_deviation = std::min(min_deviation, deviation);
    table.add_row({trial, dim, lambda, deviation});
  }
  out.table("mub_sweep", table);
  result["sweep"] = {{"seed", seed},
                     {"trials", s.sweep->trials},
                     {"min_deviation", number(min_deviation)}};
}

json report_json(const BalanceReport& report) {
  return {{"verdict", report.verdict},
          {"max_gap", number(report.max_gap)},
          {"tolerance", number(report.tolerance)},
          {"closed_form_gap", number(report.closed_form_gap)},
          {"node_conjugacy_gap", number(report.node_conjugacy_gap)},
          {"hypothesis_ok", report.hypothesis_ok},
          {"warnings", report.warnings}};
}

Table multiset_table(const BalanceReport& report) {
  Table table{{{"index"}, {"first"}, {"second"}, {"gap"}}, {}};
  for (std::size_t i = 0; i < report.first.size(); ++i)
    table.add_row({static_cast<long long>(i), report.first[i], report.second[i],
                   std::abs(report.first[i] - report.second[i])});
  return table;
}

void run_balance(const Scenario& s, const VerblunskySequence& seq, json& result, Output& out) {
  const auto report =
      balanced_check(seq, *s.lambda, as_size(*s.n), s.tolerance.value_or(kDefaultTolerance));
  out.table("balance", multiset_table(report));
  result.update(report_json(report));
}

void infinite_outputs(const InfiniteBalance& balance, json& result, Output& out) {
  Table table{{{"w", true},
               {"partial_sum", true},
               {"closed_form", true},
               {"error"},
               {"remainder_bound"},
               {"paired_w", true},
               {"paired_partial_sum", true},
               {"paired_error"}},
              {}};
  double max_error = 0.0;
  double max_bound = 0.0;
  double conjugacy_gap = 0.0;
  for (const auto& sample : balance.samples) {
    table.add_row({sample.w, sample.inner.partial_sum, sample.inner.closed_form, sample.inner.error,
                   sample.inner.remainder_bound, sample.paired_w, sample.paired.partial_sum,
                   sample.paired.error});
    max_error = std::max({max_error, sample.inner.error, sample.paired.error});
    max_bound = std::max({max_bound, sample.inner.remainder_bound, sample.paired.remainder_bound});
    conjugacy_gap = std::max(conjugacy_gap,
                             std::abs(std::abs(sample.inner.partial_sum) -
                                      std::abs(sample.paired.partial_sum)));
  }
  out.table("samples", table);
  out.table("multisets", multiset_table(balance.report));
  result.update(report_json(balance.report));
  result["max_error"] = number(max_error);
  result["max_remainder_bound"] = number(max_bound);
  result["paired_modulus_gap"] = number(conjugacy_gap);
}

json inner_json(const InfiniteInner& inner) {
  return {{"partial_sum", complex_value(inner.partial_sum)},
          {"closed_form", complex_value(inner.closed_form)},
          {"error", number(inner.error)},
          {"decay_ok", inner.decay_ok},
          {"decay_ratio", number(inner.decay_ratio)},
          {"sup_rotated", number(inner.sup_rotated)},
          {"remainder_bound", number(inner.remainder_bound)}};
}

void run_infinite(const Scenario& s, const VerblunskySequence& seq, json& result, Output& out) {
  const auto N = as_size(*s.N);
  if (s.w) result["inner"] = inner_json(infinite_inner(seq, *s.lambda, *s.w, N));
  if (s.w_samples)
    infinite_outputs(infinite_balance(seq, *s.lambda, *s.w_samples, N,
                                      s.tolerance.value_or(kDefaultTolerance), s.threads),
                     result, out);

  std::vector<std::size_t> checkpoints;
  if (s.checkpoints) {
    for (auto k : *s.checkpoints) checkpoints.push_back(as_size(k));
  } else {
    for (std::size_t k = std::max<std::size_t>(N / 100, 1); k <= N; k *= 10) checkpoints.push_back(k);
  }
  const auto growth = l1_growth(seq, Complex{1.0, 0.0}, checkpoints);
  Table table{{{"N"}, {"partial_sum"}}, {}};
  for (std::size_t i = 0; i < growth.checkpoints.size(); ++i)
    table.add_row({static_cast<long long>(growth.checkpoints[i]), growth.partial_sums[i]});
  out.table("l1_growth", table);
  result["l1_growth"] = {{"slope", number(growth.slope)},
                         {"monotone", growth.monotone},
                         {"unbounded", growth.unbounded}};
}

void run_sieved(const Scenario& s, json& result, Output& out) {
  const auto balance =
      sieved_balance(*s.b, static_cast<int>(*s.p), *s.lambda, *s.u, *s.w_samples, as_size(*s.N),
                     s.tolerance.value_or(kDefaultTolerance), s.threads);
  infinite_outputs(balance, result, out);
}

void run_diagnostic(const Scenario& s, const VerblunskySequence& seq, json& result, Output& out) {
  const auto model =
      s.density->kind == "ranga" ? DensityModel::ranga(s.density->b) : DensityModel::lebesgue();
  const auto diagnostic = density_diagnostic(seq, model, as_size(*s.n), *s.thetas, s.threads);
  Table table{{{"theta"}, {"ratio"}, {"density"}, {"deviation"}}, {}};
  for (const auto& point : diagnostic.points)
    table.add_row({point.theta, point.ratio, point.density, point.deviation});
  out.table("diagnostic", table);
  result["tau"] = number(model.tau);
  result["max_deviation"] = number(diagnostic.max_deviation);
}

}  // namespace

void run(const Scenario& scenario, const std::filesystem::path& out_dir, std::uint64_t seed) {
  std::filesystem::create_directories(out_dir);
  Output out(out_dir, scenario.format);
  out.write("scenario.json", scenario_to_json(scenario).dump(2) + "\n");

  json result;
  result["command"] = std::string(to_string(scenario.command));
  result["seed"] = seed;
  const auto seq = scenario.sequence ? scenario_sequence(scenario) : VerblunskySequence();
  switch (scenario.command) {
    case Command::eval: run_eval(scenario, seq, result, out); break;
    case Command::kernel: run_kernel(scenario, seq, result, out); break;
    case Command::zeros: run_zeros(scenario, seq, result, out); break;
    case Command::quadrature: run_quadrature(scenario, seq, result, out); break;
    case Command::cmv: run_cmv(scenario, seq, result, out); break;
    case Command::commute: run_commute(scenario, seq, result); break;
    case Command::gram: run_gram(scenario, seq, result, out); break;
    case Command::mub: run_mub(scenario, seq, result, out, seed); break;
    case Command::balance: run_balance(scenario, seq, result, out); break;
    case Command::infinite: run_infinite(scenario, seq, result, out); break;
    case Command::sieved_balance: run_sieved(scenario, result, out); break;
    case Command::diagnostic: run_diagnostic(scenario, seq, result, out); break;
  }
  result["tables"] = out.tables();
  out.write("result.json", result.dump(2) + "\n");
}

int run_config(const std::filesystem::path& config, const std::filesystem::path& out_dir,
               std::uint64_t seed, std::ostream& err) {
  try {
    std::ifstream is(config);
    if (!is) {
      err << "error: cannot read config " << config.string() << "\n";
      return kExitInvalid;
    }
    const json raw = json::parse(is);
    run(parse_scenario(raw), out_dir, seed);
    return kExitOk;
  } catch (const json::exception& e) {
    err << "error: malformed config: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const ZeroFinderError& e) {
    err << "numerical failure: " << e.what() << "\n" << e.diagnostics();
    return kExitNumerical;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}

}  // namespace opuc::cli
