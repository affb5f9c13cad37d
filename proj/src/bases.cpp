#include "opuc/bases.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "opuc/errors.hpp"
#include "opuc/kernel.hpp"
#include "opuc/parallel.hpp"
#include "opuc/popuc.hpp"
#include "opuc/szego.hpp"

namespace opuc {

namespace {

constexpr double kDecayFactor = 0.5;

Complex require_nonreal_unimodular(Complex lambda) {
  lambda = checked_unimodular(lambda, "lambda");
  if (std::abs(lambda - 1.0) <= kUnimodularTolerance ||
      std::abs(lambda + 1.0) <= kUnimodularTolerance)
    throw ParameterError("lambda must not be -1 or 1");
  return lambda;
}

void require_real(const VerblunskySequence& seq, std::size_t last) {
  if (const auto index = seq.first_nonreal_index(last))
    throw ParameterError("sequence must have real coefficients: alpha_" +
                         std::to_string(*index) + " is not real");
}

// Columns phi(z_k) / sqrt(K_n(z_k, z_k)) for the given nodes.
void fill_columns(BasisFamily& family, std::size_t n) {
  const auto dim = static_cast<Eigen::Index>(n + 1);
  family.vectors.resize(dim, static_cast<Eigen::Index>(family.nodes.size()));
  family.kernel_diagonal.clear();
  for (std::size_t k = 0; k < family.nodes.size(); ++k) {
    OrthonormalWalker walker(family.seq, family.nodes[k]);
    Eigen::VectorXcd column(dim);
    column(0) = walker.value();
    double kernel = 1.0;
    for (Eigen::Index j = 1; j < dim; ++j) {
      walker.step();
      column(j) = walker.value();
      kernel += std::norm(walker.value());
    }
    family.kernel_diagonal.push_back(kernel);
    family.vectors.col(static_cast<Eigen::Index>(k)) = column / std::sqrt(kernel);
  }
}

// eta(state) for a single point.
Eigen::VectorXcd normalized_vector(const VerblunskySequence& seq, std::size_t n, Complex z) {
  BasisFamily single;
  single.seq = seq;
  single.nodes = {z};
  fill_columns(single, n);
  return single.vectors.col(0);
}

InfiniteBalance run_balance(const VerblunskySequence& seq, Complex lambda, Complex state,
                            std::span<const Complex> ws, std::size_t N, double tolerance,
                            unsigned threads,
                            const std::function<Complex(Complex)>& mirror) {
  InfiniteBalance result;
  result.samples.resize(ws.size());
  const Complex lambda_bar = std::conj(lambda);
  parallel_for(ws.size(), threads, [&](std::size_t i) {
    InfiniteSample sample;
    sample.w = ws[i];
    sample.paired_w = mirror(ws[i]);
    sample.inner = infinite_inner_at(seq, lambda, state, sample.w, N);
    sample.paired = infinite_inner_at(seq, lambda_bar, state, sample.paired_w, N);
    result.samples[i] = sample;
  });

  std::vector<double> first, second;
  double closed_gap = 0.0;
  bool decay_ok = true;
  for (const auto& sample : result.samples) {
    first.push_back(std::abs(sample.inner.partial_sum));
    second.push_back(std::abs(sample.paired.partial_sum));
    closed_gap = std::max(closed_gap, std::abs(std::abs(sample.inner.closed_form) -
                                               std::abs(sample.paired.closed_form)));
    decay_ok = decay_ok && sample.inner.decay_ok;
  }
  result.report = compare_multisets(std::move(first), std::move(second), tolerance);
  result.report.closed_form_gap = closed_gap;
  result.report.hypothesis_ok = decay_ok;
  result.report.verdict = result.report.max_gap <= tolerance && closed_gap <= tolerance;
  return result;
}

void require_decay(const VerblunskySequence& seq, Complex state, std::size_t N) {
  // The decay check does not depend on lambda or w.
  const auto probe = infinite_inner_at(seq, Complex(0.0, 1.0), state, -state, N);
  if (!probe.decay_ok) {
    std::ostringstream os;
    os << "decay hypothesis fails at the state point: |phi_N| / |phi_{N/10}| = "
       << probe.decay_ratio << " is not below " << kDecayFactor;
    throw ParameterError(os.str());
  }
}

}  // namespace

BasisFamily basis_family(const VerblunskySequence& seq, std::size_t n, Complex beta) {
  BasisFamily family;
  family.dimension = n + 1;
  family.seq = seq;
  family.beta = checked_unimodular(beta, "beta");
  family.nodes = popuc_zeros(seq, n + 1, family.beta);
  fill_columns(family, n);
  return family;
}

CrossGram cross_gram(const VerblunskySequence& seq, Complex lambda, std::size_t n,
                     Complex beta) {
  CrossGram gram;
  gram.lambda = checked_unimodular(lambda, "lambda");
  gram.beta = checked_unimodular(beta, "beta");
  const auto first = basis_family(seq, n, gram.beta);
  const auto second = basis_family(alexandrov(seq, gram.lambda), n, gram.lambda * gram.beta);
  gram.z_nodes = first.nodes;
  gram.w_nodes = second.nodes;
  gram.direct = first.vectors.adjoint() * second.vectors;

  const auto dim = static_cast<Eigen::Index>(n + 1);
  gram.closed_form.resize(dim, dim);
  const Complex numerator = 1.0 - std::conj(gram.lambda);
  const bool same_family = std::abs(gram.lambda - 1.0) <= kUnimodularTolerance;
  for (Eigen::Index k = 0; k < dim; ++k) {
    for (Eigen::Index m = 0; m < dim; ++m) {
      const Complex z = gram.z_nodes[static_cast<std::size_t>(k)];
      const Complex w = gram.w_nodes[static_cast<std::size_t>(m)];
      const Complex denom = 1.0 - std::conj(z) * w;
      Complex value;
      if (std::abs(denom) <= kDiagonalTolerance) {
        if (!same_family)
          throw ParameterError("cross_gram: nodes z_k and w_m coincide although lambda != 1");
        value = 1.0;
      } else {
        const double norm = std::sqrt(first.kernel_diagonal[static_cast<std::size_t>(k)] *
                                      second.kernel_diagonal[static_cast<std::size_t>(m)]);
        value = numerator / (denom * norm);
      }
      gram.closed_form(k, m) = value;
    }
  }
  gram.closed_form_gap = (gram.direct - gram.closed_form).cwiseAbs().maxCoeff();
  return gram;
}

double mub_deviation(const CrossGram& gram) {
  const double target = 1.0 / std::sqrt(static_cast<double>(gram.direct.rows()));
  return (gram.direct.cwiseAbs().array() - target).abs().maxCoeff();
}

BalanceReport compare_multisets(std::vector<double> first, std::vector<double> second,
                                double tolerance) {
  if (first.size() != second.size())
    throw ParameterError("compare_multisets: lists differ in length");
  BalanceReport report;
  std::sort(first.begin(), first.end(), std::greater<>());
  std::sort(second.begin(), second.end(), std::greater<>());
  for (std::size_t i = 0; i < first.size(); ++i)
    report.max_gap = std::max(report.max_gap, std::abs(first[i] - second[i]));
  report.first = std::move(first);
  report.second = std::move(second);
  report.tolerance = tolerance;
  report.verdict = report.max_gap <= tolerance;
  return report;
}

BalanceReport balanced_check(const VerblunskySequence& seq, Complex lambda, std::size_t n,
                             double tolerance) {
  require_real(seq, n + 1);
  lambda = require_nonreal_unimodular(lambda);
  const Complex lambda_bar = std::conj(lambda);

  const auto rotated = alexandrov(seq, lambda);
  const auto rotated_bar = alexandrov(seq, lambda_bar);
  const auto w_nodes = popuc_zeros(rotated, n + 1, lambda);
  const auto v_nodes = popuc_zeros(rotated_bar, n + 1, lambda_bar);

  double conjugacy_gap = 0.0;
  for (const Complex w : w_nodes) {
    double nearest = 2.0;
    for (const Complex v : v_nodes) nearest = std::min(nearest, std::abs(v - std::conj(w)));
    conjugacy_gap = std::max(conjugacy_gap, nearest);
  }

  const Eigen::VectorXcd state = normalized_vector(seq, n, 1.0);
  BasisFamily basis;
  basis.seq = rotated;
  basis.nodes = w_nodes;
  fill_columns(basis, n);
  BasisFamily mirrored;
  mirrored.seq = rotated_bar;
  for (const Complex w : w_nodes) mirrored.nodes.push_back(std::conj(w));
  fill_columns(mirrored, n);

  std::vector<double> first, second;
  for (std::size_t m = 0; m < w_nodes.size(); ++m) {
    const auto col = static_cast<Eigen::Index>(m);
    first.push_back(std::abs(state.dot(basis.vectors.col(col))));
    second.push_back(std::abs(state.dot(mirrored.vectors.col(col))));
  }
  auto report = compare_multisets(std::move(first), std::move(second), tolerance);
  report.node_conjugacy_gap = conjugacy_gap;
  report.verdict = report.verdict && conjugacy_gap <= 1e-10;
  return report;
}

InfiniteInner infinite_inner_at(const VerblunskySequence& seq, Complex lambda, Complex state,
                                Complex w, std::size_t N) {
  lambda = checked_unimodular(lambda, "lambda");
  state = checked_unimodular(state, "state point");
  w = checked_unimodular(w, "w");
  if (std::abs(lambda - 1.0) <= kUnimodularTolerance)
    throw ParameterError("infinite_inner: lambda = 1 makes the closed form vanish");
  const Complex denom = 1.0 - w * std::conj(state);
  if (std::abs(denom) <= kDiagonalTolerance)
    throw ParameterError("infinite_inner: w must differ from the state point");

  InfiniteInner out;
  OrthonormalWalker at_state(seq, state);
  OrthonormalWalker at_w(alexandrov(seq, lambda), w);
  Complex sum = std::conj(at_state.value()) * at_w.value();
  double sup = std::abs(at_w.value());
  const std::size_t tenth = N / 10;
  double state_at_tenth = std::abs(at_state.value());
  for (std::size_t j = 1; j <= N; ++j) {
    at_state.step();
    at_w.step();
    sum += std::conj(at_state.value()) * at_w.value();
    sup = std::max(sup, std::abs(at_w.value()));
    if (j == tenth) state_at_tenth = std::abs(at_state.value());
  }
  out.partial_sum = sum;
  out.closed_form = (1.0 - std::conj(lambda)) / denom;
  out.error = std::abs(out.partial_sum - out.closed_form);
  out.decay_ratio = std::abs(at_state.value()) / state_at_tenth;
  out.decay_ok = out.decay_ratio < kDecayFactor;
  out.sup_rotated = sup;
  out.remainder_bound = (std::abs(at_state.value()) * std::abs(at_w.value()) +
                         std::abs(at_state.star()) * std::abs(at_w.star())) /
                        std::abs(denom);
  return out;
}

InfiniteInner infinite_inner(const VerblunskySequence& seq, Complex lambda, Complex w,
                             std::size_t N) {
  return infinite_inner_at(seq, lambda, Complex(1.0, 0.0), w, N);
}

InfiniteBalance infinite_balance(const VerblunskySequence& seq, Complex lambda,
                                 std::span<const Complex> ws, std::size_t N, double tolerance,
                                 unsigned threads) {
  require_real(seq, N);
  lambda = require_nonreal_unimodular(lambda);
  for (const Complex w : ws) {
    checked_unimodular(w, "w");
    if (std::abs(1.0 - w) <= kDiagonalTolerance)
      throw ParameterError("infinite_balance: samples must avoid w = 1");
  }
  const Complex state{1.0, 0.0};
  require_decay(seq, state, N);
  return run_balance(seq, lambda, state, ws, N, tolerance, threads,
                     [](Complex w) { return std::conj(w); });
}

InfiniteBalance sieved_balance(double b, int p, Complex lambda, Complex u,
                               std::span<const Complex> ws, std::size_t N, double tolerance,
                               unsigned threads) {
  if (p < 1) throw ParameterError("sieve order must satisfy p >= 1");
  lambda = require_nonreal_unimodular(lambda);
  u = checked_unimodular(u, "u");
  const auto order = static_cast<std::size_t>(p);
  if (std::abs(unit_power(u, order) - 1.0) > 1e-12)
    throw ParameterError("sieved_balance: the state point must satisfy u^p = 1");
  for (const Complex w : ws) {
    checked_unimodular(w, "w");
    if (std::abs(unit_power(w, order) - 1.0) <= 1e-6)
      throw ParameterError("sieved_balance: samples must satisfy |w^p - 1| > 1e-6");
  }
  const auto seq = sieve(ranga_sequence(b), p);
  require_decay(seq, u, N);
  const bool unit_state = u == Complex(1.0, 0.0);
  return run_balance(seq, lambda, u, ws, N, tolerance, threads, [u, unit_state](Complex w) {
    return unit_state ? std::conj(w) : u * u * std::conj(w);
  });
}

GrowthReport l1_growth(const VerblunskySequence& seq, Complex z,
                       std::span<const std::size_t> checkpoints) {
  GrowthReport report;
  report.checkpoints.assign(checkpoints.begin(), checkpoints.end());
  std::sort(report.checkpoints.begin(), report.checkpoints.end());
  if (report.checkpoints.empty()) return report;

  Complex value{1.0, 0.0};
  Complex star{1.0, 0.0};
  double sum = 1.0;
  std::size_t next = 0;
  for (std::size_t j = 0; next < report.checkpoints.size(); ++j) {
    while (next < report.checkpoints.size() && report.checkpoints[next] == j) {
      report.partial_sums.push_back(sum);
      ++next;
    }
    const Complex a = seq.alpha(j);
    const Complex next_value = z * value - std::conj(a) * star;
    star = star - a * z * value;
    value = next_value;
    sum += std::abs(value);
  }

  report.monotone = true;
  for (std::size_t i = 1; i < report.partial_sums.size(); ++i)
    report.monotone = report.monotone && report.partial_sums[i] > report.partial_sums[i - 1];
  if (report.checkpoints.size() >= 2) {
    double mx = 0.0, my = 0.0;
    const auto count = static_cast<double>(report.checkpoints.size());
    for (std::size_t i = 0; i < report.checkpoints.size(); ++i) {
      mx += std::log(report.checkpoints[i] + 1.0);
      my += std::log(report.partial_sums[i]);
    }
    mx /= count;
    my /= count;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < report.checkpoints.size(); ++i) {
      const double dx = std::log(report.checkpoints[i] + 1.0) - mx;
      sxy += dx * (std::log(report.partial_sums[i]) - my);
      sxx += dx * dx;
    }
    report.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  }
  report.unbounded = report.monotone && report.slope > kDivergenceSlope;
  return report;
}

}  // namespace opuc
