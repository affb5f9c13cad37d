#pragma once

// Orthonormal bases of C^{n+1} built from kernel-normalized polynomial
// vectors at paraorthogonal zeros, their cross-Gram matrices across an
// Alexandrov family, and balanced-state checks in finite dimension, in the
// infinite sequence space, and for sieved measures.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "opuc/coeffs.hpp"

namespace opuc {

/// Column k is eta(z_k) = (phi_0(z_k), ..., phi_n(z_k)) / sqrt(K_n(z_k, z_k)),
/// z_k the zeros of Phi_{n+1}(.; beta).
struct BasisFamily {
  std::size_t dimension = 0;  // n + 1
  VerblunskySequence seq;
  Complex beta{1.0, 0.0};
  std::vector<Complex> nodes;
  std::vector<double> kernel_diagonal;  // K_n(z_k, z_k)
  Eigen::MatrixXcd vectors;
};

BasisFamily basis_family(const VerblunskySequence& seq, std::size_t n, Complex beta);

/// G_{km} = eta(z_k) . eta^{(lambda)}(w_m), z from Phi_{n+1}(.; beta) and w
/// from the Alexandrov polynomial Phi^{(lambda)}_{n+1}(.; lambda beta).
struct CrossGram {
  Complex lambda{1.0, 0.0};
  Complex beta{1.0, 0.0};
  std::vector<Complex> z_nodes;
  std::vector<Complex> w_nodes;
  Eigen::MatrixXcd direct;       // summed inner products
  Eigen::MatrixXcd closed_form;  // (1 - conj(lambda)) / ((1 - conj(z_k) w_m) sqrt(K K^{(lambda)}))
  double closed_form_gap = 0.0;  // max |direct - closed_form|
};

/// lambda = 1 is allowed and gives the self-Gram matrix (closed form = I).
/// For lambda != 1 a node pair with |1 - conj(z_k) w_m| <= 1e-10 is
/// rejected.
CrossGram cross_gram(const VerblunskySequence& seq, Complex lambda, std::size_t n,
                     Complex beta);

/// max_{k,m} | |G_{km}| - 1/sqrt(n+1) |; zero iff the two bases are
/// mutually unbiased.
double mub_deviation(const CrossGram& gram);

struct BalanceReport {
  std::vector<double> first;   // sorted descending
  std::vector<double> second;  // sorted descending
  double max_gap = 0.0;
  double tolerance = 0.0;
  bool verdict = false;
  double closed_form_gap = 0.0;
  double node_conjugacy_gap = 0.0;
  bool hypothesis_ok = true;
  std::vector<std::string> warnings;
};

/// Sorts both lists descending and compares them componentwise.
BalanceReport compare_multisets(std::vector<double> first, std::vector<double> second,
                                double tolerance);

/// Finite-dimensional balanced state: for a real sequence and
/// lambda not in {-1, 1}, compares |eta(1) . eta^{(lambda)}(w_m)| with
/// |eta(1) . eta^{(conj lambda)}(conj w_m)|, w_m the zeros of
/// Phi^{(lambda)}_{n+1}(.; lambda). Also checks that the zeros for conj(lambda)
/// are the conjugates of the w_m (node_conjugacy_gap, must be <= 1e-10).
BalanceReport balanced_check(const VerblunskySequence& seq, Complex lambda, std::size_t n,
                             double tolerance);

struct InfiniteInner {
  Complex partial_sum;  // sum_{j<=N} conj(phi_j(state)) phi_j^{(lambda)}(w)
  Complex closed_form;  // (1 - conj(lambda)) / (1 - w conj(state))
  double error = 0.0;
  /// |phi_N(state)| < 0.5 |phi_{N/10}(state)|
  bool decay_ok = true;
  double decay_ratio = 0.0;
  /// max_{j<=N} |phi_j^{(lambda)}(w)|
  double sup_rotated = 0.0;
  /// Mixed CD remainder bound
  /// (|phi_N(s)| |phi^{(l)}_N(w)| + |phi*_N(s)| |phi^{(l)*}_N(w)|) / |1 - w conj(s)|.
  double remainder_bound = 0.0;
};

/// Truncated inner product phi(1) . phi^{(lambda)}(w). lambda = 1 and w = 1
/// are rejected; a failed decay check is reported, not thrown.
InfiniteInner infinite_inner(const VerblunskySequence& seq, Complex lambda, Complex w,
                             std::size_t N);

/// Same with a general unimodular state point.
InfiniteInner infinite_inner_at(const VerblunskySequence& seq, Complex lambda, Complex state,
                                Complex w, std::size_t N);

struct InfiniteSample {
  Complex w;
  Complex paired_w;
  InfiniteInner inner;   // lambda at w
  InfiniteInner paired;  // conj(lambda) at paired_w
};

struct InfiniteBalance {
  BalanceReport report;
  std::vector<InfiniteSample> samples;
};

/// Infinite-dimensional balanced state phi(1) for a real sequence: pairs
/// (lambda, w) with (conj lambda, conj w) for every sample w. Compares the
/// truncated sums at N and the exact closed-form moduli |1 - conj(lambda)| / |1 - w|.
/// Throws ParameterError when the decay hypothesis fails at the state.
InfiniteBalance infinite_balance(const VerblunskySequence& seq, Complex lambda,
                                 std::span<const Complex> ws, std::size_t N, double tolerance,
                                 unsigned threads = 1);

/// The p-sieved Ranga measure with state phi(u), u^p = 1. Samples need
/// |w^p - 1| > 1e-6. Each w is paired with u^2 conj(w), which reduces to
/// conj(w) for u = 1 and has the same closed-form modulus.
InfiniteBalance sieved_balance(double b, int p, Complex lambda, Complex u,
                               std::span<const Complex> ws, std::size_t N, double tolerance,
                               unsigned threads = 1);

struct GrowthReport {
  std::vector<std::size_t> checkpoints;
  std::vector<double> partial_sums;  // sum_{j<=N} |Phi_j(z)| at each checkpoint
  double slope = 0.0;                // log-log fit over checkpoints
  bool monotone = false;
  bool unbounded = false;            // monotone and slope > kDivergenceSlope
};

/// Growth of the l^1 partial sums of the monic values Phi_j(z).
GrowthReport l1_growth(const VerblunskySequence& seq, Complex z,
                       std::span<const std::size_t> checkpoints);

}  // namespace opuc
