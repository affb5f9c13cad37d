#include "opuc/cmv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include <Eigen/Dense>

#include "opuc/errors.hpp"
#include "opuc/szego.hpp"

namespace opuc {

namespace {

Complex theta_entry(Complex alpha, double rho, std::size_t row, std::size_t col) {
  if (row == 0) return col == 0 ? std::conj(alpha) : Complex(rho, 0.0);
  return col == 0 ? Complex(rho, 0.0) : -alpha;
}

}  // namespace

Eigen::Matrix2cd theta_block(Complex alpha) {
  if (!(std::abs(alpha) < 1.0))
    throw ParameterError("theta_block requires |alpha| < 1");
  const double rho = std::sqrt(1.0 - std::norm(alpha));
  Eigen::Matrix2cd block;
  block << std::conj(alpha), rho, rho, -alpha;
  return block;
}

CmvOperator::CmvOperator(std::size_t size, VerblunskySequence source,
                         std::optional<Complex> beta)
    : size_(size), source_(std::move(source)), beta_(beta), band_(size) {
  for (auto& row : band_) row.fill(Complex{0.0, 0.0});
}

void CmvOperator::assemble(const std::vector<Complex>& alphas, const std::vector<double>& rhos) {
  // C_{ik} = sum_l L_{il} M_{lk}. Row i of L lives in the pair {2m, 2m+1},
  // m = i/2, with block Theta_{2m}. Row l >= 1 of M lives in the pair
  // {2m'-1, 2m'}, m' = (l+1)/2, with block Theta_{2m'-1}; M_{00} = 1.
  for (std::size_t i = 0; i < size_; ++i) {
    const std::size_t l_first = 2 * (i / 2);
    for (std::size_t l = l_first; l <= l_first + 1; ++l) {
      const Complex left = theta_entry(alphas[l_first], rhos[l_first], i - l_first, l - l_first);
      if (left == Complex{0.0, 0.0}) continue;
      if (l == 0) {
        band_[i][2 - i] += left;
        continue;
      }
      const std::size_t k_first = 2 * ((l + 1) / 2) - 1;
      for (std::size_t k = k_first; k <= k_first + 1 && k < size_; ++k) {
        const Complex right = theta_entry(alphas[k_first], rhos[k_first], l - k_first, k - k_first);
        band_[i][k + 2 - i] += left * right;
      }
    }
  }
}

Complex CmvOperator::operator()(std::size_t row, std::size_t col) const {
  if (row >= size_ || col >= size_) return {0.0, 0.0};
  const auto offset = static_cast<long>(col) - static_cast<long>(row);
  if (std::labs(offset) > kHalfBandwidth) return {0.0, 0.0};
  return band_[row][static_cast<std::size_t>(offset + kHalfBandwidth)];
}

Eigen::MatrixXcd CmvOperator::dense() const {
  const auto n = static_cast<Eigen::Index>(size_);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t i = 0; i < size_; ++i) {
    const std::size_t lo = i >= 2 ? i - 2 : 0;
    const std::size_t hi = std::min(size_ - 1, i + 2);
    for (std::size_t k = lo; k <= hi; ++k)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = (*this)(i, k);
  }
  return out;
}

std::vector<Complex> CmvOperator::apply(std::span<const Complex> v) const {
  std::vector<Complex> out(size_, Complex{0.0, 0.0});
  for (std::size_t i = 0; i < size_; ++i) {
    const std::size_t lo = i >= 2 ? i - 2 : 0;
    const std::size_t hi = std::min(size_ - 1, i + 2);
    for (std::size_t k = lo; k <= hi; ++k) out[i] += (*this)(i, k) * v[k];
  }
  return out;
}

std::vector<Complex> CmvOperator::apply_adjoint(std::span<const Complex> v) const {
  std::vector<Complex> out(size_, Complex{0.0, 0.0});
  for (std::size_t i = 0; i < size_; ++i) {
    const std::size_t lo = i >= 2 ? i - 2 : 0;
    const std::size_t hi = std::min(size_ - 1, i + 2);
    for (std::size_t k = lo; k <= hi; ++k) out[i] += std::conj((*this)(k, i)) * v[k];
  }
  return out;
}

CmvOperator cmv_truncate(const VerblunskySequence& seq, std::size_t N) {
  if (N < 2) throw ParameterError("cmv_truncate requires N >= 2");
  std::vector<Complex> alphas(N + 2);
  std::vector<double> rhos(N + 2);
  for (std::size_t j = 0; j < alphas.size(); ++j) {
    alphas[j] = seq.alpha(j);
    rhos[j] = seq.rho(j);
  }
  CmvOperator op(N, seq, std::nullopt);
  op.assemble(alphas, rhos);
  return op;
}

CmvOperator cmv_unitary_truncate(const VerblunskySequence& seq, std::size_t n, Complex beta) {
  beta = checked_unimodular(beta, "beta");
  if (n < 1) throw ParameterError("cmv_unitary_truncate requires n >= 1");
  std::vector<Complex> alphas(n + 2);
  std::vector<double> rhos(n + 2);
  for (std::size_t j = 0; j < alphas.size(); ++j) {
    alphas[j] = seq.alpha(j);
    rhos[j] = seq.rho(j);
  }
  alphas[n - 1] = beta;
  rhos[n - 1] = 0.0;
  CmvOperator op(n, seq, beta);
  op.assemble(alphas, rhos);
  return op;
}

double charpoly_check(const CmvOperator& op, const VerblunskySequence& seq, std::size_t n,
                      std::span<const Complex> samples) {
  if (n < 1 || n > op.size()) throw ParameterError("charpoly_check requires 1 <= n <= op.size()");
  const auto size = static_cast<Eigen::Index>(n);
  const Eigen::MatrixXcd block = op.dense().topLeftCorner(size, size);
  const bool paraorthogonal = op.beta().has_value() && n == op.size();

  double worst = 0.0;
  for (const Complex z : samples) {
    const Eigen::MatrixXcd shifted =
        z * Eigen::MatrixXcd::Identity(size, size) - block;
    const Complex det = shifted.partialPivLu().determinant();
    Complex expected;
    if (paraorthogonal) {
      const auto prev = eval_monic(seq, n - 1, z);
      expected = z * prev.unscaled_value() - std::conj(*op.beta()) * prev.unscaled_star();
    } else {
      expected = eval_monic(seq, n, z).unscaled_value();
    }
    worst = std::max(worst, std::abs(det - expected) / std::max(1.0, std::abs(expected)));
  }
  return worst;
}

std::size_t cmv_moment_min_size(long j) {
  return 2 * static_cast<std::size_t>(std::labs(j)) + 4;
}

Complex cmv_moment(const VerblunskySequence& seq, long j, std::size_t N) {
  const std::size_t required = cmv_moment_min_size(j);
  if (N < required)
    throw ParameterError("cmv_moment: truncation size " + std::to_string(N) +
                         " too small for moment " + std::to_string(j) + ", need N >= " +
                         std::to_string(required));
  const auto op = cmv_truncate(seq, N);
  std::vector<Complex> v(N, Complex{0.0, 0.0});
  v[0] = 1.0;
  for (long step = 0; step < std::labs(j); ++step) v = j > 0 ? op.apply(v) : op.apply_adjoint(v);
  return v[0];
}

Complex cmv_moment(const VerblunskySequence& seq, long j) {
  return cmv_moment(seq, j, cmv_moment_min_size(j));
}

double commutator_interior(const VerblunskySequence& a, const VerblunskySequence& b,
                           std::size_t N) {
  if (N < 16) throw ParameterError("commutator_interior requires N >= 16");
  const Eigen::MatrixXcd ca = cmv_truncate(a, N).dense();
  const Eigen::MatrixXcd cb = cmv_truncate(b, N).dense();
  const Eigen::MatrixXcd commutator = ca * cb - cb * ca;
  const auto lo = static_cast<Eigen::Index>(4);
  const auto count = static_cast<Eigen::Index>(N - 8);
  return commutator.block(lo, lo, count, count).cwiseAbs().maxCoeff();
}

}  // namespace opuc
