#pragma once

// CMV matrices C = L M with L = Theta_0 (+) Theta_2 (+) ... and
// M = 1 (+) Theta_1 (+) Theta_3 (+) ..., where
//   Theta_n = [[conj(alpha_n), rho_n], [rho_n, -alpha_n]].
// C is five-diagonal; truncations keep only the band.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "opuc/coeffs.hpp"

namespace opuc {

Eigen::Matrix2cd theta_block(Complex alpha);

class CmvOperator {
 public:
  static constexpr int kHalfBandwidth = 2;

  std::size_t size() const { return size_; }
  const VerblunskySequence& source() const { return source_; }
  /// Set for unitary truncations: the unimodular value replacing alpha_{n-1}.
  const std::optional<Complex>& beta() const { return beta_; }

  /// Entry (row, col); zero outside the band.
  Complex operator()(std::size_t row, std::size_t col) const;

  Eigen::MatrixXcd dense() const;

  std::vector<Complex> apply(std::span<const Complex> v) const;
  std::vector<Complex> apply_adjoint(std::span<const Complex> v) const;

  friend CmvOperator cmv_truncate(const VerblunskySequence& seq, std::size_t N);
  friend CmvOperator cmv_unitary_truncate(const VerblunskySequence& seq, std::size_t n,
                                          Complex beta);

 private:
  CmvOperator(std::size_t size, VerblunskySequence source, std::optional<Complex> beta);
  void assemble(const std::vector<Complex>& alphas, const std::vector<double>& rhos);

  std::size_t size_;
  VerblunskySequence source_;
  std::optional<Complex> beta_;
  // band_[row][col - row + 2]
  std::vector<std::array<Complex, 5>> band_;
};

/// Principal N x N block of the infinite CMV matrix of seq.
CmvOperator cmv_truncate(const VerblunskySequence& seq, std::size_t N);

/// Principal n x n block with alpha_{n-1} replaced by the unimodular beta;
/// exactly unitary, with characteristic polynomial Phi_n(z; beta).
CmvOperator cmv_unitary_truncate(const VerblunskySequence& seq, std::size_t n, Complex beta);

/// Max over samples of |det(z I - C_n) - P(z)| / max(1, |P(z)|), where C_n is
/// the leading n x n block of op and P is Phi_n(z), or Phi_n(z; beta) when op
/// is a unitary truncation of size n.
double charpoly_check(const CmvOperator& op, const VerblunskySequence& seq, std::size_t n,
                      std::span<const Complex> samples);

/// Minimum truncation size for an exact j-th moment.
std::size_t cmv_moment_min_size(long j);

/// <e_1, C^j e_1>, the j-th moment int z^j d mu, from banded powers of an
/// N x N truncation (negative j through the adjoint). Throws ParameterError
/// if N < cmv_moment_min_size(j).
Complex cmv_moment(const VerblunskySequence& seq, long j, std::size_t N);
Complex cmv_moment(const VerblunskySequence& seq, long j);

/// Max modulus of [C_A, C_B] over rows and columns 4 .. N-5 of the N x N
/// truncations. Requires N >= 16.
double commutator_interior(const VerblunskySequence& a, const VerblunskySequence& b,
                           std::size_t N);

}  // namespace opuc
