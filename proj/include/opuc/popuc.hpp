#pragma once

// Paraorthogonal polynomials Phi_n(z; beta) = z Phi_{n-1}(z) - conj(beta) Phi_{n-1}^*(z),
// their unit-circle zeros, and the quadrature measures carried by those zeros.

#include <cstddef>
#include <span>
#include <vector>

#include "opuc/coeffs.hpp"

namespace opuc {

Complex popuc_eval(const VerblunskySequence& seq, std::size_t n, Complex beta, Complex z);

/// Zeros of Phi_n(.; beta) as angles in [0, 2 pi), increasing.
///
/// Phi_n(e^{it}; beta) = 0 exactly when the Blaschke product
/// B(z) = z Phi_{n-1}(z) / Phi_{n-1}^*(z) equals conj(beta). The boundary
/// phase of B increases strictly by 2 pi n over a turn. It is sampled on 8n
/// angles, and any sample step that is not in (0, pi/2] is bisected locally
/// until it is; steps in that range summing to 2 pi n bracket each of the n
/// crossings exactly once. Brackets are bisected to width 1e-13 and polished
/// with one Newton step on the phase. If the phase cannot be resolved the
/// base grid is doubled (up to three times) before ZeroFinderError is thrown.
std::vector<double> popuc_zero_angles(const VerblunskySequence& seq, std::size_t n,
                                      Complex beta);

std::vector<Complex> popuc_zeros(const VerblunskySequence& seq, std::size_t n, Complex beta);

struct QuadratureMeasure {
  std::vector<double> angles;  // increasing in [0, 2 pi)
  std::vector<Complex> nodes;
  std::vector<double> weights;  // 1 / K_{n-1}(z_j, z_j)
  Complex beta{1.0, 0.0};
  std::size_t degree = 0;
};

QuadratureMeasure quadrature(const VerblunskySequence& seq, std::size_t n, Complex beta);

/// sum_k w_k z_k^j.
Complex quadrature_moment(const QuadratureMeasure& qm, long j);

/// True iff each cyclic gap between consecutive members of `a` contains
/// exactly one member of `b`. Both lists are sorted by angle.
/// Throws ParameterError if the lists differ in length or share a node.
bool interlacing_check(std::span<const Complex> a, std::span<const Complex> b);

}  // namespace opuc
