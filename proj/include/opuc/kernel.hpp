#pragma once

// Christoffel-Darboux kernels, the mixed CD formula across an Alexandrov
// family, Christoffel functions and the n/K_n density diagnostic.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "opuc/coeffs.hpp"

namespace opuc {

/// Closed forms of the mixed kernel are only valid for |1 - z conj(w)| above
/// this band.
inline constexpr double kDiagonalTolerance = 1e-10;

enum class KernelForm { direct_sum, mixed_top, mixed_bottom };

struct KernelValue {
  Complex value;
  std::size_t degree = 0;
  KernelForm form = KernelForm::direct_sum;
};

/// K_n(z, w) = sum_{j<=n} phi_j(z) conj(phi_j(w)).
KernelValue cd_kernel(const VerblunskySequence& seq, std::size_t n, Complex z, Complex w);

/// sum_{j<=n} conj(phi_j(w)) phi_j^{(lambda)}(z), summed term by term.
Complex mixed_direct_sum(const VerblunskySequence& seq, Complex lambda, std::size_t n,
                         Complex z, Complex w);

/// The mixed kernel through one of its two closed forms:
///   top:    [1 - lb + lb conj(phi*_{n+1}(w)) phi^{(l)*}_{n+1}(z)
///                 - conj(phi_{n+1}(w)) phi^{(l)}_{n+1}(z)] / (1 - z conj(w))
///   bottom: [1 - lb - z conj(w) conj(phi_n(w)) phi^{(l)}_n(z)
///                 + lb conj(phi*_n(w)) phi^{(l)*}_n(z)] / (1 - z conj(w))
/// with lb = conj(lambda). Throws ParameterError when
/// |1 - z conj(w)| <= kDiagonalTolerance.
KernelValue mixed_cd(const VerblunskySequence& seq, Complex lambda, std::size_t n,
                     Complex z, Complex w, KernelForm form);

/// mixed_cd with the bottom form off the diagonal band and the direct sum
/// inside it.
KernelValue mixed_kernel(const VerblunskySequence& seq, Complex lambda, std::size_t n,
                         Complex z, Complex w);

/// lambda_n(zeta) = 1 / K_n(zeta, zeta).
double christoffel(const VerblunskySequence& seq, std::size_t n, Complex zeta);

/// Independent route to lambda_n(zeta): minimizes the moment quadratic form
/// p^* T p over coefficient vectors with sum_j p_j zeta^j = 1, T being the
/// Toeplitz matrix of CMV spectral moments, via a dense bordered solve.
/// Requires n <= 30.
double christoffel_oracle(const VerblunskySequence& seq, std::size_t n, Complex zeta);

struct MassEstimate {
  double partial_mass = 1.0;  // (sum_{j<=N} |phi_j(zeta)|^2)^{-1}
  double slope = 0.0;         // log-log growth rate of the partial sums
  bool diverging = false;     // slope > kDivergenceSlope
};

inline constexpr double kDivergenceSlope = 0.05;

/// Estimates mu({zeta}). The divergence flag fits the slope of
/// log(partial sum) against log(j+1) over the last decade j in [N/10, N].
MassEstimate mass_estimate(const VerblunskySequence& seq, Complex zeta, std::size_t N);

/// A density nu with respect to normalized arc length d(theta)/(2 pi).
struct DensityModel {
  std::function<double(double)> density;
  double tau = 1.0;

  double operator()(double theta) const { return density(theta); }

  static DensityModel lebesgue();
  /// nu(theta) = tau sin(theta/2)^{2b}, -1/2 < b < 0.
  static DensityModel ranga(double b);
};

/// Normalization tau making tau sin(theta/2)^{2b} a probability density for
/// d(theta)/(2 pi). Adaptive Simpson after the substitution
/// theta = pi u^{1/(1+2b)}, which removes the endpoint singularity.
double ranga_density_tau(double b);

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol);

struct DiagnosticPoint {
  double theta = 0.0;
  double ratio = 0.0;    // n / K_n(e^{i theta}, e^{i theta})
  double density = 0.0;  // nu(theta)
  double deviation = 0.0;
};

struct DensityDiagnostic {
  std::size_t degree = 0;
  std::vector<DiagnosticPoint> points;
  double max_deviation = 0.0;
};

DensityDiagnostic density_diagnostic(const VerblunskySequence& seq, const DensityModel& model,
                                     std::size_t n, std::span<const double> thetas,
                                     unsigned threads = 1);

}  // namespace opuc
