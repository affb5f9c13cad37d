#pragma once

// Pointwise evaluation of orthonormal, monic and reversed polynomials via
// the Szego recursion
//
//   Phi_{n+1}(z)  = z Phi_n(z) - conj(alpha_n) Phi_n^*(z)
//   Phi_{n+1}^*(z) = Phi_n^*(z) - alpha_n z Phi_n(z)
//
// and its orthonormal form (divide each step by rho_n). Values are never
// expanded into coefficient vectors.

#include <array>
#include <cstddef>

#include "opuc/coeffs.hpp"

namespace opuc {

/// (p_n(z), p_n^*(z)) for either the orthonormal or the monic family.
/// The true values are value * 2^scale_exponent (likewise for the star);
/// scale_exponent is 0 unless the recursion had to rescale to stay finite.
struct PolyPair {
  Complex value{1.0, 0.0};
  Complex star_value{1.0, 0.0};
  std::size_t degree = 0;
  int scale_exponent = 0;

  Complex unscaled_value() const;
  Complex unscaled_star() const;
};

/// M_n(z) = (1/rho_n) [[1, -alpha_n z], [-conj(alpha_n), z]].
/// Acting on (conj(lambda) phi_n^{(lambda)*}(z), phi_n^{(lambda)}(z)) it
/// produces the same vector at degree n+1, for every unimodular lambda.
struct TransferMatrix {
  std::array<Complex, 4> entries;  // row-major

  static TransferMatrix at(Complex alpha, Complex z);
  Complex det() const;
  std::array<Complex, 2> apply(const std::array<Complex, 2>& v) const;
};

PolyPair eval_pair(const VerblunskySequence& seq, std::size_t n, Complex z);
PolyPair eval_monic(const VerblunskySequence& seq, std::size_t n, Complex z);

/// prod_{j<n} rho_j, the ratio Phi_n / phi_n.
double leading_norm(const VerblunskySequence& seq, std::size_t n);

/// Phi_n(1) for alpha_n = -b/(b+n+1), as the running product
/// prod_{j=1}^n (1 + b/(b+j)) = (2b+1)_n / (b+1)_n.
double ranga_phi1(double b, std::size_t n);

/// Streams (phi_j(z), phi_j^*(z)) for j = 0, 1, 2, ... without rescaling.
/// Used by kernel sums, which need every intermediate degree.
class OrthonormalWalker {
 public:
  OrthonormalWalker(const VerblunskySequence& seq, Complex z);

  std::size_t degree() const { return degree_; }
  Complex value() const { return value_; }
  Complex star() const { return star_; }

  /// Advances to degree()+1. Throws OverflowError on a non-finite result.
  void step();

 private:
  VerblunskySequence seq_;
  Complex z_;
  Complex value_{1.0, 0.0};
  Complex star_{1.0, 0.0};
  std::size_t degree_ = 0;
};

}  // namespace opuc
