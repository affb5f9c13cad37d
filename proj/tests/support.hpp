#pragma once

// Seeded generators and independent reference computations shared by the
// unit tests and the acceptance suite.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "opuc/coeffs.hpp"

namespace opuc::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }
  std::size_t index(std::size_t lo, std::size_t hi) {  // inclusive
    return lo + static_cast<std::size_t>(gen_() % (hi - lo + 1));
  }
  Complex unimodular() { return std::polar(1.0, uniform(-std::numbers::pi, std::numbers::pi)); }
  Complex disk(double radius) {
    return std::polar(radius * std::sqrt(uniform(0.0, 1.0)),
                      uniform(-std::numbers::pi, std::numbers::pi));
  }
  // Unimodular and at least `gap` away from 1 and -1 in angle.
  Complex nonreal_unimodular(double gap = 0.05) {
    const double t = uniform(gap, std::numbers::pi - gap);
    return std::polar(1.0, uniform(0.0, 1.0) < 0.5 ? t : -t);
  }

 private:
  std::mt19937_64 gen_;
};

inline std::vector<Complex> random_entries(Rng& rng, std::size_t count, double radius,
                                           bool real) {
  std::vector<Complex> out;
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(real ? Complex{rng.uniform(-radius, radius), 0.0} : rng.disk(radius));
  return out;
}

inline VerblunskySequence random_sequence(Rng& rng, std::size_t count, double radius = 0.8,
                                          bool real = false) {
  return list_sequence(random_entries(rng, count, radius, real));
}

// Monic coefficient vectors c[0..n] of Phi_n, by expanding the recursion in
// the monomial basis.
inline std::vector<Complex> monic_coefficients(const VerblunskySequence& seq, std::size_t n) {
  std::vector<Complex> phi{1.0};
  std::vector<Complex> star{1.0};
  for (std::size_t k = 0; k < n; ++k) {
    const Complex a = seq.alpha(k);
    std::vector<Complex> next(k + 2, 0.0);
    std::vector<Complex> next_star(k + 2, 0.0);
    for (std::size_t m = 0; m <= k; ++m) {
      next[m + 1] += phi[m];
      next[m] -= std::conj(a) * star[m];
      next_star[m] += star[m];
      next_star[m + 1] -= a * phi[m];
    }
    phi = std::move(next);
    star = std::move(next_star);
  }
  return phi;
}

inline Complex horner(const std::vector<Complex>& coeffs, Complex z) {
  Complex value{0.0, 0.0};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) value = value * z + *it;
  return value;
}

// Reversed polynomial z^n conj(P(1/conj z)) from coefficients.
inline Complex horner_star(const std::vector<Complex>& coeffs, Complex z) {
  Complex value{0.0, 0.0};
  for (const auto& c : coeffs) value = value * z + std::conj(c);
  return value;
}

inline double norm_product(const VerblunskySequence& seq, std::size_t n) {
  double r = 1.0;
  for (std::size_t k = 0; k < n; ++k) r *= std::sqrt(1.0 - std::norm(seq.alpha(k)));
  return r;
}

// Orthonormal phi_n(z) from the expanded coefficients.
inline Complex reference_phi(const VerblunskySequence& seq, std::size_t n, Complex z) {
  return horner(monic_coefficients(seq, n), z) / norm_product(seq, n);
}

// Moments c_j = int z^j dmu for 0 <= j <= count from orthogonality of Phi_j
// to the constant 1: sum_m a_{j,m} c_m = 0 for j >= 1.
inline std::vector<Complex> reference_moments(const VerblunskySequence& seq, std::size_t count) {
  std::vector<Complex> c{1.0};
  for (std::size_t j = 1; j <= count; ++j) {
    const auto a = monic_coefficients(seq, j);
    Complex sum{0.0, 0.0};
    for (std::size_t m = 0; m < j; ++m) sum += a[m] * c[m];
    c.push_back(-sum);
  }
  return c;
}

inline Complex reference_moment(const std::vector<Complex>& c, long j) {
  return j >= 0 ? c[static_cast<std::size_t>(j)] : std::conj(c[static_cast<std::size_t>(-j)]);
}

inline double relative_gap(Complex a, Complex b) {
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

}  // namespace opuc::testing
