#include "opuc/szego.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "opuc/errors.hpp"

namespace opuc {

namespace {

// Rescale once either component exceeds 2^kRescaleThreshold.
constexpr int kRescaleThreshold = 512;
constexpr int kMaxScaleExponent = 1 << 20;

template <bool Orthonormal>
PolyPair run_recursion(const VerblunskySequence& seq, std::size_t n, Complex z) {
  PolyPair pair;
  pair.degree = n;
  Complex p{1.0, 0.0};
  Complex s{1.0, 0.0};
  int exponent = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const Complex a = seq.alpha(j);
    Complex next_p = z * p - std::conj(a) * s;
    Complex next_s = s - a * z * p;
    if constexpr (Orthonormal) {
      const double r = std::sqrt(1.0 - std::norm(a));
      next_p /= r;
      next_s /= r;
    }
    p = next_p;
    s = next_s;
    const double size = std::max(std::abs(p), std::abs(s));
    if (!std::isfinite(size)) throw OverflowError(j + 1);
    if (size > std::ldexp(1.0, kRescaleThreshold)) {
      p = std::ldexp(1.0, -kRescaleThreshold) * p;
      s = std::ldexp(1.0, -kRescaleThreshold) * s;
      exponent += kRescaleThreshold;
      if (exponent > kMaxScaleExponent) throw OverflowError(j + 1);
    }
  }
  pair.value = p;
  pair.star_value = s;
  pair.scale_exponent = exponent;
  return pair;
}

Complex unscale(Complex v, int exponent) {
  if (exponent == 0) return v;
  return {std::ldexp(v.real(), exponent), std::ldexp(v.imag(), exponent)};
}

}  // namespace

Complex PolyPair::unscaled_value() const { return unscale(value, scale_exponent); }
Complex PolyPair::unscaled_star() const { return unscale(star_value, scale_exponent); }

TransferMatrix TransferMatrix::at(Complex alpha, Complex z) {
  const double r = std::sqrt(1.0 - std::norm(alpha));
  return {{Complex(1.0 / r, 0.0), -alpha * z / r, -std::conj(alpha) / r, z / r}};
}

Complex TransferMatrix::det() const {
  return entries[0] * entries[3] - entries[1] * entries[2];
}

std::array<Complex, 2> TransferMatrix::apply(const std::array<Complex, 2>& v) const {
  return {entries[0] * v[0] + entries[1] * v[1], entries[2] * v[0] + entries[3] * v[1]};
}

PolyPair eval_pair(const VerblunskySequence& seq, std::size_t n, Complex z) {
  return run_recursion<true>(seq, n, z);
}

PolyPair eval_monic(const VerblunskySequence& seq, std::size_t n, Complex z) {
  return run_recursion<false>(seq, n, z);
}

double leading_norm(const VerblunskySequence& seq, std::size_t n) {
  double product = 1.0;
  for (std::size_t j = 0; j < n; ++j) product *= seq.rho(j);
  return product;
}

double ranga_phi1(double b, std::size_t n) {
  if (!(b > -0.5 && b < 0.0)) {
    std::ostringstream os;
    os << "ranga parameter must satisfy -1/2 < b < 0, got b = " << b;
    throw ParameterError(os.str());
  }
  double product = 1.0;
  for (std::size_t j = 1; j <= n; ++j) product *= 1.0 + b / (b + static_cast<double>(j));
  return product;
}

OrthonormalWalker::OrthonormalWalker(const VerblunskySequence& seq, Complex z)
    : seq_(seq), z_(z) {}

void OrthonormalWalker::step() {
  const Complex a = seq_.alpha(degree_);
  const double r = std::sqrt(1.0 - std::norm(a));
  const Complex next_value = (z_ * value_ - std::conj(a) * star_) / r;
  const Complex next_star = (star_ - a * z_ * value_) / r;
  ++degree_;
  if (!std::isfinite(std::abs(next_value)) || !std::isfinite(std::abs(next_star)))
    throw OverflowError(degree_);
  value_ = next_value;
  star_ = next_star;
}

}  // namespace opuc
