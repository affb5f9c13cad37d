#pragma once

// Verblunsky coefficient sequences. A sequence {alpha_n} in the open unit
// disk is in bijection with a nontrivial probability measure on the unit
// circle, so every measure in this library is represented by its sequence.
//
// Sequences are lazy: alpha(n) evaluates the defining rule on demand, which
// keeps index ranges of 10^6 and beyond at O(1) memory. Transforms
// (Alexandrov, rotation, sieving) wrap a shared, immutable base sequence.

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace opuc {

using Complex = std::complex<double>;

/// Tolerance for accepting a parameter as unimodular.
inline constexpr double kUnimodularTolerance = 1e-12;

enum class SequenceKind {
  zero,
  constant,
  explicit_list,
  ranga,
  alexandrov,
  rotate,
  sieve,
};

std::string_view to_string(SequenceKind kind);
std::optional<SequenceKind> sequence_kind_from_string(std::string_view name);

class VerblunskySequence {
 public:
  /// The free case, alpha_n = 0 (normalized Lebesgue measure).
  VerblunskySequence();

  Complex alpha(std::size_t n) const;
  Complex operator[](std::size_t n) const { return alpha(n); }

  /// rho_n = sqrt(1 - |alpha_n|^2), in (0, 1].
  double rho(std::size_t n) const;

  SequenceKind kind() const;
  /// True for Alexandrov, rotation and sieve wrappers.
  bool is_transformed() const;

  /// Defining scalars: the constant, the list, b, lambda, sigma or p
  /// (stored as a real complex number).
  const std::vector<Complex>& params() const;

  /// Base sequence of a transform; null for primitive kinds.
  const VerblunskySequence* base() const;

  /// First index n <= last with a non-real alpha_n, if any.
  std::optional<std::size_t> first_nonreal_index(std::size_t last) const;

  friend VerblunskySequence make_sequence(SequenceKind kind,
                                          std::span<const Complex> params);
  friend VerblunskySequence alexandrov(const VerblunskySequence& seq,
                                       Complex lambda);
  friend VerblunskySequence rotate(const VerblunskySequence& seq,
                                   Complex sigma);
  friend VerblunskySequence sieve(const VerblunskySequence& seq, int p);

 private:
  struct Node;
  static const std::shared_ptr<const Node>& zero_node();
  explicit VerblunskySequence(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

/// Builds a primitive sequence. Parameters per kind:
///   zero: none; constant: {a} with |a| < 1; explicit_list: the entries,
///   each |a| < 1 (indices past the list are 0); ranga: {b} with
///   -1/2 < b < 0, giving alpha_n = -b/(b+n+1).
/// Throws ParameterError naming the violated bound.
VerblunskySequence make_sequence(SequenceKind kind,
                                 std::span<const Complex> params);

VerblunskySequence zero_sequence();
VerblunskySequence constant_sequence(Complex a);
VerblunskySequence list_sequence(std::vector<Complex> entries);
VerblunskySequence ranga_sequence(double b);

/// alpha_n -> lambda * alpha_n, |lambda| = 1.
VerblunskySequence alexandrov(const VerblunskySequence& seq, Complex lambda);

/// alpha_n -> conj(sigma)^(n+1) * alpha_n, |sigma| = 1.
VerblunskySequence rotate(const VerblunskySequence& seq, Complex sigma);

/// p-sieve: index kp+m maps to alpha_k when m = p-1 and to 0 otherwise.
/// p = 1 returns the input unchanged.
VerblunskySequence sieve(const VerblunskySequence& seq, int p);

/// Checks |z| = 1 to kUnimodularTolerance and returns z / |z|.
/// Throws ParameterError mentioning `name` otherwise.
Complex checked_unimodular(Complex z, std::string_view name);

/// u^k by binary powering, renormalized to unit modulus.
Complex unit_power(Complex u, std::size_t k);

}  // namespace opuc
