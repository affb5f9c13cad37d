#include "opuc/coeffs.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "opuc/errors.hpp"

namespace opuc {

struct VerblunskySequence::Node {
  SequenceKind kind = SequenceKind::zero;
  std::vector<Complex> params;
  std::optional<VerblunskySequence> base;
  // Cached scalars for the hot path.
  Complex scalar{0.0, 0.0};
  double b = 0.0;
  std::size_t p = 1;

  Complex alpha(std::size_t n) const {
    switch (kind) {
      case SequenceKind::zero:
        return {0.0, 0.0};
      case SequenceKind::constant:
        return scalar;
      case SequenceKind::explicit_list:
        return n < params.size() ? params[n] : Complex{0.0, 0.0};
      case SequenceKind::ranga:
        return {-b / (b + static_cast<double>(n) + 1.0), 0.0};
      case SequenceKind::alexandrov:
        return scalar * base->node_->alpha(n);
      case SequenceKind::rotate: {
        const Complex a = base->node_->alpha(n);
        if (a == Complex{0.0, 0.0}) return a;
        return unit_power(std::conj(scalar), n + 1) * a;
      }
      case SequenceKind::sieve:
        if (n % p == p - 1) return base->node_->alpha(n / p);
        return {0.0, 0.0};
    }
    return {0.0, 0.0};
  }
};

const std::shared_ptr<const VerblunskySequence::Node>& VerblunskySequence::zero_node() {
  static const auto node = std::make_shared<const Node>();
  return node;
}

namespace {

void require_in_disk(Complex a, std::string_view what) {
  if (!(std::abs(a) < 1.0)) {
    std::ostringstream os;
    os << what << " must satisfy |alpha| < 1, got |alpha| = " << std::abs(a);
    throw ParameterError(os.str());
  }
}

}  // namespace

std::string_view to_string(SequenceKind kind) {
  switch (kind) {
    case SequenceKind::zero: return "zero";
    case SequenceKind::constant: return "constant";
    case SequenceKind::explicit_list: return "explicit-list";
    case SequenceKind::ranga: return "ranga";
    case SequenceKind::alexandrov: return "alexandrov";
    case SequenceKind::rotate: return "rotate";
    case SequenceKind::sieve: return "sieve";
  }
  return "unknown";
}

std::optional<SequenceKind> sequence_kind_from_string(std::string_view name) {
  for (auto kind : {SequenceKind::zero, SequenceKind::constant,
                    SequenceKind::explicit_list, SequenceKind::ranga,
                    SequenceKind::alexandrov, SequenceKind::rotate,
                    SequenceKind::sieve}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

VerblunskySequence::VerblunskySequence() : node_(zero_node()) {}

VerblunskySequence::VerblunskySequence(std::shared_ptr<const Node> node)
    : node_(std::move(node)) {}

Complex VerblunskySequence::alpha(std::size_t n) const {
  return node_->alpha(n);
}

double VerblunskySequence::rho(std::size_t n) const {
  return std::sqrt(1.0 - std::norm(alpha(n)));
}

SequenceKind VerblunskySequence::kind() const { return node_->kind; }

bool VerblunskySequence::is_transformed() const {
  return node_->base.has_value();
}

const std::vector<Complex>& VerblunskySequence::params() const {
  return node_->params;
}

const VerblunskySequence* VerblunskySequence::base() const {
  return node_->base ? &*node_->base : nullptr;
}

std::optional<std::size_t> VerblunskySequence::first_nonreal_index(
    std::size_t last) const {
  for (std::size_t n = 0; n <= last; ++n) {
    if (alpha(n).imag() != 0.0) return n;
  }
  return std::nullopt;
}

VerblunskySequence make_sequence(SequenceKind kind,
                                 std::span<const Complex> params) {
  auto node = std::make_shared<VerblunskySequence::Node>();
  node->kind = kind;
  node->params.assign(params.begin(), params.end());
  switch (kind) {
    case SequenceKind::zero:
      if (!params.empty()) throw ParameterError("zero sequence takes no parameters");
      return VerblunskySequence(VerblunskySequence::zero_node());
    case SequenceKind::constant:
      if (params.size() != 1)
        throw ParameterError("constant sequence takes exactly one parameter");
      require_in_disk(params[0], "constant coefficient");
      node->scalar = params[0];
      break;
    case SequenceKind::explicit_list:
      for (std::size_t i = 0; i < params.size(); ++i)
        require_in_disk(params[i], "list entry " + std::to_string(i));
      break;
    case SequenceKind::ranga: {
      if (params.size() != 1 || params[0].imag() != 0.0)
        throw ParameterError("ranga sequence takes one real parameter b");
      const double b = params[0].real();
      if (!(b > -0.5 && b < 0.0)) {
        std::ostringstream os;
        os << "ranga parameter must satisfy -1/2 < b < 0, got b = " << b;
        throw ParameterError(os.str());
      }
      node->b = b;
      break;
    }
    case SequenceKind::alexandrov:
    case SequenceKind::rotate:
    case SequenceKind::sieve:
      throw ParameterError("transform kinds need a base sequence");
  }
  return VerblunskySequence(std::move(node));
}

VerblunskySequence zero_sequence() { return VerblunskySequence(); }

VerblunskySequence constant_sequence(Complex a) {
  return make_sequence(SequenceKind::constant, std::span<const Complex>(&a, 1));
}

VerblunskySequence list_sequence(std::vector<Complex> entries) {
  return make_sequence(SequenceKind::explicit_list, entries);
}

VerblunskySequence ranga_sequence(double b) {
  const Complex param{b, 0.0};
  return make_sequence(SequenceKind::ranga, std::span<const Complex>(&param, 1));
}

VerblunskySequence alexandrov(const VerblunskySequence& seq, Complex lambda) {
  lambda = checked_unimodular(lambda, "Alexandrov parameter lambda");
  auto node = std::make_shared<VerblunskySequence::Node>();
  node->kind = SequenceKind::alexandrov;
  node->params = {lambda};
  node->scalar = lambda;
  node->base = seq;
  return VerblunskySequence(std::move(node));
}

VerblunskySequence rotate(const VerblunskySequence& seq, Complex sigma) {
  sigma = checked_unimodular(sigma, "rotation parameter sigma");
  auto node = std::make_shared<VerblunskySequence::Node>();
  node->kind = SequenceKind::rotate;
  node->params = {sigma};
  node->scalar = sigma;
  node->base = seq;
  return VerblunskySequence(std::move(node));
}

VerblunskySequence sieve(const VerblunskySequence& seq, int p) {
  if (p < 1)
    throw ParameterError("sieve order must satisfy p >= 1, got p = " +
                         std::to_string(p));
  if (p == 1) return seq;
  auto node = std::make_shared<VerblunskySequence::Node>();
  node->kind = SequenceKind::sieve;
  node->params = {Complex(p, 0.0)};
  node->p = static_cast<std::size_t>(p);
  node->base = seq;
  return VerblunskySequence(std::move(node));
}

Complex checked_unimodular(Complex z, std::string_view name) {
  const double modulus = std::abs(z);
  if (!std::isfinite(modulus) || std::abs(modulus - 1.0) > kUnimodularTolerance) {
    std::ostringstream os;
    os << name << " must be unimodular, got |" << name << "| = " << modulus;
    throw ParameterError(os.str());
  }
  return z / modulus;
}

Complex unit_power(Complex u, std::size_t k) {
  Complex result{1.0, 0.0};
  while (k > 0) {
    if (k & 1U) result *= u;
    k >>= 1U;
    if (k > 0) u *= u;
  }
  return result / std::abs(result);
}

}  // namespace opuc
