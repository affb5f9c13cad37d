#include "opuc/popuc.hpp"

#include <algorithm>
#include <map>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "opuc/errors.hpp"
#include "opuc/kernel.hpp"
#include "opuc/szego.hpp"

namespace opuc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kBracketWidth = 1e-13;
constexpr int kMaxRefinements = 3;

struct PhasePoint {
  double phase = 0.0;        // principal argument of B(e^{i theta}) * beta
  double log_modulus = 0.0;  // log |phi_{n-1}(e^{i theta})|
};

// B = z phi_{n-1} / phi_{n-1}^*. Zeros of Phi_n(.; beta) are the points where
// the phase of B * beta vanishes mod 2 pi.
PhasePoint phase_point(const VerblunskySequence& seq, std::size_t n, Complex beta, double theta) {
  const Complex z = std::polar(1.0, theta);
  const auto pair = eval_pair(seq, n - 1, z);
  return {std::arg(z * pair.value * beta / pair.star_value),
          std::log(std::abs(pair.value)) + pair.scale_exponent * std::numbers::ln2};
}

double relative_phase(const VerblunskySequence& seq, std::size_t n, Complex beta, double theta) {
  return phase_point(seq, n, beta, theta).phase;
}

// d/dtheta arg B(e^{i theta}) = K_{n-1}(z, z) / |phi_{n-1}(z)|^2.
double phase_velocity(const VerblunskySequence& seq, std::size_t n, double theta) {
  OrthonormalWalker walker(seq, std::polar(1.0, theta));
  double kernel = 1.0;
  for (std::size_t j = 1; j < n; ++j) {
    walker.step();
    kernel += std::norm(walker.value());
  }
  return kernel / std::norm(walker.value());
}

double principal(double angle) {
  angle = std::remainder(angle, kTwoPi);
  return angle <= -std::numbers::pi ? angle + kTwoPi : angle;
}

double normalize_angle(double theta) {
  theta = std::fmod(theta, kTwoPi);
  if (theta < 0.0) theta += kTwoPi;
  // A zero within rounding of a full turn is the zero at angle 0.
  if (theta > kTwoPi - 1e-12) theta = 0.0;
  return theta;
}

struct PhaseSamples {
  std::vector<double> thetas;     // increasing, from 0 to 2 pi inclusive
  std::vector<double> unwrapped;  // phase at each theta
  bool resolved = false;
};

// Steps between neighbouring samples are bisected until they lie in
// (0, kMaxStep]. Below kMinWidth rounding can leave small negative steps,
// and a turn squeezed around a sample can show up as a step of pi; any
// step in (-kMaxStep, pi] is accepted there. The true increase is then
// step + 2 pi k with k >= 0, so a total of exactly 2 pi n certifies that
// no full turn was skipped.
constexpr double kMaxStep = std::numbers::pi / 2.0;
constexpr double kMinWidth = 1e-14;
constexpr std::size_t kMaxSamples = std::size_t{1} << 22;
constexpr int kNewtonIterations = 60;
constexpr double kMinDepth = 1e-12;
constexpr double kWindow = 1e-11;

bool settled(double step) { return step > 0.0 && step <= kMaxStep; }
bool acceptable(double step) { return step > -kMaxStep && step <= std::numbers::pi; }

// Newton's method for a zero of Phi_m near z, with the derivative carried
// through the recursion. Returns nothing unless it converges inside the
// closed disk.
std::optional<Complex> newton_zero(const VerblunskySequence& seq, std::size_t m, Complex z) {
  for (int it = 0; it < kNewtonIterations; ++it) {
    Complex p{1.0, 0.0}, s{1.0, 0.0}, dp{0.0, 0.0}, ds{0.0, 0.0};
    for (std::size_t j = 0; j < m; ++j) {
      const Complex a = seq.alpha(j);
      const Complex next_dp = p + z * dp - std::conj(a) * ds;
      ds = ds - a * (p + z * dp);
      dp = next_dp;
      const Complex next_p = z * p - std::conj(a) * s;
      s = s - a * z * p;
      p = next_p;
      const double size = std::max({std::abs(p), std::abs(s), std::abs(dp), std::abs(ds)});
      if (size > 0x1p512) {
        p *= 0x1p-512;
        s *= 0x1p-512;
        dp *= 0x1p-512;
        ds *= 0x1p-512;
      }
    }
    if (dp == Complex{}) return std::nullopt;
    const Complex step = p / dp;
    z -= step;
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || std::abs(z) > 2.0)
      return std::nullopt;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z)))
      return std::abs(z) <= 1.0 + 1e-6 ? std::optional<Complex>(z) : std::nullopt;
  }
  return std::nullopt;
}

// Samples of the boundary phase on [0, 2 pi), refined where needed.
class PhaseMap {
 public:
  PhaseMap(const VerblunskySequence& seq, std::size_t n, Complex beta)
      : seq_(seq), n_(n), beta_(beta) {}

  void add(double theta) {
    theta = std::fmod(theta, kTwoPi);
    if (theta < 0.0) theta += kTwoPi;
    if (in_window(theta)) return;
    if (!points_.contains(theta)) points_.emplace(theta, phase_point(seq_, n_, beta_, theta));
  }

  void add_grid(std::size_t count) {
    for (std::size_t s = 0; s < count; ++s)
      add(kTwoPi * static_cast<double>(s) / static_cast<double>(count));
  }

  // Bisects every step that is not in (0, kMaxStep] until it is, or until
  // the step is narrower than kMinWidth.
  void bisect_steps() {
    for (;;) {
      std::vector<double> midpoints;
      for_each_step([&](double lo, double hi, double step) {
        if (!settled(step) && hi - lo > kMinWidth && !hidden(lo, hi))
          midpoints.push_back(0.5 * (lo + hi));
      });
      if (midpoints.empty() || points_.size() + midpoints.size() > kMaxSamples) return;
      for (double theta : midpoints) add(theta);
    }
  }

  // A turn of the phase can hide between two samples when phi_{n-1} has a
  // zero a very close to the circle; the turn then has width about
  // 1 - |a| around arg a. Each local minimum of |phi_{n-1}| seeds Newton's
  // method for a, and samples are placed around arg a at geometric
  // multiples of 1 - |a|. Closer than kMinDepth the phase inside the turn
  // is rounding noise: no samples are taken within kWindow of arg a and
  // the step across counts one full turn.
  void zoom_minima() {
    const std::vector<std::pair<double, PhasePoint>> sorted(points_.begin(), points_.end());
    const std::size_t m = sorted.size();
    if (m < 3 || n_ < 2) return;
    for (std::size_t k = 0; k < m; ++k) {
      const auto& prev = sorted[(k + m - 1) % m];
      const auto& next = sorted[(k + 1) % m];
      const double value = sorted[k].second.log_modulus;
      if (value > prev.second.log_modulus || value > next.second.log_modulus) continue;
      const auto zero = newton_zero(seq_, n_ - 1, std::polar(1.0, sorted[k].first));
      if (!zero) continue;
      const double depth = 1.0 - std::abs(*zero);
      double center = std::fmod(std::arg(*zero) + kTwoPi, kTwoPi);
      double offset = 0.25 * depth;
      if (depth < kMinDepth) {
        if (in_window(center)) continue;
        std::erase_if(points_, [&](const auto& p) { return distance(p.first, center) < kWindow; });
        windows_.push_back(center);
        offset = kWindow;
      } else {
        add(center);
      }
      for (; offset < kMaxStep; offset *= 2.0) {
        add(center - offset);
        add(center + offset);
      }
    }
  }

  PhaseSamples unwrap() const {
    PhaseSamples samples;
    samples.thetas.push_back(points_.begin()->first);
    samples.unwrapped.push_back(points_.begin()->second.phase);
    bool ok = true;
    for_each_step([&](double lo, double hi, double step) {
      if (hidden(lo, hi)) {
        if (std::abs(step) > kMaxStep) ok = false;
        step += kTwoPi;
      } else if (!acceptable(step)) {
        ok = false;
      }
      samples.thetas.push_back(hi);
      samples.unwrapped.push_back(samples.unwrapped.back() + step);
    });
    const double total = samples.unwrapped.back() - samples.unwrapped.front();
    samples.resolved = ok && std::abs(total - kTwoPi * static_cast<double>(n_)) < 1e-6;
    return samples;
  }

 private:
  static double distance(double a, double b) { return std::abs(std::remainder(a - b, kTwoPi)); }

  bool in_window(double theta) const {
    return std::ranges::any_of(windows_, [&](double c) { return distance(theta, c) < kWindow; });
  }

  // Whether (lo, hi) straddles a window; hi may exceed 2 pi.
  bool hidden(double lo, double hi) const {
    return std::ranges::any_of(windows_, [&](double c) {
      return (c > lo && c < hi) || (c + kTwoPi > lo && c + kTwoPi < hi);
    });
  }

  // Calls f(lo, hi, principal step) for consecutive samples, closing the
  // turn at 2 pi.
  template <typename F>
  void for_each_step(F&& f) const {
    auto it = points_.begin();
    for (auto next = std::next(it); next != points_.end(); ++it, ++next)
      f(it->first, next->first, principal(next->second.phase - it->second.phase));
    const auto& first = *points_.begin();
    f(it->first, first.first + kTwoPi, principal(first.second.phase - it->second.phase));
  }

  const VerblunskySequence& seq_;
  std::size_t n_;
  Complex beta_;
  std::map<double, PhasePoint> points_;
  std::vector<double> windows_;
};

std::string dump(const PhaseSamples& samples) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t s = 0; s < samples.thetas.size(); ++s)
    os << samples.thetas[s] << ',' << samples.unwrapped[s] << '\n';
  return os.str();
}

}  // namespace

Complex popuc_eval(const VerblunskySequence& seq, std::size_t n, Complex beta, Complex z) {
  beta = checked_unimodular(beta, "beta");
  if (n < 1) throw ParameterError("paraorthogonal polynomials need n >= 1");
  const auto prev = eval_monic(seq, n - 1, z);
  return z * prev.unscaled_value() - std::conj(beta) * prev.unscaled_star();
}

std::vector<double> popuc_zero_angles(const VerblunskySequence& seq, std::size_t n,
                                      Complex beta) {
  beta = checked_unimodular(beta, "beta");
  if (n < 1) throw ParameterError("paraorthogonal polynomials need n >= 1");

  PhaseMap map(seq, n, beta);
  std::size_t count = 8 * n;
  PhaseSamples samples;
  for (int refinement = 0; refinement <= kMaxRefinements; ++refinement, count *= 2) {
    map.add_grid(count);
    map.bisect_steps();
    samples = map.unwrap();
    if (samples.resolved) break;
    map.zoom_minima();
    map.bisect_steps();
    samples = map.unwrap();
    if (samples.resolved) break;
  }
  if (!samples.resolved)
    throw ZeroFinderError("popuc_zeros: boundary phase not resolved after " +
                              std::to_string(kMaxRefinements) + " refinements (degree " +
                              std::to_string(n) + ")",
                          dump(samples));

  std::vector<double> angles;
  angles.reserve(n);
  // Exactly n multiples of 2 pi lie in (start, start + 2 pi n]; the last
  // segment absorbs rounding in the accumulated phase.
  const double start = samples.unwrapped.front();
  const auto k0 = static_cast<long long>(std::floor(start / kTwoPi)) + 1;
  std::size_t s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double target = kTwoPi * static_cast<double>(k0 + static_cast<long long>(i));
    while (s + 2 < samples.thetas.size() && samples.unwrapped[s + 1] < target) ++s;

    double lo = samples.thetas[s];
    double hi = samples.thetas[s + 1];
    while (hi - lo > kBracketWidth) {
      const double mid = 0.5 * (lo + hi);
      if (relative_phase(seq, n, beta, mid) < 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    // One Newton step on the phase.
    double theta = 0.5 * (lo + hi);
    const double slope = phase_velocity(seq, n, theta);
    if (std::isfinite(slope) && slope > 0.0)
      theta = std::clamp(theta - relative_phase(seq, n, beta, theta) / slope, lo, hi);
    angles.push_back(normalize_angle(theta));
  }

  std::sort(angles.begin(), angles.end());
  return angles;
}

std::vector<Complex> popuc_zeros(const VerblunskySequence& seq, std::size_t n, Complex beta) {
  const auto angles = popuc_zero_angles(seq, n, beta);
  std::vector<Complex> nodes;
  nodes.reserve(angles.size());
  for (double theta : angles) nodes.push_back(std::polar(1.0, theta));
  return nodes;
}

QuadratureMeasure quadrature(const VerblunskySequence& seq, std::size_t n, Complex beta) {
  QuadratureMeasure qm;
  qm.beta = checked_unimodular(beta, "beta");
  qm.degree = n;
  qm.angles = popuc_zero_angles(seq, n, qm.beta);
  for (double theta : qm.angles) {
    const Complex z = std::polar(1.0, theta);
    qm.nodes.push_back(z);
    qm.weights.push_back(1.0 / cd_kernel(seq, n - 1, z, z).value.real());
  }
  return qm;
}

Complex quadrature_moment(const QuadratureMeasure& qm, long j) {
  Complex sum{0.0, 0.0};
  for (std::size_t k = 0; k < qm.nodes.size(); ++k) {
    const Complex power = j >= 0 ? unit_power(qm.nodes[k], static_cast<std::size_t>(j))
                                 : std::conj(unit_power(qm.nodes[k], static_cast<std::size_t>(-j)));
    sum += qm.weights[k] * power;
  }
  return sum;
}

bool interlacing_check(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size())
    throw ParameterError("interlacing_check needs node lists of equal length");
  const auto to_angles = [](std::span<const Complex> nodes) {
    std::vector<double> angles;
    for (const Complex z : nodes) angles.push_back(normalize_angle(std::arg(z)));
    std::sort(angles.begin(), angles.end());
    return angles;
  };
  const auto first = to_angles(a);
  const auto second = to_angles(b);
  for (const Complex za : a)
    for (const Complex zb : b)
      if (std::abs(za - zb) < 1e-12)
        throw ParameterError("interlacing_check: node lists share a point");
  if (first.empty()) return true;

  const std::size_t n = first.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = first[i];
    const double hi = i + 1 < n ? first[i + 1] : first[0] + kTwoPi;
    std::size_t inside = 0;
    for (double t : second) {
      if ((t > lo && t < hi) || (t + kTwoPi > lo && t + kTwoPi < hi)) ++inside;
    }
    if (inside != 1) return false;
  }
  return true;
}

}  // namespace opuc
