#include "opuc/kernel.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "opuc/cmv.hpp"
#include "opuc/errors.hpp"
#include "opuc/parallel.hpp"
#include "opuc/szego.hpp"

namespace opuc {

namespace {

void require_off_diagonal(Complex z, Complex w) {
  if (std::abs(1.0 - z * std::conj(w)) <= kDiagonalTolerance)
    throw ParameterError(
        "mixed CD closed form requires |1 - z conj(w)| > 1e-10 (z conj(w) is on the "
        "excluded diagonal)");
}

double simpson_step(const std::function<double(double)>& f, double a, double fa, double b,
                    double fb, double m, double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

KernelValue cd_kernel(const VerblunskySequence& seq, std::size_t n, Complex z, Complex w) {
  OrthonormalWalker at_z(seq, z);
  OrthonormalWalker at_w(seq, w);
  Complex sum{1.0, 0.0};
  for (std::size_t j = 1; j <= n; ++j) {
    at_z.step();
    at_w.step();
    sum += at_z.value() * std::conj(at_w.value());
  }
  return {sum, n, KernelForm::direct_sum};
}

Complex mixed_direct_sum(const VerblunskySequence& seq, Complex lambda, std::size_t n,
                         Complex z, Complex w) {
  const auto rotated = alexandrov(seq, lambda);
  OrthonormalWalker at_w(seq, w);
  OrthonormalWalker at_z(rotated, z);
  Complex sum{1.0, 0.0};
  for (std::size_t j = 1; j <= n; ++j) {
    at_z.step();
    at_w.step();
    sum += std::conj(at_w.value()) * at_z.value();
  }
  return sum;
}

KernelValue mixed_cd(const VerblunskySequence& seq, Complex lambda, std::size_t n, Complex z,
                     Complex w, KernelForm form) {
  lambda = checked_unimodular(lambda, "lambda");
  require_off_diagonal(z, w);
  const auto rotated = alexandrov(seq, lambda);
  const Complex lb = std::conj(lambda);
  const Complex denom = 1.0 - z * std::conj(w);

  switch (form) {
    case KernelForm::mixed_top: {
      const auto pw = eval_pair(seq, n + 1, w);
      const auto pz = eval_pair(rotated, n + 1, z);
      const Complex numer = 1.0 - lb +
                            lb * std::conj(pw.unscaled_star()) * pz.unscaled_star() -
                            std::conj(pw.unscaled_value()) * pz.unscaled_value();
      return {numer / denom, n, form};
    }
    case KernelForm::mixed_bottom: {
      const auto pw = eval_pair(seq, n, w);
      const auto pz = eval_pair(rotated, n, z);
      const Complex numer = 1.0 - lb -
                            z * std::conj(w) * std::conj(pw.unscaled_value()) *
                                pz.unscaled_value() +
                            lb * std::conj(pw.unscaled_star()) * pz.unscaled_star();
      return {numer / denom, n, form};
    }
    case KernelForm::direct_sum:
      break;
  }
  return {mixed_direct_sum(seq, lambda, n, z, w), n, KernelForm::direct_sum};
}

KernelValue mixed_kernel(const VerblunskySequence& seq, Complex lambda, std::size_t n,
                         Complex z, Complex w) {
  if (std::abs(1.0 - z * std::conj(w)) <= kDiagonalTolerance) {
    lambda = checked_unimodular(lambda, "lambda");
    return {mixed_direct_sum(seq, lambda, n, z, w), n, KernelForm::direct_sum};
  }
  return mixed_cd(seq, lambda, n, z, w, KernelForm::mixed_bottom);
}

double christoffel(const VerblunskySequence& seq, std::size_t n, Complex zeta) {
  return 1.0 / cd_kernel(seq, n, zeta, zeta).value.real();
}

double christoffel_oracle(const VerblunskySequence& seq, std::size_t n, Complex zeta) {
  if (n > 30) throw ParameterError("christoffel_oracle supports n <= 30 (dense solve)");
  const auto size = static_cast<Eigen::Index>(n + 1);
  std::vector<Complex> moments(2 * n + 1);  // moments[m + n] = c_m
  for (long m = 0; m <= static_cast<long>(n); ++m) {
    const Complex c = cmv_moment(seq, m);
    moments[static_cast<std::size_t>(m) + n] = c;
    moments[n - static_cast<std::size_t>(m)] = std::conj(c);
  }

  // [[T, -a], [a^*, 0]] [p; mu] = [0; 1], a_j = conj(zeta^j).
  Eigen::MatrixXcd system = Eigen::MatrixXcd::Zero(size + 1, size + 1);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(size + 1);
  Eigen::VectorXcd a(size);
  Complex power{1.0, 0.0};
  for (Eigen::Index j = 0; j < size; ++j) {
    a(j) = std::conj(power);
    power *= zeta;
  }
  for (Eigen::Index j = 0; j < size; ++j) {
    for (Eigen::Index k = 0; k < size; ++k)
      system(j, k) = moments[static_cast<std::size_t>(k - j + static_cast<Eigen::Index>(n))];
    system(j, size) = -a(j);
    system(size, j) = std::conj(a(j));
  }
  rhs(size) = 1.0;

  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(system);
  if (std::abs(lu.determinant()) == 0.0)
    throw NumericalError("christoffel_oracle: singular moment system");
  const Eigen::VectorXcd solution = lu.solve(rhs);
  const Eigen::VectorXcd p = solution.head(size);
  const Eigen::MatrixXcd toeplitz = system.topLeftCorner(size, size);
  return (p.adjoint() * toeplitz * p)(0, 0).real();
}

MassEstimate mass_estimate(const VerblunskySequence& seq, Complex zeta, std::size_t N) {
  MassEstimate estimate;
  if (N == 0) return estimate;

  std::vector<double> partial(N + 1);
  OrthonormalWalker walker(seq, zeta);
  double sum = 1.0;
  partial[0] = sum;
  for (std::size_t j = 1; j <= N; ++j) {
    walker.step();
    sum += std::norm(walker.value());
    partial[j] = sum;
  }
  estimate.partial_mass = 1.0 / sum;

  // Least-squares slope on ~32 log-spaced indices of the last decade.
  const std::size_t first = N / 10;
  std::vector<std::size_t> samples;
  const int count = 32;
  for (int k = 0; k <= count; ++k) {
    const double t = static_cast<double>(k) / count;
    const auto j = static_cast<std::size_t>(std::llround(
        std::exp(std::log(first + 1.0) + t * (std::log(N + 1.0) - std::log(first + 1.0))) -
        1.0));
    if (samples.empty() || j > samples.back()) samples.push_back(std::min(j, N));
  }
  double mx = 0.0, my = 0.0;
  for (auto j : samples) {
    mx += std::log(j + 1.0);
    my += std::log(partial[j]);
  }
  mx /= static_cast<double>(samples.size());
  my /= static_cast<double>(samples.size());
  double sxy = 0.0, sxx = 0.0;
  for (auto j : samples) {
    const double dx = std::log(j + 1.0) - mx;
    sxy += dx * (std::log(partial[j]) - my);
    sxx += dx * dx;
  }
  estimate.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  estimate.diverging = estimate.slope > kDivergenceSlope;
  return estimate;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, fa, b, fb, m, fm, whole, tol, 50);
}

double ranga_density_tau(double b) {
  if (!(b > -0.5 && b < 0.0)) throw ParameterError("ranga density needs -1/2 < b < 0");
  // (1/2pi) int_0^{2pi} sin(t/2)^{2b} dt = (1/pi) int_0^pi sin(t/2)^{2b} dt, and with
  // t = pi u^q, q = 1/(1+2b), the integrand becomes q (pi/2)^{2b} sinc(pi u^q / 2)^{2b}.
  const double q = 1.0 / (1.0 + 2.0 * b);
  const double scale = q * std::pow(std::numbers::pi / 2.0, 2.0 * b);
  const auto integrand = [&](double u) {
    const double x = 0.5 * std::numbers::pi * std::pow(u, q);
    const double sinc = x < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
    return scale * std::pow(sinc, 2.0 * b);
  };
  const double integral = adaptive_simpson(integrand, 0.0, 1.0, 1e-12);
  return 1.0 / integral;
}

DensityModel DensityModel::lebesgue() {
  return {[](double) { return 1.0; }, 1.0};
}

DensityModel DensityModel::ranga(double b) {
  const double tau = ranga_density_tau(b);
  return {[tau, b](double theta) { return tau * std::pow(std::abs(std::sin(0.5 * theta)), 2.0 * b); },
          tau};
}

DensityDiagnostic density_diagnostic(const VerblunskySequence& seq, const DensityModel& model,
                                     std::size_t n, std::span<const double> thetas,
                                     unsigned threads) {
  if (n == 0) throw ParameterError("density_diagnostic needs n >= 1");
  DensityDiagnostic report;
  report.degree = n;
  report.points.resize(thetas.size());
  parallel_for(thetas.size(), threads, [&](std::size_t i) {
    const double theta = thetas[i];
    const Complex z = std::polar(1.0, theta);
    DiagnosticPoint point;
    point.theta = theta;
    point.ratio = static_cast<double>(n) / cd_kernel(seq, n, z, z).value.real();
    point.density = model(theta);
    point.deviation = std::abs(point.ratio - point.density);
    report.points[i] = point;
  });
  for (const auto& point : report.points)
    report.max_deviation = std::max(report.max_deviation, point.deviation);
  return report;
}

}  // namespace opuc
