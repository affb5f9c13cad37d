#include "doctest.h"
#include "support.hpp"

#include "opuc/coeffs.hpp"
#include "opuc/errors.hpp"

#include <thread>

using namespace opuc;
using opuc::testing::Rng;

TEST_CASE("primitive sequences") {
  const auto zero = zero_sequence();
  for (std::size_t n : {0U, 1U, 17U, 1000000U}) CHECK(zero.alpha(n) == Complex{0.0, 0.0});
  CHECK(zero.kind() == SequenceKind::zero);
  CHECK(zero.rho(5) == 1.0);

  const auto constant = constant_sequence(0.5);
  for (std::size_t n : {0U, 3U, 999U}) CHECK(constant.alpha(n) == Complex{0.5, 0.0});

  const auto ranga = ranga_sequence(-0.25);
  CHECK(ranga.alpha(0).real() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(ranga.alpha(1).real() == doctest::Approx(1.0 / 7.0).epsilon(1e-15));
  CHECK(ranga.rho(0) == doctest::Approx(std::sqrt(8.0) / 3.0));
}

TEST_CASE("explicit list extends by zero") {
  const auto seq = list_sequence({0.1, Complex{0.0, 0.2}});
  CHECK(seq.alpha(1) == Complex{0.0, 0.2});
  CHECK(seq.alpha(2) == Complex{0.0, 0.0});
  CHECK(seq.alpha(50) == Complex{0.0, 0.0});
  CHECK(to_string(seq.kind()) == "explicit-list");
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(constant_sequence(1.0), ParameterError);
  CHECK_THROWS_AS(constant_sequence(Complex{0.8, 0.8}), ParameterError);
  CHECK_THROWS_AS(list_sequence({0.2, 1.5}), ParameterError);
  CHECK_THROWS_AS(ranga_sequence(0.0), ParameterError);
  CHECK_THROWS_AS(ranga_sequence(-0.5), ParameterError);
  CHECK_THROWS_AS(ranga_sequence(0.3), ParameterError);
  CHECK_THROWS_AS(alexandrov(zero_sequence(), 0.9), ParameterError);
  CHECK_THROWS_AS(rotate(zero_sequence(), Complex{1.0, 1.0}), ParameterError);
  CHECK_THROWS_AS(sieve(zero_sequence(), 0), ParameterError);
  const std::vector<Complex> one{0.5};
  CHECK_THROWS_AS(make_sequence(SequenceKind::zero, one), ParameterError);
  CHECK_THROWS_AS(make_sequence(SequenceKind::alexandrov, one), ParameterError);
}

TEST_CASE("unimodular inputs are renormalized") {
  const Complex almost{1.0 + 5e-13, 0.0};
  CHECK(std::abs(checked_unimodular(almost, "x")) == 1.0);
  CHECK_THROWS_AS(checked_unimodular(Complex{1.0 + 1e-9, 0.0}, "x"), ParameterError);
  const Complex u = std::polar(1.0, 0.3);
  CHECK(std::abs(unit_power(u, 12345) - std::polar(1.0, 0.3 * 12345)) < 1e-10);
  CHECK(unit_power(u, 0) == Complex{1.0, 0.0});
}

TEST_CASE("alexandrov examples") {
  const auto a = alexandrov(constant_sequence(0.5), Complex{0.0, 1.0});
  CHECK(std::abs(a.alpha(0) - Complex{0.0, 0.5}) < 1e-16);
  CHECK(std::abs(a.alpha(7) - Complex{0.0, 0.5}) < 1e-16);
  CHECK(a.is_transformed());
  REQUIRE(a.base() != nullptr);
  CHECK(a.base()->kind() == SequenceKind::constant);

  const auto b = alexandrov(ranga_sequence(-0.25), -1.0);
  CHECK(b.alpha(0).real() == doctest::Approx(-1.0 / 3.0));

  Rng rng(11);
  const auto s = opuc::testing::random_sequence(rng, 20);
  const auto same = alexandrov(s, 1.0);
  for (std::size_t n = 0; n < 25; ++n) CHECK(same.alpha(n) == s.alpha(n));
}

TEST_CASE("rotation examples") {
  const auto r = rotate(constant_sequence(0.5), -1.0);
  for (std::size_t n = 0; n < 6; ++n)
    CHECK(std::abs(r.alpha(n) - (n % 2 == 0 ? -0.5 : 0.5)) < 1e-15);
  const auto z = rotate(zero_sequence(), std::polar(1.0, 0.7));
  for (std::size_t n = 0; n < 6; ++n) CHECK(z.alpha(n) == Complex{0.0, 0.0});
  const auto i = rotate(constant_sequence(0.5), Complex{0.0, 1.0});
  CHECK(std::abs(i.alpha(0) - Complex{0.0, -0.5}) < 1e-15);
}

TEST_CASE("sieve examples") {
  const auto base = list_sequence({0.1, 0.2, 0.3});
  CHECK(&sieve(base, 1).params() == &base.params());
  const auto s = sieve(base, 2);
  const Complex expected[] = {0.0, 0.1, 0.0, 0.2, 0.0, 0.3, 0.0, 0.0};
  for (std::size_t n = 0; n < 8; ++n) CHECK(s.alpha(n) == expected[n]);
  const auto z = sieve(zero_sequence(), 3);
  for (std::size_t n = 0; n < 10; ++n) CHECK(z.alpha(n) == Complex{0.0, 0.0});
}

TEST_CASE("transform inverses and structure") {
  Rng rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = opuc::testing::random_sequence(rng, 30, 0.95);
    const Complex lambda = rng.unimodular();
    const Complex sigma = rng.unimodular();
    const auto back = alexandrov(alexandrov(s, lambda), std::conj(lambda));
    const auto unrot = rotate(rotate(s, sigma), std::conj(sigma));
    for (std::size_t n = 0; n < 35; ++n) {
      CHECK(std::abs(back.alpha(n) - s.alpha(n)) < 1e-15);
      CHECK(std::abs(unrot.alpha(n) - s.alpha(n)) < 1e-14);
      CHECK(std::abs(s.rho(n) * s.rho(n) + std::norm(s.alpha(n)) - 1.0) < 1e-15);
    }
    const int p = static_cast<int>(rng.index(2, 5));
    const auto sv = sieve(s, p);
    for (std::size_t n = 0; n < 30 * static_cast<std::size_t>(p); ++n) {
      const bool kept = n % static_cast<std::size_t>(p) == static_cast<std::size_t>(p) - 1;
      CHECK((sv.alpha(n) != Complex{0.0, 0.0}) == kept);
    }
  }
}

TEST_CASE("ranga coefficients are real, positive and decreasing") {
  for (double b : {-0.49, -0.4, -0.25, -0.1, -0.01}) {
    const auto s = ranga_sequence(b);
    // alpha_0 = -b/(b+1) is below 1/2 only for b > -1/3.
    CHECK((s.alpha(0).real() < 0.5) == (b > -1.0 / 3.0));
    double prev = 1.0;
    for (std::size_t n = 0; n < 2000; ++n) {
      const Complex a = s.alpha(n);
      CHECK(a.imag() == 0.0);
      CHECK(a.real() > 0.0);
      CHECK(a.real() < prev);
      prev = a.real();
    }
  }
}

TEST_CASE("nested transforms compose lazily") {
  const auto s = sieve(alexandrov(ranga_sequence(-0.25), Complex{0.0, 1.0}), 2);
  CHECK(s.alpha(0) == Complex{0.0, 0.0});
  CHECK(std::abs(s.alpha(1) - Complex{0.0, 1.0 / 3.0}) < 1e-15);
  CHECK(std::abs(s.alpha(3) - Complex{0.0, 1.0 / 7.0}) < 1e-15);
  CHECK(s.first_nonreal_index(10) == std::optional<std::size_t>(1));
  CHECK(ranga_sequence(-0.25).first_nonreal_index(100) == std::nullopt);
}

TEST_CASE("sequences are safe to share across threads") {
  const auto s = rotate(sieve(ranga_sequence(-0.3), 3), std::polar(1.0, 0.4));
  std::vector<Complex> serial(4000);
  for (std::size_t n = 0; n < serial.size(); ++n) serial[n] = s.alpha(n);
  std::vector<Complex> threaded(serial.size());
  {
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < 4; ++t)
      workers.emplace_back([&, t] {
        for (std::size_t n = t; n < threaded.size(); n += 4) threaded[n] = s.alpha(n);
      });
  }
  CHECK(serial == threaded);
}
