#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "lrt/specfun.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
constexpr double kEulerGamma = 0.5772156649015328606065120900824024;
constexpr double kPi = 3.141592653589793238462643383279503;
constexpr double kCatalan = 0.9159655941772190150546185696791677;
}  // namespace

TEST_CASE("log_gamma matches references and the factorial recurrence") {
  REQUIRE_THAT(lrt::log_gamma(0.5), WithinRel(0.5 * std::log(kPi), 1e-14));
  REQUIRE_THAT(lrt::log_gamma(1.0), WithinAbs(0.0, 1e-14));
  REQUIRE_THAT(lrt::log_gamma(2.0), WithinAbs(0.0, 1e-14));
  REQUIRE_THAT(lrt::log_gamma(101.0), WithinRel(363.73937555556349014408, 1e-13));
  for (double x : {0.1, 0.7, 1.3, 4.9, 12.6, 250.0}) {
    REQUIRE_THAT(lrt::log_gamma(x + 1.0), WithinRel(lrt::log_gamma(x) + std::log(x), 1e-12));
  }
  REQUIRE_THROWS_AS(lrt::log_gamma(0.0), lrt::DomainError);
  REQUIRE_THROWS_AS(lrt::log_gamma(-2.5), lrt::DomainError);
}

TEST_CASE("digamma matches references, the recurrence and the half-integer sum") {
  REQUIRE_THAT(lrt::digamma(1.0), WithinRel(-kEulerGamma, 1e-13));
  REQUIRE_THAT(lrt::digamma(0.5), WithinRel(-kEulerGamma - 2.0 * std::log(2.0), 1e-13));
  REQUIRE_THAT(lrt::digamma(50.5), WithinRel(3.912039670928391984609, 1e-14));
  for (double x : {0.2, 0.9, 3.4, 17.5, 111.0}) {
    REQUIRE_THAT(lrt::digamma(x + 1.0), WithinRel(lrt::digamma(x) + 1.0 / x, 1e-12));
  }
  for (int n : {1, 3, 9, 27}) {
    double odd_sum = 0.0;
    for (int k = 1; k <= n; ++k) odd_sum += 1.0 / (2.0 * k - 1.0);
    const double reference = -kEulerGamma - 2.0 * std::log(2.0) + 2.0 * odd_sum;
    REQUIRE_THAT(lrt::digamma(n + 0.5), WithinRel(reference, 1e-13));
  }
  REQUIRE_THROWS_AS(lrt::digamma(0.0), lrt::DomainError);
  REQUIRE_THROWS_AS(lrt::digamma(-1.0), lrt::DomainError);
}

TEST_CASE("trigamma matches references and the recurrence") {
  REQUIRE_THAT(lrt::trigamma(1.0), WithinRel(kPi * kPi / 6.0, 1e-13));
  REQUIRE_THAT(lrt::trigamma(0.5), WithinRel(kPi * kPi / 2.0, 1e-13));
  REQUIRE_THAT(lrt::trigamma(12.25), WithinRel(0.08505514298816320807927, 1e-13));
  // psi_1(1/4) = pi^2 + 8 Catalan, lowered to 12.25 by the recurrence.
  double reference = kPi * kPi + 8.0 * kCatalan;
  for (int k = 0; k < 12; ++k) reference -= 1.0 / ((0.25 + k) * (0.25 + k));
  REQUIRE_THAT(lrt::trigamma(12.25), WithinRel(reference, 1e-12));
  for (double x : {0.3, 1.1, 6.8, 77.0}) {
    REQUIRE_THAT(lrt::trigamma(x + 1.0), WithinRel(lrt::trigamma(x) - 1.0 / (x * x), 1e-12));
  }
  REQUIRE_THROWS_AS(lrt::trigamma(0.0), lrt::DomainError);
  REQUIRE_THROWS_AS(lrt::trigamma(-0.5), lrt::DomainError);
}

TEST_CASE("log_beta agrees with the gamma-function identity") {
  REQUIRE_THAT(lrt::log_beta(1.0, 1.0), WithinAbs(0.0, 1e-14));
  REQUIRE_THAT(lrt::log_beta(2.5, 3.5),
               WithinRel(lrt::log_gamma(2.5) + lrt::log_gamma(3.5) - lrt::log_gamma(6.0), 1e-13));
  REQUIRE_THAT(lrt::log_beta(0.5, 0.5), WithinRel(std::log(kPi), 1e-13));
  REQUIRE_THROWS_AS(lrt::log_beta(0.0, 1.0), lrt::DomainError);
}

TEST_CASE("std_normal_cdf matches references, symmetry and monotonicity") {
  REQUIRE_THAT(lrt::std_normal_cdf(0.0), WithinAbs(0.5, 1e-15));
  REQUIRE_THAT(lrt::std_normal_cdf(-8.0), WithinRel(6.2209605742717841e-16, 1e-13));
  REQUIRE_THAT(lrt::std_normal_cdf(1.6448536269514722), WithinRel(0.95, 1e-14));
  for (double z : {0.1, 0.9, 2.3, 5.0}) {
    REQUIRE_THAT(lrt::std_normal_cdf(z) + lrt::std_normal_cdf(-z), WithinAbs(1.0, 1e-14));
  }
  double previous = 0.0;
  for (double z = -6.0; z <= 6.0; z += 0.25) {
    const double value = lrt::std_normal_cdf(z);
    REQUIRE(value > previous);
    previous = value;
  }
}
