#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "lrt/beta_oracle.hpp"
#include "lrt/statistics.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
constexpr double kPi = 3.141592653589793238462643383279503;
}

TEST_CASE("independence decomposition enumerates the documented factors") {
  const auto spec = lrt::spec_independence(10, lrt::BlockPartition{{2, 3}});
  REQUIRE(spec.factors.size() == 3);
  REQUIRE(spec.factors[0].a == 3.5);
  REQUIRE(spec.factors[1].a == 3.0);
  REQUIRE(spec.factors[2].a == 2.5);
  for (const auto& f : spec.factors) REQUIRE(f.b == 1.0);

  // One block leaves nothing to test: the product is empty.
  REQUIRE(lrt::spec_independence(10, lrt::BlockPartition{{4}}).factors.empty());

  const auto full = lrt::spec_independence(800, lrt::BlockPartition{std::vector<int>(40, 18)});
  REQUIRE(full.factors.size() == 702);
  double a_min = 1e300;
  double a_max = 0.0;
  for (const auto& f : full.factors) {
    a_min = std::min(a_min, f.a);
    a_max = std::max(a_max, f.a);
  }
  REQUIRE(a_min == 40.0);
  REQUIRE(a_max == 390.5);

  REQUIRE_THROWS_AS(lrt::spec_independence(9, lrt::BlockPartition{{4, 5}}), lrt::RegimeError);
}

TEST_CASE("regression decomposition enumerates the documented factors") {
  const auto spec = lrt::spec_regression(10, 2, 3, 2);
  REQUIRE(spec.factors.size() == 2);
  REQUIRE(spec.factors[0].a == 2.5);
  REQUIRE(spec.factors[1].a == 2.0);
  for (const auto& f : spec.factors) REQUIRE(f.b == 1.5);

  // With one response coordinate this reduces to the classical variance
  // ratio Beta((n - q)/2, q1/2).
  const auto single = lrt::spec_regression(20, 1, 4, 3);
  REQUIRE(single.factors.size() == 1);
  REQUIRE(single.factors[0].a == 6.5);
  REQUIRE(single.factors[0].b == 2.0);

  REQUIRE_THROWS_AS(lrt::spec_regression(10, 2, 0, 2), lrt::ConfigError);
  REQUIRE_THROWS_AS(lrt::spec_regression(10, 6, 3, 2), lrt::RegimeError);
}

TEST_CASE("exact log moments: known values and additivity") {
  lrt::BetaProductSpec unit;
  unit.factors.push_back({1.0, 1.0});
  const auto moments = lrt::exact_log_moments(unit);
  REQUIRE_THAT(moments.mean, WithinAbs(-1.0, 1e-12));
  REQUIRE_THAT(moments.variance, WithinAbs(1.0, 1e-12));

  lrt::BetaProductSpec first;
  first.factors = {{2.0, 3.0}, {4.5, 1.0}};
  lrt::BetaProductSpec second;
  second.factors = {{7.0, 0.5}};
  lrt::BetaProductSpec merged;
  merged.factors = first.factors;
  merged.factors.insert(merged.factors.end(), second.factors.begin(), second.factors.end());
  const auto a = lrt::exact_log_moments(first);
  const auto b = lrt::exact_log_moments(second);
  const auto ab = lrt::exact_log_moments(merged);
  REQUIRE_THAT(ab.mean, WithinRel(a.mean + b.mean, 1e-13));
  REQUIRE_THAT(ab.variance, WithinRel(a.variance + b.variance, 1e-13));

  REQUIRE_THROWS_AS(lrt::exact_log_moments(lrt::BetaProductSpec{}), lrt::ConfigError);
}

TEST_CASE("sampled log products match their exact moments") {
  lrt::BetaProductSpec specs[3];
  specs[0].factors = {{1.0, 1.0}};
  specs[1].factors = {{3.5, 1.0}, {3.0, 1.0}, {2.5, 1.0}};
  specs[2].factors = {{10.0, 2.5}, {0.75, 0.75}, {25.0, 12.0}, {4.0, 0.5}};
  const int draws = 20000;
  std::uint64_t index = 0;
  for (const auto& spec : specs) {
    const auto moments = lrt::exact_log_moments(spec);
    lrt::RngStream rng(77, 0, index++);
    double mean = 0.0;
    double m2 = 0.0;
    for (int i = 0; i < draws; ++i) {
      const double value = lrt::sample_log_product(spec, rng);
      mean += value;
      m2 += value * value;
    }
    mean /= draws;
    const double variance = (m2 - draws * mean * mean) / (draws - 1);
    REQUIRE_THAT(mean, WithinAbs(moments.mean, 4.0 * std::sqrt(moments.variance / draws)));
    REQUIRE_THAT(variance,
                 WithinAbs(moments.variance,
                           6.0 * moments.variance * std::sqrt(2.0 / draws)));
  }
  lrt::RngStream rng(77);
  REQUIRE_THROWS_AS(lrt::sample_log_product(lrt::BetaProductSpec{}, rng), lrt::ConfigError);
}

TEST_CASE("sampling is deterministic for a fixed stream") {
  lrt::BetaProductSpec spec;
  spec.factors = {{3.0, 2.0}, {5.5, 0.5}};
  lrt::RngStream a(123, 2, 9);
  lrt::RngStream b(123, 2, 9);
  for (int i = 0; i < 10; ++i) {
    REQUIRE(lrt::sample_log_product(spec, a) == lrt::sample_log_product(spec, b));
  }
}

TEST_CASE("tetragamma matches references, recurrence and asymptotics") {
  REQUIRE_THAT(lrt::detail::tetragamma(1.0), WithinRel(kPi * kPi * kPi * kPi / 15.0, 1e-13));
  for (double x : {0.4, 1.7, 5.2, 40.0}) {
    REQUIRE_THAT(lrt::detail::tetragamma(x),
                 WithinRel(lrt::detail::tetragamma(x + 1.0) + 6.0 / (x * x * x * x), 1e-12));
  }
  REQUIRE_THAT(lrt::detail::tetragamma(1e6), WithinRel(2e-18, 1e-5));
  REQUIRE_THROWS_AS(lrt::detail::tetragamma(0.0), lrt::DomainError);
}

TEST_CASE("normal-limit diagnostics behave on known products") {
  lrt::BetaProductSpec unit;
  unit.factors.push_back({1.0, 1.0});
  // log Beta(1,1) is a negative standard exponential: variance 1 and fourth
  // central moment 9.
  const auto diag = lrt::verify_clt_conditions(unit, 1.0);
  REQUIRE_THAT(diag.sup_term, WithinAbs(1.0, 1e-12));
  REQUIRE_THAT(diag.variance_sum, WithinAbs(1.0, 1e-12));
  REQUIRE_THAT(diag.max_fourth_to_second, WithinAbs(9.0, 1e-9));

  // Across the full-size independence product the normalized variance must
  // sum to one while every single term stays negligible.
  const auto spec = lrt::spec_independence(800, lrt::BlockPartition{std::vector<int>(40, 18)});
  const auto moments = lrt::exact_log_moments(spec);
  const auto big = lrt::verify_clt_conditions(spec, std::sqrt(moments.variance));
  REQUIRE_THAT(big.variance_sum, WithinRel(1.0, 1e-12));
  REQUIRE(big.sup_term < 0.01);
  REQUIRE(big.max_fourth_to_second < 50.0);

  REQUIRE_THROWS_AS(lrt::verify_clt_conditions(lrt::BetaProductSpec{}, 1.0), lrt::ConfigError);
  REQUIRE_THROWS_AS(lrt::verify_clt_conditions(unit, 0.0), lrt::DomainError);
}

TEST_CASE("the exact product law tracks the asymptotic standardization") {
  // At the full-size independence configuration the exact mean and variance
  // of the log product sit close to the asymptotic center and squared scale.
  const lrt::BlockPartition blocks{std::vector<int>(40, 18)};
  const auto spec = lrt::spec_independence(800, blocks);
  const auto moments = lrt::exact_log_moments(spec);
  const auto st = lrt::standardize_independence(800, blocks, lrt::Regime::growing_q);
  REQUIRE_THAT(moments.mean, WithinAbs(st.center, 0.05));
  REQUIRE_THAT(moments.variance, WithinAbs(st.scale * st.scale, 0.05));
}
