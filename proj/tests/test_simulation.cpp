#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <vector>

#include "lrt/simulation.hpp"

using Catch::Matchers::WithinAbs;

namespace {

lrt::ExperimentConfig grouped_config(lrt::TestKind kind) {
  lrt::ExperimentConfig cfg;
  cfg.kind = kind;
  cfg.p = 4;
  cfg.group_sizes = {12, 14, 13};
  cfg.replications = 25;
  cfg.seed = 99;
  return cfg;
}

}  // namespace

TEST_CASE("uniform KS distance on hand-checkable samples") {
  REQUIRE_THAT(lrt::ks_uniform({0.5}), WithinAbs(0.5, 1e-15));

  std::vector<double> grid(999);
  for (int i = 0; i < 999; ++i) grid[static_cast<std::size_t>(i)] = i / 999.0;
  REQUIRE_THAT(lrt::ks_uniform(grid), WithinAbs(1.0 / 999.0, 1e-12));

  std::vector<double> shuffled{0.9, 0.1, 0.4, 0.7, 0.2};
  std::vector<double> sorted{0.1, 0.2, 0.4, 0.7, 0.9};
  REQUIRE(lrt::ks_uniform(shuffled) == lrt::ks_uniform(sorted));

  REQUIRE_THROWS_AS(lrt::ks_uniform({}), lrt::ConfigError);
}

TEST_CASE("uniform KS distance has the right exceedance rate on true uniforms") {
  // sqrt(n) * D exceeds 1.63 about 1% of the time for genuinely uniform
  // draws, so 100 independent seeds should rarely produce more than a few
  // exceedances.
  const int draws = 10000;
  int exceedances = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    lrt::RngStream rng(seed, 0, 0);
    std::vector<double> sample(draws);
    for (double& value : sample) value = rng.uniform();
    if (std::sqrt(static_cast<double>(draws)) * lrt::ks_uniform(sample) > 1.63) ++exceedances;
  }
  REQUIRE(exceedances <= 5);
}

TEST_CASE("two-sample KS distance on hand-checkable samples") {
  REQUIRE_THAT(lrt::ks_two_sample({1.0, 2.0}, {1.5, 2.5}), WithinAbs(0.5, 1e-15));
  REQUIRE_THAT(lrt::ks_two_sample({3.0, 1.0, 2.0}, {2.0, 3.0, 1.0}), WithinAbs(0.0, 1e-15));
  REQUIRE_THAT(lrt::ks_two_sample({0.0, 1.0}, {10.0}), WithinAbs(1.0, 1e-15));
  REQUIRE_THROWS_AS(lrt::ks_two_sample({}, {1.0}), lrt::ConfigError);
}

TEST_CASE("experiment configs are validated") {
  lrt::ExperimentConfig cfg = grouped_config(lrt::TestKind::equal_distribution);
  cfg.replications = 0;
  REQUIRE_THROWS_AS(cfg.validate(), lrt::ConfigError);

  cfg = grouped_config(lrt::TestKind::equal_distribution);
  cfg.alpha = 1.0;
  REQUIRE_THROWS_AS(cfg.validate(), lrt::ConfigError);

  cfg = grouped_config(lrt::TestKind::equal_distribution);
  cfg.threads = -1;
  REQUIRE_THROWS_AS(cfg.validate(), lrt::ConfigError);

  cfg = grouped_config(lrt::TestKind::equal_distribution);
  cfg.regimes.clear();
  REQUIRE_THROWS_AS(cfg.validate(), lrt::ConfigError);

  cfg = grouped_config(lrt::TestKind::equal_covariance);
  cfg.group_sizes = {12, 1};
  REQUIRE_THROWS_AS(cfg.validate(), lrt::ConfigError);

  cfg = grouped_config(lrt::TestKind::independence);
  cfg.n = 30;
  REQUIRE_THROWS_AS(cfg.validate(), lrt::ConfigError);  // no blocks given
}

TEST_CASE("calibration runs are reproducible and thread-count independent") {
  lrt::ExperimentConfig cfg;
  cfg.kind = lrt::TestKind::independence;
  cfg.n = 30;
  cfg.blocks = {2, 3};
  cfg.replications = 50;
  cfg.seed = 4242;
  cfg.threads = 1;

  const auto once = lrt::run_experiment(cfg);
  const auto again = lrt::run_experiment(cfg);
  cfg.threads = 3;
  const auto threaded = lrt::run_experiment(cfg);

  REQUIRE(once.regimes.size() == 2);
  for (std::size_t s = 0; s < once.regimes.size(); ++s) {
    REQUIRE(once.regimes[s].pvalues == again.regimes[s].pvalues);
    REQUIRE(once.regimes[s].pvalues == threaded.regimes[s].pvalues);
  }
  REQUIRE(once.stream_indices == threaded.stream_indices);
}

TEST_CASE("replication offsets let split runs merge into one stream") {
  lrt::ExperimentConfig full = grouped_config(lrt::TestKind::equal_covariance);
  full.replications = 40;
  const auto whole = lrt::run_experiment(full);

  lrt::ExperimentConfig head = full;
  head.replications = 25;
  lrt::ExperimentConfig tail = full;
  tail.replications = 15;
  tail.replication_offset = 25;
  const auto first = lrt::run_experiment(head);
  const auto second = lrt::run_experiment(tail);

  REQUIRE(whole.excluded == 0);
  REQUIRE(whole.stream_indices.front() == 0);
  REQUIRE(whole.stream_indices.back() == 39);
  REQUIRE(second.stream_indices.front() == 25);
  for (std::size_t s = 0; s < whole.regimes.size(); ++s) {
    std::vector<double> merged = first.regimes[s].pvalues;
    merged.insert(merged.end(), second.regimes[s].pvalues.begin(),
                  second.regimes[s].pvalues.end());
    REQUIRE(merged == whole.regimes[s].pvalues);
  }
}

TEST_CASE("per-regime summaries are consistent with the stored p-values") {
  lrt::ExperimentConfig cfg = grouped_config(lrt::TestKind::equal_distribution);
  cfg.replications = 60;
  const auto report = lrt::run_experiment(cfg);

  REQUIRE(report.regimes.size() == 2);
  REQUIRE(report.regimes[0].regime == lrt::Regime::growing_q);
  REQUIRE(report.regimes[1].regime == lrt::Regime::fixed_q);
  for (const auto& result : report.regimes) {
    REQUIRE(result.pvalues.size() + static_cast<std::size_t>(result.excluded) ==
            static_cast<std::size_t>(cfg.replications));
    int rejections = 0;
    for (double pvalue : result.pvalues) {
      REQUIRE(pvalue >= 0.0);
      REQUIRE(pvalue <= 1.0);
      if (pvalue < cfg.alpha) ++rejections;
    }
    REQUIRE_THAT(result.rejection_rate,
                 WithinAbs(static_cast<double>(rejections) / result.pvalues.size(), 1e-15));
    REQUIRE(result.ks == lrt::ks_uniform(result.pvalues));
    const int binned = std::accumulate(result.histogram.begin(), result.histogram.end(), 0);
    REQUIRE(binned == static_cast<int>(result.pvalues.size()));
  }
}

TEST_CASE("simulated p-values equal the single-test pipeline on the same draws") {
  lrt::ExperimentConfig cfg = grouped_config(lrt::TestKind::equal_distribution);
  const auto report = lrt::run_experiment(cfg);
  REQUIRE(report.excluded == 0);

  for (std::uint64_t index : {std::uint64_t{0}, std::uint64_t{7}, std::uint64_t{24}}) {
    lrt::RngStream rng(cfg.seed, lrt::stream_lane::replication, index);
    lrt::GroupedSample sample;
    for (int size : cfg.group_sizes) {
      sample.groups.push_back(lrt::detail::fill_standard_normal(size, cfg.p, rng));
    }
    lrt::TestOptions options;
    options.regime = lrt::Regime::growing_q;
    const auto report_one = lrt::run_equal_dist_test(sample, options);
    REQUIRE(report.regimes[0].pvalues[index] == report_one.p_value);
  }
}

TEST_CASE("regression experiments fix the design across replications") {
  lrt::ExperimentConfig cfg;
  cfg.kind = lrt::TestKind::regression;
  cfg.n = 40;
  cfg.p = 3;
  cfg.q1 = 2;
  cfg.q2 = 2;
  cfg.replications = 30;
  cfg.seed = 17;

  // The default pair of regimes is rejected because only the growing-q
  // standardization exists for this test.
  REQUIRE_THROWS_AS(lrt::run_experiment(cfg), lrt::ConfigError);

  cfg.regimes = {lrt::Regime::growing_q};
  const auto report = lrt::run_experiment(cfg);
  REQUIRE(report.excluded == 0);
  REQUIRE(report.regimes.size() == 1);

  const lrt::Matrix designs = lrt::detail::draw_design(cfg);
  REQUIRE(designs.col(0).isConstant(1.0));
  for (std::uint64_t index : {std::uint64_t{0}, std::uint64_t{11}}) {
    const double stat = lrt::detail::simulated_statistic(cfg, &designs, index);
    const auto st = lrt::standardize_regression(cfg.n, cfg.p, cfg.q1, cfg.q2);
    const double pvalue = lrt::std_normal_cdf((stat - st.center) / st.scale);
    REQUIRE(report.regimes[0].pvalues[index] == pvalue);
  }
}

TEST_CASE("pipeline statistics match the exact product law for independence") {
  lrt::ExperimentConfig cfg;
  cfg.kind = lrt::TestKind::independence;
  cfg.n = 30;
  cfg.blocks = {2, 3, 4};
  cfg.replications = 1;
  cfg.seed = 11;

  const auto report = lrt::oracle_crosscheck(cfg, 2000);
  REQUIRE(report.draws == 2000);
  REQUIRE_THAT(report.ks_critical_1pct, WithinAbs(1.6276 * std::sqrt(2.0 / 2000.0), 1e-12));
  REQUIRE(report.pass);
  REQUIRE(report.ks < report.ks_critical_1pct);
  REQUIRE(report.mean_gap_se < 4.0);
  REQUIRE(report.variance_gap_se < 5.0);
  REQUIRE_THAT(report.clt.variance_sum, WithinAbs(1.0, 1e-12));
  // Factors with b = 1 are exactly log-exponential, whose fourth central
  // moment is nine times the squared variance.
  REQUIRE_THAT(report.clt.max_fourth_to_second, WithinAbs(9.0, 1e-6));
}

TEST_CASE("pipeline statistics match the exact product law for regression") {
  lrt::ExperimentConfig cfg;
  cfg.kind = lrt::TestKind::regression;
  cfg.n = 40;
  cfg.p = 3;
  cfg.q1 = 2;
  cfg.q2 = 2;
  cfg.replications = 1;
  cfg.seed = 7;
  cfg.regimes = {lrt::Regime::growing_q};

  const auto report = lrt::oracle_crosscheck(cfg, 2000);
  REQUIRE(report.pass);
  REQUIRE(report.exact_variance > 0.0);
}

TEST_CASE("crosschecks reject unsupported configurations") {
  lrt::ExperimentConfig cfg = grouped_config(lrt::TestKind::equal_covariance);
  REQUIRE_THROWS_WITH(lrt::oracle_crosscheck(cfg, 100),
                      Catch::Matchers::ContainsSubstring("no Beta decomposition"));

  lrt::ExperimentConfig ind;
  ind.kind = lrt::TestKind::independence;
  ind.n = 30;
  ind.blocks = {2, 3};
  ind.replications = 1;
  REQUIRE_THROWS_AS(lrt::oracle_crosscheck(ind, 1), lrt::ConfigError);

  ind.n = 5;
  ind.blocks = {2, 4};
  REQUIRE_THROWS_AS(lrt::oracle_crosscheck(ind, 100), lrt::RegimeError);
}

TEST_CASE("a single block short-circuits the crosscheck") {
  lrt::ExperimentConfig cfg;
  cfg.kind = lrt::TestKind::independence;
  cfg.n = 30;
  cfg.blocks = {4};
  cfg.replications = 1;
  const auto report = lrt::oracle_crosscheck(cfg, 100);
  REQUIRE(report.pass);
  REQUIRE(report.ks == 0.0);
}
