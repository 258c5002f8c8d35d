#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "lrt/beta_oracle.hpp"
#include "lrt/linalg.hpp"
#include "lrt/rng.hpp"
#include "lrt/statistics.hpp"

// Monte Carlo calibration of the standardized tests under their nulls, plus
// a distributional crosscheck of the matrix pipeline against the exact
// Beta-product law.

namespace lrt {

// Sub-stream lanes of the master seed, so replications, design draws and
// oracle draws never overlap.
namespace stream_lane {
inline constexpr std::uint64_t replication = 0;
inline constexpr std::uint64_t design = 1;
inline constexpr std::uint64_t oracle = 2;
}  // namespace stream_lane

struct ExperimentConfig {
  TestKind kind = TestKind::independence;
  int n = 0;                     // rows, for independence and regression
  std::vector<int> blocks;       // block sizes, for independence
  int p = 0;                     // dimension, for regression and grouped tests
  int q1 = 0;                    // tested design columns, for regression
  int q2 = 0;                    // nuisance design columns, for regression
  std::vector<int> group_sizes;  // group sizes, for the grouped tests
  int replications = 0;
  std::uint64_t seed = 0;
  std::uint64_t replication_offset = 0;
  double alpha = 0.05;
  std::vector<Regime> regimes{Regime::growing_q, Regime::fixed_q};
  int threads = 0;  // 0 means use the hardware thread count

  void validate() const {
    if (replications < 1) {
      throw ConfigError("replications must be >= 1; got " + std::to_string(replications));
    }
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
      throw ConfigError("alpha must lie in (0, 1); got " + std::to_string(alpha));
    }
    if (regimes.empty()) throw ConfigError("at least one regime is required");
    if (threads < 0) throw ConfigError("threads must be >= 0; got " + std::to_string(threads));
    switch (kind) {
      case TestKind::independence:
        if (n < 1) throw ConfigError("requires n >= 1; got n = " + std::to_string(n));
        BlockPartition{blocks}.validate();
        break;
      case TestKind::regression:
        if (n < 1) throw ConfigError("requires n >= 1; got n = " + std::to_string(n));
        if (p < 1) throw ConfigError("requires p >= 1; got p = " + std::to_string(p));
        if (q1 < 1 || q2 < 1) {
          throw ConfigError("requires q1 >= 1 and q2 >= 1; got q1 = " + std::to_string(q1) +
                            ", q2 = " + std::to_string(q2));
        }
        break;
      case TestKind::equal_covariance:
      case TestKind::equal_distribution:
        if (p < 1) throw ConfigError("requires p >= 1; got p = " + std::to_string(p));
        if (group_sizes.empty()) throw ConfigError("requires at least one group");
        for (std::size_t j = 0; j < group_sizes.size(); ++j) {
          if (group_sizes[j] < 2) {
            throw ConfigError("group " + std::to_string(j + 1) + " has size " +
                              std::to_string(group_sizes[j]) + "; each group needs n_j >= 2");
          }
        }
        break;
    }
  }
};

struct RegimeResult {
  Regime regime = Regime::growing_q;
  std::vector<double> pvalues;  // in replication order, failures skipped
  double rejection_rate = 0.0;
  double ks = 0.0;
  int excluded = 0;
  std::array<int, 20> histogram{};
};

struct CalibrationReport {
  ExperimentConfig config;
  std::vector<RegimeResult> regimes;
  std::vector<std::uint64_t> stream_indices;    // replication indices consumed
  std::vector<std::uint64_t> excluded_indices;  // indices whose statistic failed
  int excluded = 0;
  double runtime_seconds = 0.0;
};

// One-sample Kolmogorov-Smirnov distance to the uniform law on [0, 1].
inline double ks_uniform(const std::vector<double>& pvalues) {
  if (pvalues.empty()) throw ConfigError("cannot compute a KS distance of an empty sample");
  std::vector<double> sorted(pvalues);
  std::sort(sorted.begin(), sorted.end());
  const double count = static_cast<double>(sorted.size());
  double dist = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    dist = std::max(dist, (i + 1.0) / count - sorted[i]);
    dist = std::max(dist, sorted[i] - i / count);
  }
  return dist;
}

// Two-sample Kolmogorov-Smirnov distance.
inline double ks_two_sample(const std::vector<double>& first, const std::vector<double>& second) {
  if (first.empty() || second.empty()) {
    throw ConfigError("cannot compute a KS distance of an empty sample");
  }
  std::vector<double> a(first);
  std::vector<double> b(second);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double dist = 0.0;
  while (i < a.size() && j < b.size()) {
    const double value = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= value) ++i;
    while (j < b.size() && b[j] <= value) ++j;
    dist = std::max(dist, std::abs(i / na - j / nb));
  }
  return dist;
}

namespace detail {

// Run body(begin, end) over [0, total) split into contiguous chunks, one per
// worker. Results must be written to disjoint slots so the output is
// independent of the thread count.
template <typename Body>
inline void run_chunked(int total, int threads, Body&& body) {
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  workers = std::min(workers, total);
  if (workers <= 1) {
    body(0, total);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(workers));
  const int base = total / workers;
  const int extra = total % workers;
  int begin = 0;
  for (int w = 0; w < workers; ++w) {
    const int end = begin + base + (w < extra ? 1 : 0);
    pool.emplace_back([&body, &failures, w, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        failures[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
    begin = end;
  }
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
}

inline Matrix fill_standard_normal(int rows, int cols, RngStream& rng) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = rng.normal();
  }
  return m;
}

// Design matrix shared by every replication of a regression experiment: an
// intercept column followed by q - 1 standard normal columns.
inline Matrix draw_design(const ExperimentConfig& cfg) {
  RngStream rng(cfg.seed, stream_lane::design, 0);
  const int q = cfg.q1 + cfg.q2;
  Matrix designs(cfg.n, q);
  designs.col(0).setOnes();
  for (int i = 0; i < cfg.n; ++i) {
    for (int j = 1; j < q; ++j) designs(i, j) = rng.normal();
  }
  return designs;
}

// One draw of the test statistic under the null, using the replication
// stream at the given index.
inline double simulated_statistic(const ExperimentConfig& cfg, const Matrix* designs,
                                  std::uint64_t index) {
  RngStream rng(cfg.seed, stream_lane::replication, index);
  switch (cfg.kind) {
    case TestKind::independence: {
      const BlockPartition blocks{cfg.blocks};
      return stat_independence(fill_standard_normal(cfg.n, blocks.total(), rng), blocks);
    }
    case TestKind::regression: {
      RegressionData d;
      d.responses = fill_standard_normal(cfg.n, cfg.p, rng);
      d.designs = *designs;
      d.q1 = cfg.q1;
      return stat_regression(d, Matrix::Zero(cfg.p, cfg.q1));
    }
    case TestKind::equal_covariance:
    case TestKind::equal_distribution: {
      GroupedSample sample;
      sample.groups.reserve(cfg.group_sizes.size());
      for (int size : cfg.group_sizes) {
        sample.groups.push_back(fill_standard_normal(size, cfg.p, rng));
      }
      return cfg.kind == TestKind::equal_covariance ? stat_equal_cov(sample)
                                                    : stat_equal_dist(sample);
    }
  }
  throw ConfigError("unknown test kind");
}

inline Standardization standardize_for(const ExperimentConfig& cfg, Regime regime) {
  switch (cfg.kind) {
    case TestKind::independence:
      return standardize_independence(cfg.n, BlockPartition{cfg.blocks}, regime);
    case TestKind::regression:
      if (regime != Regime::growing_q) {
        throw ConfigError("the regression test has no fixed-q standardization; use growing-q");
      }
      return standardize_regression(cfg.n, cfg.p, cfg.q1, cfg.q2);
    case TestKind::equal_covariance:
      return standardize_equal_cov(cfg.group_sizes, cfg.p, regime);
    case TestKind::equal_distribution:
      return standardize_equal_dist(cfg.group_sizes, cfg.p, regime);
  }
  throw ConfigError("unknown test kind");
}

}  // namespace detail

// Simulate the configured test under its null and summarize the p-value
// distribution per regime. Identical configurations give bit-identical
// reports regardless of the thread count.
inline CalibrationReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();

  std::vector<Standardization> standardizations;
  standardizations.reserve(cfg.regimes.size());
  for (Regime regime : cfg.regimes) {
    standardizations.push_back(detail::standardize_for(cfg, regime));
  }
  Matrix designs;
  if (cfg.kind == TestKind::regression) designs = detail::draw_design(cfg);

  const int reps = cfg.replications;
  std::vector<double> stats(static_cast<std::size_t>(reps), 0.0);
  std::vector<char> ok(static_cast<std::size_t>(reps), 0);
  detail::run_chunked(reps, cfg.threads, [&](int begin, int end) {
    for (int r = begin; r < end; ++r) {
      const std::uint64_t index = cfg.replication_offset + static_cast<std::uint64_t>(r);
      try {
        stats[static_cast<std::size_t>(r)] = detail::simulated_statistic(cfg, &designs, index);
        ok[static_cast<std::size_t>(r)] = 1;
      } catch (const Error&) {
        // A numerically degenerate replication is excluded and counted.
      }
    }
  });

  CalibrationReport report;
  report.config = cfg;
  report.stream_indices.reserve(static_cast<std::size_t>(reps));
  for (int r = 0; r < reps; ++r) {
    const std::uint64_t index = cfg.replication_offset + static_cast<std::uint64_t>(r);
    report.stream_indices.push_back(index);
    if (!ok[static_cast<std::size_t>(r)]) report.excluded_indices.push_back(index);
  }
  report.excluded = static_cast<int>(report.excluded_indices.size());
  if (report.excluded == reps) {
    throw InsufficientDataError("every replication failed; no p-values to summarize");
  }

  for (std::size_t s = 0; s < standardizations.size(); ++s) {
    const Standardization& st = standardizations[s];
    RegimeResult result;
    result.regime = st.regime;
    result.excluded = report.excluded;
    result.pvalues.reserve(static_cast<std::size_t>(reps - report.excluded));
    int rejections = 0;
    for (int r = 0; r < reps; ++r) {
      if (!ok[static_cast<std::size_t>(r)]) continue;
      const double z = (stats[static_cast<std::size_t>(r)] - st.center) / st.scale;
      const double pvalue = std_normal_cdf(z);
      result.pvalues.push_back(pvalue);
      if (pvalue < cfg.alpha) ++rejections;
      const int bin = std::min(19, static_cast<int>(pvalue * 20.0));
      ++result.histogram[static_cast<std::size_t>(std::max(0, bin))];
    }
    result.rejection_rate = static_cast<double>(rejections) / result.pvalues.size();
    result.ks = ks_uniform(result.pvalues);
    report.regimes.push_back(std::move(result));
  }

  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

struct CrosscheckReport {
  double ks = 0.0;
  double ks_critical_1pct = 0.0;
  bool pass = false;
  double mean_gap_se = 0.0;      // |sample mean - exact mean| in standard errors
  double variance_gap_se = 0.0;  // |sample variance - exact variance| in standard errors
  int draws = 0;
  double exact_mean = 0.0;
  double exact_variance = 0.0;
  CltDiagnostics clt;
};

// Compare draws of the matrix-pipeline statistic against draws from its
// exact Beta-product null law. Passing means the two-sample KS distance
// stays below the 1% critical value.
inline CrosscheckReport oracle_crosscheck(const ExperimentConfig& cfg, int draws) {
  if (cfg.kind != TestKind::independence && cfg.kind != TestKind::regression) {
    throw ConfigError("no Beta decomposition available for this test");
  }
  if (draws < 2) throw ConfigError("requires draws >= 2; got " + std::to_string(draws));
  cfg.validate();

  CrosscheckReport report;
  report.draws = draws;
  report.ks_critical_1pct = 1.6276 * std::sqrt(2.0 / draws);

  const BetaProductSpec spec =
      cfg.kind == TestKind::independence
          ? spec_independence(cfg.n, BlockPartition{cfg.blocks})
          : spec_regression(cfg.n, cfg.p, cfg.q1, cfg.q2);
  if (spec.factors.empty()) {
    // A single block makes both the statistic and the product identically
    // zero, so the laws agree exactly.
    report.pass = true;
    return report;
  }

  const LogMoments moments = exact_log_moments(spec);
  report.exact_mean = moments.mean;
  report.exact_variance = moments.variance;
  report.clt = verify_clt_conditions(spec, std::sqrt(moments.variance));

  Matrix designs;
  if (cfg.kind == TestKind::regression) designs = detail::draw_design(cfg);

  std::vector<double> pipeline(static_cast<std::size_t>(draws), 0.0);
  std::vector<double> oracle(static_cast<std::size_t>(draws), 0.0);
  detail::run_chunked(draws, cfg.threads, [&](int begin, int end) {
    for (int r = begin; r < end; ++r) {
      const std::uint64_t index = static_cast<std::uint64_t>(r);
      pipeline[static_cast<std::size_t>(r)] = detail::simulated_statistic(cfg, &designs, index);
      RngStream rng(cfg.seed, stream_lane::oracle, index);
      oracle[static_cast<std::size_t>(r)] = sample_log_product(spec, rng);
    }
  });

  report.ks = ks_two_sample(pipeline, oracle);
  report.pass = report.ks < report.ks_critical_1pct;

  double mean = 0.0;
  for (double value : pipeline) mean += value;
  mean /= draws;
  double variance = 0.0;
  for (double value : pipeline) variance += (value - mean) * (value - mean);
  variance /= draws - 1;
  report.mean_gap_se =
      std::abs(mean - moments.mean) / std::sqrt(moments.variance / draws);
  report.variance_gap_se = std::abs(variance - moments.variance) /
                           (moments.variance * std::sqrt(2.0 / (draws - 1)));
  return report;
}

}  // namespace lrt
