#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "lrt/linalg.hpp"
#include "lrt/specfun.hpp"

// The four log-likelihood-ratio statistics and their rival normal
// standardizations. Every test rejects for small likelihood ratios, so
// p-values are left-tail: p = Phi((statistic - center)/scale).

namespace lrt {

enum class TestKind { independence, regression, equal_covariance, equal_distribution };
enum class Regime { growing_q, fixed_q };

inline const char* to_string(TestKind kind) {
  switch (kind) {
    case TestKind::independence: return "independence";
    case TestKind::regression: return "regression";
    case TestKind::equal_covariance: return "equal-cov";
    case TestKind::equal_distribution: return "equal-dist";
  }
  return "unknown";
}

inline const char* to_string(Regime regime) {
  return regime == Regime::growing_q ? "growing-q" : "fixed-q";
}

inline TestKind test_kind_from_string(const std::string& name) {
  if (name == "independence") return TestKind::independence;
  if (name == "regression") return TestKind::regression;
  if (name == "equal-cov") return TestKind::equal_covariance;
  if (name == "equal-dist") return TestKind::equal_distribution;
  throw ConfigError("unknown test kind '" + name +
                    "'; expected independence, regression, equal-cov or equal-dist");
}

inline Regime regime_from_string(const std::string& name) {
  if (name == "growing-q") return Regime::growing_q;
  if (name == "fixed-q") return Regime::fixed_q;
  throw ConfigError("unknown regime '" + name + "'; expected growing-q or fixed-q");
}

// A (center, scale) pair that turns one statistic into an asymptotically
// standard normal z-score under the null.
struct Standardization {
  TestKind kind{};
  Regime regime{};
  double center = 0.0;
  double scale = 0.0;
};

struct TestReport {
  TestKind kind{};
  Regime regime{};
  double statistic = 0.0;
  double center = 0.0;
  double scale = 0.0;
  double z = 0.0;
  double p_value = 0.0;
  double alpha = 0.0;
  bool reject = false;
  std::map<std::string, double> diagnostics;
};

struct TestOptions {
  Regime regime = Regime::growing_q;
  double alpha = 0.05;
};

namespace detail {

constexpr double kDegenerateScale = 1e-12;

inline void require_group_sizes(const std::vector<int>& sizes, int p, int min_excess,
                                const char* bound_text) {
  if (sizes.empty()) throw ConfigError("requires at least one group");
  if (p < 1) throw ConfigError("requires p >= 1; got p = " + std::to_string(p));
  for (std::size_t j = 0; j < sizes.size(); ++j) {
    if (sizes[j] <= p + min_excess) {
      throw InsufficientDataError(std::string("requires ") + bound_text + "; group " +
                                  std::to_string(j + 1) + " has n_j = " + std::to_string(sizes[j]) +
                                  ", p = " + std::to_string(p));
    }
  }
}

struct IndependenceParts {
  double logdet_cov = 0.0;
  double sum_logdet_blocks = 0.0;
};

inline IndependenceParts independence_parts(const Matrix& x, const BlockPartition& blocks) {
  blocks.validate();
  const int n = static_cast<int>(x.rows());
  const int p = static_cast<int>(x.cols());
  if (blocks.total() != p) {
    throw ConfigError("block sizes sum to " + std::to_string(blocks.total()) +
                      ", but the data has p = " + std::to_string(p) + " columns");
  }
  if (n <= p + 1) {
    throw InsufficientDataError("requires n > p + 1; got n = " + std::to_string(n) +
                                ", p = " + std::to_string(p));
  }
  const Matrix cov = sample_covariance(x);
  IndependenceParts parts;
  try {
    parts.logdet_cov = cholesky_logdet(cov);
  } catch (const SingularMatrixError& e) {
    throw RankError("sample covariance is singular (pivot " + std::to_string(e.pivot) +
                    "); the test requires n > p with data of full rank (n = " +
                    std::to_string(n) + ", p = " + std::to_string(p) + ")");
  }
  for (int i = 0; i < blocks.count(); ++i) {
    const int off = blocks.offset(i);
    const int size = blocks.sizes[i];
    try {
      parts.sum_logdet_blocks += cholesky_logdet(cov.block(off, off, size, size));
    } catch (const SingularMatrixError& e) {
      throw RankError("diagonal block " + std::to_string(i + 1) +
                      " of the sample covariance is singular (pivot " + std::to_string(e.pivot) +
                      ")");
    }
  }
  return parts;
}

struct GroupedParts {
  std::vector<int> sizes;
  int p = 0;
  std::vector<double> logdet_within;   // log|A_j|
  double sum_logdet_within = 0.0;      // sum_j log|A_j|
  double logdet_pooled = 0.0;          // log|A|
  double logdet_total = 0.0;           // log|B|, only when requested
};

inline GroupedParts grouped_parts(const GroupedSample& s, bool need_total) {
  const std::vector<int> sizes = s.sizes();
  require_group_sizes(sizes, s.dim(), 1, "n_j > p + 1");
  const ScatterMatrices scatter = scatter_matrices(s);

  GroupedParts parts;
  parts.sizes = sizes;
  parts.p = s.dim();
  parts.logdet_within.reserve(scatter.within.size());
  for (std::size_t j = 0; j < scatter.within.size(); ++j) {
    try {
      parts.logdet_within.push_back(cholesky_logdet(scatter.within[j]));
    } catch (const SingularMatrixError& e) {
      throw RankError("within-group scatter of group " + std::to_string(j + 1) +
                      " is singular (pivot " + std::to_string(e.pivot) +
                      "); requires n_j > p with data of full rank");
    }
    parts.sum_logdet_within += parts.logdet_within.back();
  }
  try {
    parts.logdet_pooled = cholesky_logdet(scatter.pooled);
  } catch (const SingularMatrixError& e) {
    throw RankError("pooled scatter matrix is singular (pivot " + std::to_string(e.pivot) + ")");
  }
  if (need_total) {
    try {
      parts.logdet_total = cholesky_logdet(scatter.total);
    } catch (const SingularMatrixError& e) {
      throw RankError("total scatter matrix is singular (pivot " + std::to_string(e.pivot) + ")");
    }
  }
  return parts;
}

// log of the degrees-of-freedom-modified equality-of-covariances ratio,
// assembled from precomputed log-determinants.
inline double equal_cov_stat_from_parts(const GroupedParts& parts) {
  const double p = parts.p;
  double n = 0.0;
  for (int size : parts.sizes) n += size;
  const double q = static_cast<double>(parts.sizes.size());
  double value = 0.0;
  for (std::size_t j = 0; j < parts.sizes.size(); ++j) {
    const double m = parts.sizes[j] - 1.0;
    value += 0.5 * m * (parts.logdet_within[j] - p * std::log(m));
  }
  value -= 0.5 * (n - q) * (parts.logdet_pooled - p * std::log(n - q));
  return value;
}

// log of the plain (sample-size-weighted) equality-of-covariances ratio,
// kept as a diagnostic companion to the modified statistic.
inline double equal_cov_plain_from_parts(const GroupedParts& parts) {
  const double p = parts.p;
  double n = 0.0;
  for (int size : parts.sizes) n += size;
  double value = 0.0;
  for (std::size_t j = 0; j < parts.sizes.size(); ++j) {
    const double m = static_cast<double>(parts.sizes[j]);
    value += 0.5 * m * (parts.logdet_within[j] - p * std::log(m));
  }
  value -= 0.5 * n * (parts.logdet_pooled - p * std::log(n));
  return value;
}

inline double equal_dist_stat_from_parts(const GroupedParts& parts) {
  const double p = parts.p;
  double n = 0.0;
  for (int size : parts.sizes) n += size;
  double value = 0.0;
  for (std::size_t j = 0; j < parts.sizes.size(); ++j) {
    const double m = static_cast<double>(parts.sizes[j]);
    value += 0.5 * m * (parts.logdet_within[j] - p * std::log(m));
  }
  value -= 0.5 * n * (parts.logdet_total - p * std::log(n));
  return value;
}

// Deterministic part of the gap between the plain and modified
// equality-of-covariances statistics: a function of the group sizes alone.
inline double equal_cov_gap_deterministic(const std::vector<int>& sizes, int p) {
  const double pp = p;
  double n = 0.0;
  for (int size : sizes) n += size;
  const double q = static_cast<double>(sizes.size());
  double value = 0.0;
  for (int size : sizes) {
    const double m = static_cast<double>(size);
    value += 0.5 * pp * m * std::log((m - 1.0) / m);
    value -= 0.5 * pp * std::log((m - 1.0) / (n - q));
  }
  value -= 0.5 * pp * n * std::log((n - q) / n);
  return value;
}

// Full closed form for that gap: the deterministic part plus a correction
// built from the same within/pooled log-determinants.
inline double equal_cov_gap_closed_form(const GroupedParts& parts) {
  const double q = static_cast<double>(parts.sizes.size());
  return equal_cov_gap_deterministic(parts.sizes, parts.p) +
         0.5 * (parts.sum_logdet_within - q * parts.logdet_pooled);
}

}  // namespace detail

// (2/n) log of the block-independence likelihood ratio:
// log|cov| - sum_i log|cov_ii| over the diagonal blocks. Always <= 0 up to
// rounding.
inline double stat_independence(const Matrix& x, const BlockPartition& blocks) {
  const auto parts = detail::independence_parts(x, blocks);
  return parts.logdet_cov - parts.sum_logdet_blocks;
}

// (2/n) log of the regression likelihood ratio for the hypothesis that the
// coefficients of the first q1 design columns equal beta01:
// log|full residual covariance| - log|null residual covariance|.
inline double stat_regression(const RegressionData& d, const Matrix& beta01) {
  d.validate();
  if (d.n() <= d.q() + d.p()) {
    throw InsufficientDataError("requires n > q + p; got n = " + std::to_string(d.n()) +
                                ", q = " + std::to_string(d.q()) +
                                ", p = " + std::to_string(d.p()));
  }
  const ResidualCovariances cov = regression_residual_covariances(d, beta01);
  double logdet_full = 0.0;
  double logdet_null = 0.0;
  try {
    logdet_full = cholesky_logdet(cov.full);
    logdet_null = cholesky_logdet(cov.null);
  } catch (const SingularMatrixError& e) {
    throw RankError("residual covariance is singular (pivot " + std::to_string(e.pivot) +
                    "); requires n - q >= p with responses of full rank");
  }
  return logdet_full - logdet_null;
}

// log of the degrees-of-freedom-modified likelihood ratio for equality of
// the q group covariances.
inline double stat_equal_cov(const GroupedSample& s) {
  return detail::equal_cov_stat_from_parts(detail::grouped_parts(s, false));
}

// log of the likelihood ratio for equality of the q group distributions
// (common mean and covariance).
inline double stat_equal_dist(const GroupedSample& s) {
  return detail::equal_dist_stat_from_parts(detail::grouped_parts(s, true));
}

// Standardization of the block-independence statistic. The growing-q center
// uses the finite-n variance plug-in inside its bias term; the fixed-q
// variant carries -3/2 corrections and evaluates the variance at n - 1.
inline Standardization standardize_independence(int n, const BlockPartition& blocks,
                                                Regime regime) {
  blocks.validate();
  const int p = blocks.total();
  if (n <= p + 1) {
    throw InsufficientDataError("requires n > p + 1; got n = " + std::to_string(n) +
                                ", p = " + std::to_string(p));
  }
  const double nn = n;
  const double pp = p;

  double variance = 0.0;
  double center = 0.0;
  if (regime == Regime::growing_q) {
    for (int size : blocks.sizes) variance += std::log1p(-size / nn);
    variance = 2.0 * (variance - std::log1p(-pp / nn));
    if (!(variance > detail::kDegenerateScale)) {
      throw DegenerateScaleError(
          "standardization scale is degenerate (sigma^2 = " + std::to_string(variance) +
          "); a single block yields a zero-variance statistic");
    }
    for (int size : blocks.sizes) {
      center += (nn - size - 1.0) * std::log1p(-size / (nn - 1.0));
    }
    center -= (nn - pp - 1.0) * std::log1p(-pp / (nn - 1.0));
    center -= 0.25 * variance;
  } else {
    for (int size : blocks.sizes) variance += std::log1p(-size / (nn - 1.0));
    variance = 2.0 * (variance - std::log1p(-pp / (nn - 1.0)));
    if (!(variance > detail::kDegenerateScale)) {
      throw DegenerateScaleError(
          "standardization scale is degenerate (sigma^2 = " + std::to_string(variance) +
          "); a single block yields a zero-variance statistic");
    }
    for (int size : blocks.sizes) {
      center += (nn - size - 1.5) * std::log1p(-size / (nn - 1.0));
    }
    center -= (nn - pp - 1.5) * std::log1p(-pp / (nn - 1.0));
  }
  return Standardization{TestKind::independence, regime, center, std::sqrt(variance)};
}

// Standardization of the regression statistic. Only one regime exists: the
// number of tested coefficients q1 grows with the dimension.
inline Standardization standardize_regression(int n, int p, int q1, int q2) {
  if (q1 < 1 || q2 < 1) {
    throw ConfigError("requires q1 >= 1 and q2 >= 1; got q1 = " + std::to_string(q1) +
                      ", q2 = " + std::to_string(q2));
  }
  if (p < 1) throw ConfigError("requires p >= 1; got p = " + std::to_string(p));
  const double q = static_cast<double>(q1) + static_cast<double>(q2);
  const double nn = n;
  const double pp = p;
  if (pp >= nn - q) {
    throw RegimeError("requires p < n - q; got p = " + std::to_string(p) + ", n - q = " +
                      std::to_string(nn - q));
  }
  if (nn - q - pp <= 1.0) {
    throw InsufficientDataError("requires n - q - p > 1; got n = " + std::to_string(n) +
                                ", q = " + std::to_string(static_cast<int>(q)) +
                                ", p = " + std::to_string(p));
  }
  const double y1 = pp / q1;
  const double y2 = pp / (nn - q);
  const double variance =
      2.0 * (std::log((nn - q) / (nn - q - pp)) - std::log((y1 + y2) / (y1 + y2 - y1 * y2)));
  if (!(variance > detail::kDegenerateScale)) {
    throw DegenerateScaleError("standardization scale is degenerate (sigma^2 = " +
                               std::to_string(variance) + ")");
  }
  const double center = (nn - q2 - 1.0) * std::log((nn - q - 1.0) / (nn - q2 - 1.0)) +
                        q1 * std::log((nn - q - pp - 1.0) / (nn - q - 1.0)) +
                        (nn - q2 - pp - 1.0) * std::log((nn - q2 - pp - 1.0) / (nn - q - pp - 1.0)) +
                        0.25 * variance;
  return Standardization{TestKind::regression, Regime::growing_q, center, std::sqrt(variance)};
}

// Standardization of the modified equality-of-covariances statistic.
inline Standardization standardize_equal_cov(const std::vector<int>& group_sizes, int p,
                                             Regime regime) {
  detail::require_group_sizes(group_sizes, p, 2, "n_j > p + 2");
  const double pp = p;
  const double q = static_cast<double>(group_sizes.size());
  double n = 0.0;
  for (int size : group_sizes) n += size;
  if (n - q <= pp) {
    throw InsufficientDataError("requires n - q > p; got n = " + std::to_string(n) + ", q = " +
                                std::to_string(static_cast<int>(q)) + ", p = " + std::to_string(p));
  }

  double center = 0.0;
  double scale = 0.0;
  if (regime == Regime::growing_q) {
    double sigma_sq = 0.0;
    for (int size : group_sizes) {
      const double m = size - 1.0;
      sigma_sq += m * m * std::log(m / (m - pp));
    }
    sigma_sq = sigma_sq / (2.0 * pp * (n - q)) - 0.5;
    if (!(sigma_sq > detail::kDegenerateScale)) {
      throw DegenerateScaleError("standardization scale is degenerate (sigma^2 = " +
                                 std::to_string(sigma_sq) + ")");
    }
    for (int size : group_sizes) {
      const double m = static_cast<double>(size);
      center += 0.5 * (m - 1.0) *
                ((m - 1.5) * std::log((m - 2.0) / (m - pp - 2.0)) -
                 pp * std::log((m - 1.0) / (m - pp - 2.0)));
    }
    center -= 0.5 * (n - q) * (n - q - pp) * std::log((n - q) / (n - q - pp));
    scale = std::sqrt(pp * (n - q)) * std::sqrt(sigma_sq);
  } else {
    double center_sum = 0.0;
    double var_sum = 0.0;
    for (int size : group_sizes) {
      const double m = size - 1.0;
      const double log_term = std::log1p(-pp / m);
      center_sum += m * (2.0 * m - 2.0 * pp - 1.0) * log_term;
      var_sum += (m / (n - q)) * (m / (n - q)) * log_term;
    }
    center = 0.25 * ((n - q) * (2.0 * n - 2.0 * pp - 2.0 * q - 1.0) * std::log1p(-pp / (n - q)) -
                     center_sum);
    const double s1_sq = 0.5 * (std::log1p(-pp / (n - q)) - var_sum);
    if (!(s1_sq > 0.0)) {
      throw DegenerateScaleError("standardization scale is degenerate (sigma^2 = " +
                                 std::to_string(s1_sq) + ")");
    }
    scale = (n - q) * std::sqrt(s1_sq);
  }
  if (!(scale > detail::kDegenerateScale)) {
    throw DegenerateScaleError("standardization scale is degenerate (scale = " +
                               std::to_string(scale) + ")");
  }
  return Standardization{TestKind::equal_covariance, regime, center, scale};
}

// Standardization of the equality-of-distributions statistic.
inline Standardization standardize_equal_dist(const std::vector<int>& group_sizes, int p,
                                              Regime regime) {
  detail::require_group_sizes(group_sizes, p, 2, "n_j > p + 2");
  const double pp = p;
  const double q = static_cast<double>(group_sizes.size());
  double n = 0.0;
  for (int size : group_sizes) n += size;
  if (n - q <= pp) {
    throw InsufficientDataError("requires n - q > p; got n = " + std::to_string(n) + ", q = " +
                                std::to_string(static_cast<int>(q)) + ", p = " + std::to_string(p));
  }

  double center = 0.0;
  double scale = 0.0;
  if (regime == Regime::growing_q) {
    if (n / 2.0 <= pp + 1.0) {
      throw InsufficientDataError("requires n/2 > p + 1; got n = " + std::to_string(n) +
                                  ", p = " + std::to_string(p));
    }
    double sigma_sq = 0.0;
    for (int size : group_sizes) {
      const double m = static_cast<double>(size);
      sigma_sq += m * m * std::log((m - 1.0) / (m - pp - 1.0));
    }
    sigma_sq = sigma_sq / (2.0 * pp * n) - 0.5;
    if (!(sigma_sq > detail::kDegenerateScale)) {
      throw DegenerateScaleError("standardization scale is degenerate (sigma^2 = " +
                                 std::to_string(sigma_sq) + ")");
    }
    for (int size : group_sizes) {
      const double m = static_cast<double>(size);
      center += 0.5 * m *
                ((m - pp - 1.5) * std::log((m - 2.0) / (m - pp - 2.0)) +
                 pp * std::log((m - 2.0) / (n - q)) - pp * std::log(m));
    }
    const double half_n = 0.5 * n;
    const double half_q = 0.5 * q;
    center += half_n * (pp * std::log((half_n - 1.0) / (half_n + half_q - 1.5)) +
                        (n - q - pp) * std::log((n - q - pp) / (n - q)) + pp * std::log(n) +
                        (half_n - pp - 1.0) * std::log((half_n - 1.0) / (half_n - pp - 1.0)) +
                        (half_n - pp + half_q - 1.5) *
                            std::log((half_n - pp + half_q - 1.5) / (half_n + half_q - 1.5)));
    scale = std::sqrt(pp * n) * std::sqrt(sigma_sq);
  } else {
    double center_sum = 0.0;
    double ratio_sum = 0.0;
    double var_sum = 0.0;
    for (int size : group_sizes) {
      const double m = static_cast<double>(size);
      const double log_term = std::log1p(-pp / (m - 1.0));
      center_sum += m * (2.0 * pp - 2.0 * m + 3.0) * log_term;
      ratio_sum += pp / m;
      var_sum += (m / n) * (m / n) * log_term;
    }
    center = 0.25 * (-2.0 * q * pp - ratio_sum - n * (2.0 * pp - 2.0 * n + 3.0) * std::log1p(-pp / n) +
                     center_sum);
    const double s1_sq = 0.5 * (std::log1p(-pp / n) - var_sum);
    if (!(s1_sq > 0.0)) {
      throw DegenerateScaleError("standardization scale is degenerate (sigma^2 = " +
                                 std::to_string(s1_sq) + ")");
    }
    scale = n * std::sqrt(s1_sq);
  }
  if (!(scale > detail::kDegenerateScale)) {
    throw DegenerateScaleError("standardization scale is degenerate (scale = " +
                               std::to_string(scale) + ")");
  }
  return Standardization{TestKind::equal_distribution, regime, center, scale};
}

// Combine a statistic value with a standardization into a z-score, left-tail
// p-value and level-alpha decision.
inline TestReport assemble_report(double statistic, const Standardization& standardization,
                                  double alpha, std::map<std::string, double> diagnostics = {}) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw ConfigError("alpha must lie in (0, 1); got " + std::to_string(alpha));
  }
  if (!(standardization.scale > detail::kDegenerateScale)) {
    throw DegenerateScaleError("standardization scale is degenerate (scale = " +
                               std::to_string(standardization.scale) + ")");
  }
  if (!std::isfinite(statistic)) {
    throw RankError("statistic is not finite; the input data is numerically degenerate");
  }
  TestReport report;
  report.kind = standardization.kind;
  report.regime = standardization.regime;
  report.statistic = statistic;
  report.center = standardization.center;
  report.scale = standardization.scale;
  report.z = (statistic - standardization.center) / standardization.scale;
  report.p_value = std_normal_cdf(report.z);
  report.alpha = alpha;
  report.reject = report.p_value < alpha;
  report.diagnostics = std::move(diagnostics);
  return report;
}

inline TestReport run_independence_test(const Matrix& x, const BlockPartition& blocks,
                                        const TestOptions& options = {}) {
  const auto parts = detail::independence_parts(x, blocks);
  const Standardization standardization =
      standardize_independence(static_cast<int>(x.rows()), blocks, options.regime);
  return assemble_report(parts.logdet_cov - parts.sum_logdet_blocks, standardization,
                         options.alpha,
                         {{"logdet_cov", parts.logdet_cov},
                          {"sum_logdet_blocks", parts.sum_logdet_blocks}});
}

inline TestReport run_regression_test(const RegressionData& d, const Matrix& beta01,
                                      const TestOptions& options = {}) {
  if (options.regime != Regime::growing_q) {
    throw ConfigError("the regression test has no fixed-q standardization; use growing-q");
  }
  d.validate();
  if (d.n() <= d.q() + d.p()) {
    throw InsufficientDataError("requires n > q + p; got n = " + std::to_string(d.n()) +
                                ", q = " + std::to_string(d.q()) +
                                ", p = " + std::to_string(d.p()));
  }
  const ResidualCovariances cov = regression_residual_covariances(d, beta01);
  double logdet_full = 0.0;
  double logdet_null = 0.0;
  try {
    logdet_full = cholesky_logdet(cov.full);
    logdet_null = cholesky_logdet(cov.null);
  } catch (const SingularMatrixError& e) {
    throw RankError("residual covariance is singular (pivot " + std::to_string(e.pivot) +
                    "); requires n - q >= p with responses of full rank");
  }
  const Standardization standardization = standardize_regression(d.n(), d.p(), d.q1, d.q2());
  return assemble_report(logdet_full - logdet_null, standardization, options.alpha,
                         {{"logdet_full", logdet_full}, {"logdet_null", logdet_null}});
}

inline TestReport run_equal_cov_test(const GroupedSample& s, const TestOptions& options = {}) {
  const auto parts = detail::grouped_parts(s, false);
  const Standardization standardization =
      standardize_equal_cov(parts.sizes, parts.p, options.regime);
  const double statistic = detail::equal_cov_stat_from_parts(parts);
  const double plain = detail::equal_cov_plain_from_parts(parts);
  return assemble_report(statistic, standardization, options.alpha,
                         {{"sum_logdet_within", parts.sum_logdet_within},
                          {"logdet_pooled", parts.logdet_pooled},
                          {"log_lambda_plain", plain},
                          {"gap_plain_minus_modified", plain - statistic},
                          {"gap_closed_form", detail::equal_cov_gap_closed_form(parts)},
                          {"gap_closed_form_deterministic",
                           detail::equal_cov_gap_deterministic(parts.sizes, parts.p)}});
}

inline TestReport run_equal_dist_test(const GroupedSample& s, const TestOptions& options = {}) {
  const auto parts = detail::grouped_parts(s, true);
  const Standardization standardization =
      standardize_equal_dist(parts.sizes, parts.p, options.regime);
  return assemble_report(detail::equal_dist_stat_from_parts(parts), standardization,
                         options.alpha,
                         {{"sum_logdet_within", parts.sum_logdet_within},
                          {"logdet_total", parts.logdet_total}});
}

}  // namespace lrt
