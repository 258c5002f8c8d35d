#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "lrt/errors.hpp"
#include "lrt/linalg.hpp"
#include "lrt/rng.hpp"
#include "lrt/specfun.hpp"

// Exact finite-sample null law of the independence and regression statistics:
// each equals a sum of logs of independent Beta variables. This gives an
// oracle that is independent of the matrix pipeline, with closed-form log
// moments via polygamma functions.

namespace lrt {

struct BetaFactor {
  double a = 0.0;
  double b = 0.0;
};

struct BetaProductSpec {
  std::vector<BetaFactor> factors;
};

// Factors of the block-independence statistic under the null: block i > 1
// with size p_i and preceding mass p_i* contributes p_i factors
// Beta((n - p_i* - j)/2, p_i*/2). A single block yields an empty product.
inline BetaProductSpec spec_independence(int n, const BlockPartition& blocks) {
  blocks.validate();
  const int p = blocks.total();
  if (n <= p) {
    throw RegimeError("requires n > p; got n = " + std::to_string(n) +
                      ", p = " + std::to_string(p));
  }
  BetaProductSpec spec;
  spec.factors.reserve(static_cast<std::size_t>(p - blocks.sizes[0]));
  for (int i = 1; i < blocks.count(); ++i) {
    const double preceding = blocks.offset(i);
    for (int j = 1; j <= blocks.sizes[i]; ++j) {
      spec.factors.push_back(BetaFactor{0.5 * (n - preceding - j), 0.5 * preceding});
    }
  }
  return spec;
}

// Factors of the regression statistic under the null: coordinate i of the
// p-dimensional response contributes Beta((n - q + 1 - i)/2, q1/2).
inline BetaProductSpec spec_regression(int n, int p, int q1, int q2) {
  if (q1 < 1 || q2 < 1) {
    throw ConfigError("requires q1 >= 1 and q2 >= 1; got q1 = " + std::to_string(q1) +
                      ", q2 = " + std::to_string(q2));
  }
  if (p < 1) throw ConfigError("requires p >= 1; got p = " + std::to_string(p));
  const int q = q1 + q2;
  if (n - q + 1 - p <= 0) {
    throw RegimeError("requires n - q >= p; got n = " + std::to_string(n) +
                      ", q = " + std::to_string(q) + ", p = " + std::to_string(p));
  }
  BetaProductSpec spec;
  spec.factors.reserve(static_cast<std::size_t>(p));
  for (int i = 1; i <= p; ++i) {
    spec.factors.push_back(BetaFactor{0.5 * (n - q + 1 - i), 0.5 * q1});
  }
  return spec;
}

struct LogMoments {
  double mean = 0.0;
  double variance = 0.0;
};

// Exact mean and variance of sum_i log Beta(a_i, b_i) from digamma and
// trigamma differences.
inline LogMoments exact_log_moments(const BetaProductSpec& spec) {
  if (spec.factors.empty()) {
    throw ConfigError("the Beta-product decomposition is empty; no moments to compute");
  }
  LogMoments moments;
  for (const BetaFactor& f : spec.factors) {
    moments.mean += digamma(f.a) - digamma(f.a + f.b);
    moments.variance += trigamma(f.a) - trigamma(f.a + f.b);
  }
  return moments;
}

// One exact draw of sum_i log Beta(a_i, b_i).
inline double sample_log_product(const BetaProductSpec& spec, RngStream& rng) {
  if (spec.factors.empty()) {
    throw ConfigError("the Beta-product decomposition is empty; nothing to sample");
  }
  double total = 0.0;
  for (const BetaFactor& f : spec.factors) {
    double draw = rng.beta(f.a, f.b);
    while (!(draw > 0.0) || !(draw < 1.0)) draw = rng.beta(f.a, f.b);
    total += std::log(draw);
  }
  return total;
}

namespace detail {

// Tetragamma (third derivative of log gamma), used for fourth cumulants of
// log-Beta variables.
inline double tetragamma(double x) {
  if (!(x > 0.0)) {
    throw DomainError(format_positive_domain("tetragamma", x));
  }
  double value = 0.0;
  while (x < 12.0) {
    value += 6.0 / (x * x * x * x);
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double poly = 10.0;
  poly = -3.0 + inv2 * poly;
  poly = 4.0 / 3.0 + inv2 * poly;
  poly = -1.0 + inv2 * poly;
  poly = 2.0 + inv2 * poly;
  value += inv2 * inv * (2.0 + 3.0 * inv + inv2 * poly);
  return value;
}

}  // namespace detail

// Lindeberg-type checks for the normal limit of the standardized log
// product: the largest single-term share of the variance, the total
// normalized variance, and the worst fourth-to-second moment ratio.
struct CltDiagnostics {
  double sup_term = 0.0;
  double variance_sum = 0.0;
  double max_fourth_to_second = 0.0;
};

inline CltDiagnostics verify_clt_conditions(const BetaProductSpec& spec, double normalization) {
  if (spec.factors.empty()) {
    throw ConfigError("the Beta-product decomposition is empty; nothing to verify");
  }
  if (!(normalization > 0.0)) {
    throw DomainError("normalization must be positive; got " + std::to_string(normalization));
  }
  const double norm_sq = normalization * normalization;
  CltDiagnostics diag;
  for (const BetaFactor& f : spec.factors) {
    const double variance = trigamma(f.a) - trigamma(f.a + f.b);
    const double kurt = detail::tetragamma(f.a) - detail::tetragamma(f.a + f.b);
    const double fourth = kurt + 3.0 * variance * variance;
    diag.sup_term = std::max(diag.sup_term, variance / norm_sq);
    diag.variance_sum += variance / norm_sq;
    if (variance > 0.0) {
      diag.max_fourth_to_second = std::max(diag.max_fourth_to_second,
                                           fourth / (variance * variance));
    }
  }
  return diag;
}

}  // namespace lrt
