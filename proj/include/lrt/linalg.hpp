#pragma once

#include <Eigen/Dense>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "lrt/errors.hpp"
#include "lrt/rng.hpp"

// Dense symmetric linear algebra and Gaussian sampling: Cholesky
// log-determinants, sample covariance and scatter matrices, regression
// residual covariances, and multivariate normal draws.

namespace lrt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Ordered sizes (p_1, ..., p_q) of contiguous coordinate blocks
// partitioning a p-dimensional vector.
struct BlockPartition {
  std::vector<int> sizes;

  int count() const { return static_cast<int>(sizes.size()); }

  int total() const { return std::accumulate(sizes.begin(), sizes.end(), 0); }

  // Number of coordinates before block i (zero-based i).
  int offset(int i) const {
    return std::accumulate(sizes.begin(), sizes.begin() + i, 0);
  }

  void validate() const {
    if (sizes.empty()) {
      throw ConfigError("block partition must contain at least one block");
    }
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      if (sizes[i] < 1) {
        throw ConfigError("block sizes must be >= 1; block " + std::to_string(i + 1) +
                          " has size " + std::to_string(sizes[i]));
      }
    }
  }
};

// Observations for q groups; group j is an n_j x p matrix whose rows are
// observation vectors. Labels are optional group identifiers carried along
// from file input.
struct GroupedSample {
  std::vector<Matrix> groups;
  std::vector<std::string> labels;

  int group_count() const { return static_cast<int>(groups.size()); }

  int dim() const { return groups.empty() ? 0 : static_cast<int>(groups.front().cols()); }

  int total_size() const {
    int n = 0;
    for (const auto& g : groups) n += static_cast<int>(g.rows());
    return n;
  }

  std::vector<int> sizes() const {
    std::vector<int> out;
    out.reserve(groups.size());
    for (const auto& g : groups) out.push_back(static_cast<int>(g.rows()));
    return out;
  }

  void validate() const {
    if (groups.empty()) {
      throw ConfigError("grouped sample must contain at least one group");
    }
    const int p = dim();
    if (p < 1) throw ConfigError("grouped sample must have dimension p >= 1");
    for (std::size_t j = 0; j < groups.size(); ++j) {
      if (static_cast<int>(groups[j].cols()) != p) {
        throw ConfigError("all groups must share the same dimension; group " +
                          std::to_string(j + 1) + " has p = " +
                          std::to_string(groups[j].cols()) + ", expected " + std::to_string(p));
      }
      if (groups[j].rows() < 2) {
        throw InsufficientDataError("requires n_j >= 2; group " + std::to_string(j + 1) +
                                    " has n_j = " + std::to_string(groups[j].rows()));
      }
    }
  }
};

// Multivariate regression sample: an n x p response matrix, an n x q design
// matrix, and the split q = q1 + q2 where the first q1 design columns carry
// the tested coefficient block.
struct RegressionData {
  Matrix responses;
  Matrix designs;
  int q1 = 0;

  int n() const { return static_cast<int>(responses.rows()); }
  int p() const { return static_cast<int>(responses.cols()); }
  int q() const { return static_cast<int>(designs.cols()); }
  int q2() const { return q() - q1; }

  void validate() const {
    if (responses.rows() < 1 || responses.cols() < 1) {
      throw ConfigError("regression responses must be a nonempty n x p matrix");
    }
    if (designs.rows() != responses.rows()) {
      throw ConfigError("responses and designs must have the same number of rows; got " +
                        std::to_string(responses.rows()) + " and " +
                        std::to_string(designs.rows()));
    }
    if (q1 < 1 || q2() < 1) {
      throw ConfigError("requires q1 >= 1 and q2 >= 1; got q1 = " + std::to_string(q1) +
                        ", q2 = " + std::to_string(q2()));
    }
    if (n() <= q()) {
      throw InsufficientDataError("requires n > q; got n = " + std::to_string(n()) +
                                  ", q = " + std::to_string(q()));
    }
  }
};

namespace detail {

// Unblocked Cholesky that reports the first failing pivot, used only to
// build the error message after the fast factorization has failed.
inline int cholesky_failing_pivot(Matrix a) {
  const int n = static_cast<int>(a.rows());
  for (int j = 0; j < n; ++j) {
    const double d = a(j, j) - a.row(j).head(j).squaredNorm();
    if (!(d > 0.0) || !std::isfinite(d)) return j;
    const double l = std::sqrt(d);
    a(j, j) = l;
    for (int i = j + 1; i < n; ++i) {
      a(i, j) = (a(i, j) - a.row(i).head(j).dot(a.row(j).head(j))) / l;
    }
  }
  return -1;
}

inline void check_symmetric(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw ConfigError(std::string(what) + " requires a square matrix; got " +
                      std::to_string(m.rows()) + " x " + std::to_string(m.cols()));
  }
  if (m.rows() == 0) return;
  const double scale = m.cwiseAbs().maxCoeff();
  const double asymmetry = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (scale > 0.0 && asymmetry > 1e-10 * scale) {
    throw ConfigError(std::string(what) + " requires a symmetric matrix; max |m - m^T| = " +
                      std::to_string(asymmetry) + " exceeds 1e-10 relative tolerance");
  }
}

}  // namespace detail

// log|m| = 2 sum_i log L_ii for a symmetric positive definite m via its
// Cholesky factor L. The input is symmetrized as (m + m^T)/2 before
// factorization to absorb rounding in accumulated scatter sums.
inline double cholesky_logdet(const Matrix& m) {
  detail::check_symmetric(m, "cholesky_logdet");
  if (m.rows() == 0) return 0.0;
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::LLT<Matrix> llt(sym);
  if (llt.info() != Eigen::Success) {
    const int pivot = detail::cholesky_failing_pivot(sym);
    throw SingularMatrixError(
        "Cholesky factorization failed at pivot " + std::to_string(pivot) + " of " +
            std::to_string(m.rows()) + ": matrix is not positive definite within tolerance",
        pivot);
  }
  // An exactly singular matrix can still factor with a pivot of pure
  // rounding noise, so each pivot is also checked against its own diagonal
  // entry.
  const auto pivots = llt.matrixLLT().diagonal();
  const double tol =
      64.0 * static_cast<double>(m.rows()) * std::numeric_limits<double>::epsilon();
  for (Eigen::Index i = 0; i < pivots.size(); ++i) {
    const double d = pivots[i] * pivots[i];
    if (!std::isfinite(pivots[i]) || !(d > tol * sym.diagonal()[i])) {
      const int pivot = static_cast<int>(i);
      throw SingularMatrixError("Cholesky factor has a vanishing pivot at index " +
                                    std::to_string(pivot) +
                                    ": matrix is not positive definite within tolerance",
                                pivot);
    }
  }
  return 2.0 * pivots.array().log().sum();
}

// Divisor-n mean-centered covariance of the rows of x (n x p), n >= 2.
inline Matrix sample_covariance(const Matrix& x) {
  const int n = static_cast<int>(x.rows());
  const int p = static_cast<int>(x.cols());
  if (n < 2) {
    throw InsufficientDataError("sample covariance requires n >= 2 observations; got n = " +
                                std::to_string(n));
  }
  const Matrix centered = x.rowwise() - x.colwise().mean();
  Matrix cov = Matrix::Zero(p, p);
  cov.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose(), 1.0 / n);
  return cov.selfadjointView<Eigen::Lower>();
}

// Within-group scatters A_j, their pooled sum A, and the total scatter
// B = A + sum_j n_j (mean_j - mean)(mean_j - mean)^T. All un-normalized.
struct ScatterMatrices {
  std::vector<Matrix> within;
  Matrix pooled;
  Matrix total;
};

inline ScatterMatrices scatter_matrices(const GroupedSample& s) {
  s.validate();
  const int p = s.dim();
  const int n = s.total_size();

  Vector grand_mean = Vector::Zero(p);
  for (const auto& g : s.groups) grand_mean += g.colwise().sum().transpose();
  grand_mean /= n;

  ScatterMatrices result;
  result.within.reserve(s.groups.size());
  result.pooled = Matrix::Zero(p, p);
  Matrix between = Matrix::Zero(p, p);
  for (const auto& g : s.groups) {
    const Vector group_mean = g.colwise().mean().transpose();
    const Matrix centered = g.rowwise() - group_mean.transpose();
    Matrix a = Matrix::Zero(p, p);
    a.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose(), 1.0);
    a = a.selfadjointView<Eigen::Lower>();
    result.pooled += a;
    const Vector shift = group_mean - grand_mean;
    between.selfadjointView<Eigen::Lower>().rankUpdate(shift, static_cast<double>(g.rows()));
    result.within.push_back(std::move(a));
  }
  result.total = result.pooled + Matrix(between.selfadjointView<Eigen::Lower>());
  return result;
}

namespace detail {

// Least-squares residual of each response column on the design columns.
inline Matrix regression_residual(const Matrix& responses, const Matrix& designs,
                                  const char* what) {
  Eigen::ColPivHouseholderQR<Matrix> qr(designs);
  if (qr.rank() < designs.cols()) {
    throw SingularDesignError(std::string(what) + " must have full column rank " +
                              std::to_string(designs.cols()) + "; numerical rank is " +
                              std::to_string(qr.rank()));
  }
  return responses - designs * qr.solve(responses);
}

inline Matrix outer_product_over_n(const Matrix& residual) {
  const int p = static_cast<int>(residual.cols());
  Matrix cov = Matrix::Zero(p, p);
  cov.selfadjointView<Eigen::Lower>().rankUpdate(residual.transpose(),
                                                 1.0 / static_cast<double>(residual.rows()));
  return cov.selfadjointView<Eigen::Lower>();
}

}  // namespace detail

// Divisor-n residual covariances of the full model (all q design columns,
// coefficients estimated) and of the null model (responses corrected by the
// hypothesized coefficient block beta01 on the first q1 columns, then
// regressed on the remaining q2 columns).
struct ResidualCovariances {
  Matrix full;
  Matrix null;
};

inline ResidualCovariances regression_residual_covariances(const RegressionData& d,
                                                           const Matrix& beta01) {
  d.validate();
  if (beta01.rows() != d.p() || beta01.cols() != d.q1) {
    throw ConfigError("beta01 must be p x q1 = " + std::to_string(d.p()) + " x " +
                      std::to_string(d.q1) + "; got " + std::to_string(beta01.rows()) + " x " +
                      std::to_string(beta01.cols()));
  }
  ResidualCovariances out;
  const Matrix full_residual =
      detail::regression_residual(d.responses, d.designs, "design matrix");
  out.full = detail::outer_product_over_n(full_residual);

  const Matrix corrected = d.responses - d.designs.leftCols(d.q1) * beta01.transpose();
  const Matrix null_residual = detail::regression_residual(
      corrected, d.designs.rightCols(d.q2()), "null-model design block");
  out.null = detail::outer_product_over_n(null_residual);
  return out;
}

// n independent draws of N(mean, cov) as rows, via mean + L eta with L the
// Cholesky factor of cov. Deterministic given the stream.
inline Matrix sample_mvn(int n, const Vector& mean, const Matrix& cov, RngStream& rng) {
  if (n < 1) throw ConfigError("sample_mvn requires n >= 1; got n = " + std::to_string(n));
  detail::check_symmetric(cov, "sample_mvn covariance");
  const int p = static_cast<int>(cov.rows());
  if (mean.size() != p) {
    throw ConfigError("mean dimension " + std::to_string(mean.size()) +
                      " does not match covariance dimension " + std::to_string(p));
  }
  const Matrix sym = 0.5 * (cov + cov.transpose());
  Eigen::LLT<Matrix> llt(sym);
  if (llt.info() != Eigen::Success) {
    const int pivot = detail::cholesky_failing_pivot(sym);
    throw SingularMatrixError("covariance is not positive definite (failing pivot " +
                                  std::to_string(pivot) + ")",
                              pivot);
  }
  Matrix draws(n, p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) draws(i, j) = rng.normal();
  }
  const Matrix l = llt.matrixL();
  return (draws * l.transpose()).rowwise() + mean.transpose();
}

}  // namespace lrt
