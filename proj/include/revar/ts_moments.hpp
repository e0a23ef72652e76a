#pragma once

// Time-series container, lag embedding and the sample moment matrices of a
// VAR(p) written as a regression of y_t on x_t = (y'_{t-1}, ..., y'_{t-p})'.

#include <optional>
#include <string>
#include <vector>

#include "revar/matrix_kit.hpp"

namespace revar {

/// T x q observations, rows oldest first.
struct TimeSeriesData {
  MatrixXd values;
  std::vector<std::string> names;

  Index length() const { return values.rows(); }
  Index dim() const { return values.cols(); }
};

/// Targets y_t and lagged regressors x_t. `lagged` is stored centered;
/// `lagged_mean` keeps the column means that were removed.
struct LagDesign {
  int p = 0;
  MatrixXd targets;      // n x q, raw
  MatrixXd lagged;       // n x qp, centered
  VectorXd target_mean;  // q
  VectorXd lagged_mean;  // qp

  Index size() const { return targets.rows(); }
  Index dim() const { return targets.cols(); }
};

/// Presample taken from the series itself: the first p rows are consumed.
LagDesign build_lag_design(const TimeSeriesData& data, int p);

/// All rows of `data` are usable targets; `presample` supplies the p rows
/// preceding the first observation (oldest first).
LagDesign build_lag_design(const MatrixXd& presample, const TimeSeriesData& data, int p);

/// Targets start at row `first_target` (>= p) of `series`. Used to align
/// candidates with different p on one common sample.
LagDesign build_lag_design_aligned(const MatrixXd& series, int p, Index first_target);

/// Sample moments with divisor n (the number of usable rows).
struct AutocovarianceSet {
  int p = 0;
  Index sample_size = 0;
  MatrixXd gamma0;        // q x q
  MatrixXd gamma_star;    // qp x q, cov(x_t, y_t)
  MatrixXd gamma_p;       // qp x qp
  MatrixXd resid_cov;     // Gamma_{y|x}
  MatrixXd fitted_cov;    // Gamma_{y o x}
  VectorXd target_mean;
  VectorXd lagged_mean;

  Index dim() const { return gamma0.rows(); }
};

AutocovarianceSet sample_autocovariances(const LagDesign& design);

struct CanonicalDecomposition {
  MatrixXd correlation;     // C_{y,x}, q x qp
  VectorXd singular_values; // descending
  MatrixXd left;            // q x r
  MatrixXd right;           // qp x r
  std::optional<int> rank;
  MatrixXd truncated;       // top-`rank` singular triplets (full matrix if no rank)
};

/// C_{y,x} = Gamma0^{-1/2} Gamma*' Gamma_(p)^{-1/2} and its SVD.
CanonicalDecomposition canonical_correlations(const AutocovarianceSet& acov,
                                              std::optional<int> rank = std::nullopt);

/// Truncated SVD reconstruction of `m` keeping the top `rank` triplets.
MatrixXd truncate_rank(const MatrixXd& m, int rank);

}  // namespace revar
