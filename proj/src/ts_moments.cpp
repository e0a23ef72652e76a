#include "revar/ts_moments.hpp"

namespace revar {

LagDesign build_lag_design_aligned(const MatrixXd& series, int p, Index first_target) {
  if (p < 1) throw Error(ErrorKind::InvalidArgument, "lag order must be >= 1");
  if (first_target < p) throw Error(ErrorKind::InvalidArgument, "first target precedes presample");
  const Index q = series.cols();
  const Index n = series.rows() - first_target;
  if (n <= q * p + 1) {
    throw Error(ErrorKind::TooShort, "need more than qp + 1 usable rows, have " + std::to_string(n));
  }
  LagDesign design;
  design.p = p;
  design.targets = series.bottomRows(n);
  design.lagged.resize(n, q * p);
  for (Index t = 0; t < n; ++t) {
    const Index row = first_target + t;
    for (int k = 1; k <= p; ++k) {
      design.lagged.block(t, (k - 1) * q, 1, q) = series.row(row - k);
    }
  }
  design.target_mean = design.targets.colwise().mean().transpose();
  design.lagged_mean = design.lagged.colwise().mean().transpose();
  design.lagged.rowwise() -= design.lagged_mean.transpose();
  return design;
}

LagDesign build_lag_design(const TimeSeriesData& data, int p) {
  return build_lag_design_aligned(data.values, p, p);
}

LagDesign build_lag_design(const MatrixXd& presample, const TimeSeriesData& data, int p) {
  if (presample.rows() != p || presample.cols() != data.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "presample must be p x q");
  }
  MatrixXd full(p + data.length(), data.dim());
  full << presample, data.values;
  return build_lag_design_aligned(full, p, p);
}

AutocovarianceSet sample_autocovariances(const LagDesign& design) {
  const double n = static_cast<double>(design.size());
  AutocovarianceSet acov;
  acov.p = design.p;
  acov.sample_size = design.size();
  acov.target_mean = design.target_mean;
  acov.lagged_mean = design.lagged_mean;

  MatrixXd yc = design.targets.rowwise() - design.target_mean.transpose();
  acov.gamma0 = SymMatd(MatrixXd(yc.transpose() * yc / n)).matrix();
  acov.gamma_p = SymMatd(MatrixXd(design.lagged.transpose() * design.lagged / n)).matrix();
  acov.gamma_star = design.lagged.transpose() * yc / n;

  const SymMatd gp(acov.gamma_p);
  const double norm = spectral_norm_symmetric(gp);
  if (norm == 0.0 || min_eigenvalue(gp) < 1e-12 * norm) {
    throw Error(ErrorKind::SingularGram, "lagged Gram matrix is numerically singular");
  }
  Eigen::LLT<MatrixXd> llt(acov.gamma_p);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::SingularGram, "lagged Gram matrix is not positive definite");
  }
  acov.fitted_cov = SymMatd(MatrixXd(acov.gamma_star.transpose() * llt.solve(acov.gamma_star))).matrix();
  acov.resid_cov = SymMatd(MatrixXd(acov.gamma0 - acov.fitted_cov)).matrix();
  return acov;
}

MatrixXd truncate_rank(const MatrixXd& m, int rank) {
  Eigen::JacobiSVD<MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Index r = std::min<Index>(rank, svd.singularValues().size());
  return svd.matrixU().leftCols(r) * svd.singularValues().head(r).asDiagonal() *
         svd.matrixV().leftCols(r).transpose();
}

CanonicalDecomposition canonical_correlations(const AutocovarianceSet& acov,
                                              std::optional<int> rank) {
  const MatrixXd g0_isqrt = sym_power(SymMatd(acov.gamma0), SymPower::InvSqrt);
  const MatrixXd gp_isqrt = sym_power(SymMatd(acov.gamma_p), SymPower::InvSqrt);
  CanonicalDecomposition out;
  out.correlation = g0_isqrt * acov.gamma_star.transpose() * gp_isqrt;
  Eigen::JacobiSVD<MatrixXd> svd(out.correlation, Eigen::ComputeThinU | Eigen::ComputeThinV);
  out.singular_values = svd.singularValues();
  out.left = svd.matrixU();
  out.right = svd.matrixV();
  out.rank = rank;
  if (rank) {
    const Index max_rank = out.singular_values.size();
    if (*rank < 0 || *rank > max_rank) throw Error(ErrorKind::BadRank, "rank out of range");
    const Index r = *rank;
    out.truncated = out.left.leftCols(r) * out.singular_values.head(r).asDiagonal() *
                    out.right.leftCols(r).transpose();
  } else {
    out.truncated = out.correlation;
  }
  return out;
}

}  // namespace revar
