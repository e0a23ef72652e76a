#pragma once

// The reduced-rank envelope objective F_T(D | p, d, u) over q x u bases D.
//
//   F(D) = log|D'G0 D| + log|D'G0^{-1} D| + sum_{i<=d} log(1 - lambda_i(D))
//
// with lambda_1 >= ... >= lambda_u the eigenvalues of the fitted covariance of
// the standardized responses z_D = (D'G0 D)^{-1/2} D'y, i.e. the generalized
// eigenvalues of (D'K D, D'G0 D) with K = Gamma_{y o x}. The equivalent form
//
//   F(D) = log|D'S D| + log|D'G0^{-1} D| + sum_{i>d} log omega_i(D)
//
// uses S = Gamma_{y|x} and omega_i = 1 / (1 - lambda_i).

#include "revar/ts_moments.hpp"

namespace revar {

struct EnvelopeSpectrum {
  MatrixXd gram;          // D'G0 D
  VectorXd lambda;        // descending
  MatrixXd vectors;       // D'G0 D-orthonormal generalized eigenvectors, same order
  double logdet_gram = 0;
  double logdet_inv = 0;  // log|D'G0^{-1} D|
};

class EnvelopeObjective {
 public:
  EnvelopeObjective(const AutocovarianceSet& acov, int d);

  int rank() const { return d_; }
  Index dim() const { return gamma0_.rows(); }
  /// Rank actually used for a candidate with `u` columns.
  int effective_rank(Index u) const { return static_cast<int>(std::min<Index>(d_, u)); }

  double value(const MatrixXd& d) const;
  double value_eigen_sum(const MatrixXd& d) const;
  MatrixXd gradient(const MatrixXd& d) const;
  MatrixXd gradient_fd(const MatrixXd& d, double step = 1e-6) const;

  EnvelopeSpectrum spectrum(const MatrixXd& d) const;

  const MatrixXd& gamma0() const { return gamma0_; }
  const MatrixXd& gamma0_inv() const { return gamma0_inv_; }
  const MatrixXd& resid_cov() const { return resid_; }
  const MatrixXd& fitted_cov() const { return fitted_; }

 private:
  int d_;
  MatrixXd gamma0_;
  MatrixXd gamma0_inv_;
  MatrixXd resid_;
  MatrixXd fitted_;
};

}  // namespace revar
