#include "revar/envelope_objective.hpp"

#include <cmath>

namespace revar {

namespace {

constexpr double kGapTol = 1e-10;

}  // namespace

EnvelopeObjective::EnvelopeObjective(const AutocovarianceSet& acov, int d)
    : d_(d),
      gamma0_(acov.gamma0),
      gamma0_inv_(sym_power(SymMatd(acov.gamma0), SymPower::Inverse)),
      resid_(acov.resid_cov),
      fitted_(acov.fitted_cov) {
  if (d < 1) throw Error(ErrorKind::BadRank, "envelope objective needs d >= 1");
}

EnvelopeSpectrum EnvelopeObjective::spectrum(const MatrixXd& d) const {
  EnvelopeSpectrum out;
  out.gram = SymMatd(MatrixXd(d.transpose() * gamma0_ * d)).matrix();
  Eigen::LLT<MatrixXd> llt(out.gram);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::DegenerateCandidate, "D'G0 D is singular");
  }
  const MatrixXd l = llt.matrixL();
  out.logdet_gram = 2.0 * l.diagonal().array().log().sum();
  const MatrixXd inv_gram = d.transpose() * gamma0_inv_ * d;
  out.logdet_inv = logdet_spd(inv_gram);

  // L^{-1} D'K D L^{-T}, whose eigenvectors w give v = L^{-T} w with v'(D'G0 D)v = 1.
  const MatrixXd dkd = d.transpose() * fitted_ * d;
  MatrixXd m = llt.matrixL().solve(dkd);
  m = llt.matrixL().solve(m.transpose()).transpose();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(SymMatd(m).matrix());
  out.lambda = es.eigenvalues().reverse();
  const MatrixXd w = es.eigenvectors().rowwise().reverse();
  out.vectors = llt.matrixU().solve(w);
  return out;
}

double EnvelopeObjective::value(const MatrixXd& d) const {
  const EnvelopeSpectrum s = spectrum(d);
  const int r = effective_rank(d.cols());
  double tail = 0.0;
  for (int i = 0; i < r; ++i) {
    const double gap = 1.0 - s.lambda(i);
    if (!(gap > 1e-14)) throw Error(ErrorKind::DegenerateCandidate, "D'Gamma_{y|x}D is singular");
    tail += std::log(gap);
  }
  return s.logdet_gram + s.logdet_inv + tail;
}

double EnvelopeObjective::value_eigen_sum(const MatrixXd& d) const {
  const MatrixXd sd = SymMatd(MatrixXd(d.transpose() * resid_ * d)).matrix();
  const SymMatd sd_sym(sd);
  const double norm = spectral_norm_symmetric(sd_sym);
  if (norm == 0.0 || min_eigenvalue(sd_sym) < 1e-12 * norm) {
    throw Error(ErrorKind::DegenerateCandidate, "D'Gamma_{y|x}D is singular");
  }
  const MatrixXd sd_isqrt = sym_power(sd_sym, SymPower::InvSqrt);
  const MatrixXd gram = d.transpose() * gamma0_ * d;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(SymMatd(MatrixXd(sd_isqrt * gram * sd_isqrt)).matrix(),
                                             Eigen::EigenvaluesOnly);
  const VectorXd omega = es.eigenvalues().reverse();
  const int r = effective_rank(d.cols());
  double tail = 0.0;
  for (Index i = r; i < omega.size(); ++i) tail += std::log(omega(i));
  return logdet_spd(sd) + logdet_spd(MatrixXd(d.transpose() * gamma0_inv_ * d)) + tail;
}

MatrixXd EnvelopeObjective::gradient(const MatrixXd& d) const {
  const EnvelopeSpectrum s = spectrum(d);
  const Index u = d.cols();
  const int r = effective_rank(u);
  if (r < u && s.lambda(r - 1) - s.lambda(r) < kGapTol) return gradient_fd(d);

  const MatrixXd g0d = gamma0_ * d;
  const MatrixXd g0inv_d = gamma0_inv_ * d;
  const MatrixXd inv_gram = d.transpose() * g0inv_d;
  MatrixXd grad = 2.0 * g0d * s.gram.llt().solve(MatrixXd::Identity(u, u)) +
                  2.0 * g0inv_d * inv_gram.llt().solve(MatrixXd::Identity(u, u));
  const MatrixXd kd = fitted_ * d;
  for (int i = 0; i < r; ++i) {
    const VectorXd v = s.vectors.col(i);
    const double lam = s.lambda(i);
    grad -= (2.0 / (1.0 - lam)) * (kd * v - lam * (g0d * v)) * v.transpose();
  }
  return grad;
}

MatrixXd EnvelopeObjective::gradient_fd(const MatrixXd& d, double step) const {
  MatrixXd grad(d.rows(), d.cols());
  MatrixXd probe = d;
  for (Index j = 0; j < d.cols(); ++j) {
    for (Index i = 0; i < d.rows(); ++i) {
      probe(i, j) = d(i, j) + step;
      const double up = value(probe);
      probe(i, j) = d(i, j) - step;
      const double down = value(probe);
      probe(i, j) = d(i, j);
      grad(i, j) = (up - down) / (2.0 * step);
    }
  }
  return grad;
}

}  // namespace revar
