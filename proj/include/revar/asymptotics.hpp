#pragma once

// Asymptotic covariances of sqrt(T) h-hat, h = (vec(beta)', vech(Sigma)')',
// for the four parameterizations:
//   psi   = (vec A, vec B, vech Sigma)                   beta = A B
//   delta = (vec Phi, vec xi, vech Omega, vech Omega0)   beta = Phi xi
//   theta = (vec Phi, vec nu, vec B, vech Omega, vech Omega0)   beta = Phi nu B
// with Sigma = Phi Omega Phi' + Phi0 Omega0 Phi0' in the envelope cases.

#include "revar/estimators.hpp"

namespace revar {

struct ParameterVectors {
  Dims dims;
  MatrixXd gamma_p;  // qp x qp
  MatrixXd beta;
  MatrixXd sigma;
  MatrixXd a;
  MatrixXd b;
  MatrixXd phi;
  MatrixXd phi0;
  MatrixXd nu;
  MatrixXd xi;
  MatrixXd omega;
  MatrixXd omega0;

  VectorXd h() const;
  VectorXd psi() const;
  VectorXd theta() const;
  VectorXd delta() const;
  bool has_envelope() const { return phi.size() > 0; }
};

/// Full REVAR parameter set; everything else is derived. Phi0 is the
/// deterministic orthonormal complement of Phi.
ParameterVectors make_parameters(const MatrixXd& phi, const MatrixXd& nu, const MatrixXd& b,
                                 const MatrixXd& omega, const MatrixXd& omega0, const MatrixXd& gamma_p);
/// Reduced-rank parameter set without envelope structure.
ParameterVectors make_rr_parameters(const MatrixXd& a, const MatrixXd& b, const MatrixXd& sigma,
                                    const MatrixXd& gamma_p);
/// Parameters of a fitted model (any kind) at the given Gamma_(p).
ParameterVectors parameters_from_estimate(const VarEstimate& est, const MatrixXd& gamma_p);

struct FisherInformation {
  MatrixXd j;      // J_h
  MatrixXd j_inv;  // blockdiag(Gamma_(p)^{-1} (x) Sigma, 2 E+ (Sigma (x) Sigma) E+')
};

FisherInformation fisher_information(const MatrixXd& gamma_p, const MatrixXd& sigma);

/// H = dh/dpsi'.
MatrixXd jacobian_psi(const ParameterVectors& params);
/// R = dh/dtheta' with Phi0 held at the completion of the base point.
MatrixXd jacobian_theta(const ParameterVectors& params);
/// dh/ddelta' (EVAR).
MatrixXd jacobian_delta(const ParameterVectors& params);

/// The maps themselves, evaluated at a perturbed parameter vector around
/// `base` (used to validate the Jacobians). Sigma's complement block is
/// Q_Phi Phi0 Omega0 Phi0' Q_Phi with Phi0 from `base`.
VectorXd h_of_psi(const ParameterVectors& base, const VectorXd& psi);
VectorXd h_of_theta(const ParameterVectors& base, const VectorXd& theta);
VectorXd h_of_delta(const ParameterVectors& base, const VectorXd& delta);

struct AsymptoticCovariance {
  ModelKind model = ModelKind::OLSVAR;
  Index q = 0;
  MatrixXd full;        // h-block
  MatrixXd beta_block;  // q^2 p x q^2 p

  /// sqrt(diag(beta_block) / T) reshaped as q x qp.
  MatrixXd standard_errors(Index T) const;
};

/// Normal-error avar; REVAR/EVAR need the envelope fields, RRVAR needs A and B.
AsymptoticCovariance avar(ModelKind model, const ParameterVectors& params);

/// (I - Q_{B'(Gamma_p)} (x) Q_{A(Sigma^{-1})}) (Gamma_p^{-1} (x) Sigma).
MatrixXd avar_rrvar_closed_form(const ParameterVectors& params);
/// (Q_{B'} Gamma_p^{-1}) (x) (P_A Sigma) + (P_{B'} Gamma_p^{-1}) (x) Sigma.
MatrixXd avar_rrvar_decomposition(const ParameterVectors& params);

/// Sandwich R (R'JR)+ R'J V J R (R'JR)+ R' for the REVAR estimator (or the
/// matching Jacobian for `model`).
AsymptoticCovariance avar_nonnormal(const ParameterVectors& params, const MatrixXd& v_tilde,
                                    ModelKind model = ModelKind::REVAR);

struct SeRatios {
  double r_min = 0.0;
  double r_max = 0.0;
  double r_avg = 0.0;
};

SeRatios se_ratios(const MatrixXd& avar_m, const MatrixXd& avar_revar);

/// Plug-in covariance of the OLS influence terms
/// ((Gamma_p^{-1} x_t) (x) e_t, vech(e_t e_t' - Sigma)).
MatrixXd estimate_vtilde(const MatrixXd& resid, const LagDesign& design);

}  // namespace revar
