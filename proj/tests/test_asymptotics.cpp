#include <gtest/gtest.h>

#include "support.hpp"

using namespace revar;
using revar::testing::random_matrix;
using revar::testing::random_parameters;
using revar::testing::random_spd;

namespace {

template <class Map>
MatrixXd central_difference(Map&& map, const VectorXd& x, double step = 1e-6) {
  const VectorXd f0 = map(x);
  MatrixXd jac(f0.size(), x.size());
  for (Index i = 0; i < x.size(); ++i) {
    VectorXd hi = x, lo = x;
    hi(i) += step;
    lo(i) -= step;
    jac.col(i) = (map(hi) - map(lo)) / (2 * step);
  }
  return jac;
}

double rel_err(const MatrixXd& a, const MatrixXd& b) { return (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff(); }

double min_eig(const MatrixXd& m) { return min_eigenvalue(SymMatd(m)); }

}  // namespace

TEST(Fisher, InverseIsInverse) {
  std::mt19937_64 rng(41);
  const FisherInformation f = fisher_information(random_spd(6, rng), random_spd(3, rng));
  EXPECT_LT((f.j * f.j_inv - MatrixXd::Identity(f.j.rows(), f.j.cols())).norm(), 1e-10);
}

TEST(Parameters, MapsReproduceH) {
  std::mt19937_64 rng(42);
  const ParameterVectors p = random_parameters({2, 3, 2, 4}, rng);
  EXPECT_LT((h_of_theta(p, p.theta()) - p.h()).norm(), 1e-12);
  EXPECT_LT((h_of_delta(p, p.delta()) - p.h()).norm(), 1e-12);
  const ParameterVectors rr = make_rr_parameters(p.a, p.b, p.sigma, p.gamma_p);
  EXPECT_LT((h_of_psi(rr, rr.psi()) - rr.h()).norm(), 1e-12);
  EXPECT_EQ(p.theta().size(), 4 * 3 + 3 * 2 + 2 * 8 + 6 + 1);
}

TEST(Jacobians, MatchCentralDifferences) {
  std::mt19937_64 rng(43);
  for (int k = 0; k < 5; ++k) {
    const ParameterVectors p = random_parameters({2, 3, 1, 5}, rng);
    EXPECT_LT(rel_err(jacobian_theta(p), central_difference([&](const VectorXd& t) { return h_of_theta(p, t); },
                                                            p.theta())),
              1e-6);
    EXPECT_LT(rel_err(jacobian_delta(p), central_difference([&](const VectorXd& t) { return h_of_delta(p, t); },
                                                            p.delta())),
              1e-6);
    const ParameterVectors rr = make_rr_parameters(p.a, p.b, p.sigma, p.gamma_p);
    EXPECT_LT(rel_err(jacobian_psi(rr), central_difference([&](const VectorXd& t) { return h_of_psi(rr, t); },
                                                           rr.psi())),
              1e-6);
  }
}

TEST(Avar, EfficiencyOrderings) {
  std::mt19937_64 rng(44);
  for (int k = 0; k < 5; ++k) {
    const ParameterVectors p = random_parameters({2, 3, 1, 5}, rng);
    const MatrixXd ols = avar(ModelKind::OLSVAR, p).beta_block;
    const MatrixXd rr = avar(ModelKind::RRVAR, p).beta_block;
    const MatrixXd ev = avar(ModelKind::EVAR, p).beta_block;
    const MatrixXd re = avar(ModelKind::REVAR, p).beta_block;
    const double scale = ols.norm();
    EXPECT_GE(min_eig(ols - rr), -1e-8 * scale);
    EXPECT_GE(min_eig(ols - ev), -1e-8 * scale);
    EXPECT_GE(min_eig(rr - re), -1e-8 * scale);
    EXPECT_GE(min_eig(ev - re), -1e-8 * scale);
    const SeRatios r = se_ratios(ols, re);
    EXPECT_GE(r.r_min, 1.0 - 1e-8);
    EXPECT_LE(r.r_min, r.r_avg);
    EXPECT_LE(r.r_avg, r.r_max);
  }
}

TEST(Avar, OlsBlockIsKronecker) {
  std::mt19937_64 rng(45);
  const ParameterVectors p = random_parameters({1, 2, 1, 3}, rng);
  const MatrixXd expect = kron(MatrixXd(p.gamma_p.inverse()), p.sigma);
  EXPECT_LT((avar(ModelKind::OLSVAR, p).beta_block - expect).norm(), 1e-10);
  const MatrixXd se = avar(ModelKind::OLSVAR, p).standard_errors(100);
  EXPECT_NEAR(se(1, 2), std::sqrt(expect(2 * 3 + 1, 2 * 3 + 1) / 100), 1e-12);
}

TEST(Avar, RrvarClosedFormsMatchGeneralForm) {
  std::mt19937_64 rng(46);
  for (int k = 0; k < 5; ++k) {
    const ParameterVectors p = random_parameters({2, 3, 2, 4}, rng);
    const ParameterVectors rr = make_rr_parameters(p.a, p.b, p.sigma, p.gamma_p);
    const MatrixXd general = avar(ModelKind::RRVAR, rr).beta_block;
    EXPECT_LT((avar_rrvar_closed_form(rr) - general).norm() / general.norm(), 1e-8);
    EXPECT_LT((avar_rrvar_decomposition(rr) - general).norm() / general.norm(), 1e-8);
  }
}

TEST(Sandwich, ReducesToNormalAvarWhenVIsJInverse) {
  std::mt19937_64 rng(47);
  const ParameterVectors p = random_parameters({2, 3, 1, 4}, rng);
  const FisherInformation f = fisher_information(p.gamma_p, p.sigma);
  for (ModelKind m : {ModelKind::OLSVAR, ModelKind::RRVAR, ModelKind::EVAR, ModelKind::REVAR}) {
    const ParameterVectors& pm = m == ModelKind::RRVAR ? make_rr_parameters(p.a, p.b, p.sigma, p.gamma_p) : p;
    const MatrixXd a = avar(m, pm).full;
    EXPECT_LT((avar_nonnormal(pm, f.j_inv, m).full - a).norm() / a.norm(), 1e-8) << to_string(m);
  }
}

TEST(SeRatios, ZeroStandardErrorRejected) {
  MatrixXd a = MatrixXd::Identity(2, 2), b = MatrixXd::Identity(2, 2);
  b(1, 1) = 0.0;
  try {
    se_ratios(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroSE);
  }
  const SeRatios r = se_ratios(4.0 * a, a);
  EXPECT_DOUBLE_EQ(r.r_min, 2.0);
  EXPECT_DOUBLE_EQ(r.r_avg, 2.0);
}

TEST(Vtilde, NormalErrorsGiveInverseFisher) {
  const auto s = revar::testing::simulate_sample({1, 2, 1, 3}, 40000, 48);
  const LagDesign ld = build_lag_design(s.series.presample, s.series.data, 1);
  const VarEstimate ols = fit_olsvar(s.acov);
  const MatrixXd v = estimate_vtilde(residuals(ols, ld), ld);
  const FisherInformation f = fisher_information(s.acov.gamma_p, ols.sigma);
  EXPECT_LT((v - f.j_inv).norm() / f.j_inv.norm(), 0.05);
}
