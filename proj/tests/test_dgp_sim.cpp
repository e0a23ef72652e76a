#include <gtest/gtest.h>

#include "support.hpp"

using namespace revar;

TEST(Toeplitz, Entries) {
  const MatrixXd m = toeplitz_power(4, -0.5, 5.0);
  EXPECT_DOUBLE_EQ(m(0, 0), 5.0);
  EXPECT_DOUBLE_EQ(m(0, 3), 5.0 * -0.125);
  EXPECT_DOUBLE_EQ(m(2, 1), -2.5);
}

TEST(TrueParameters, StructureAndNormalization) {
  const Dims dims{3, 4, 1, 7};
  const TrueParameters t = generate_true_parameters(dims, 1);
  EXPECT_LT((t.phi.transpose() * t.phi - MatrixXd::Identity(4, 4)).norm(), 1e-12);
  EXPECT_LT((t.phi.transpose() * t.phi0).norm(), 1e-12);
  EXPECT_NEAR(t.beta.norm(), 1.0, 1e-12);
  EXPECT_LT(t.spectral_radius, 0.999);
  EXPECT_LT(reducing_residual(t.sigma, t.phi), 1e-12);
  EXPECT_LT((t.phi * t.nu * t.b - t.beta).norm(), 1e-12);
  EXPECT_EQ((t.omega - toeplitz_power(4, -0.9)).norm(), 0.0);
  Eigen::JacobiSVD<MatrixXd> svd(t.beta);
  EXPECT_LT(svd.singularValues()(3), 1e-12);
  const TrueParameters again = generate_true_parameters(dims, 1);
  EXPECT_EQ((again.beta - t.beta).norm(), 0.0);
  EXPECT_THROW(generate_true_parameters({5, 4, 1, 7}, 1), Error);
}

TEST(Companion, StationaryCovarianceSolvesLyapunov) {
  const TrueParameters t = generate_true_parameters({2, 3, 2, 4}, 2);
  const MatrixXd f = companion_matrix(t.beta);
  EXPECT_EQ(f.rows(), 8);
  EXPECT_DOUBLE_EQ(f(4, 0), 1.0);
  const MatrixXd x = stationary_covariance(t.beta, t.sigma);
  MatrixXd q = MatrixXd::Zero(8, 8);
  q.topLeftCorner(4, 4) = t.sigma;
  EXPECT_LT((f * x * f.transpose() + q - x).norm() / x.norm(), 1e-10);
  EXPECT_NEAR(spectral_radius(f), t.spectral_radius, 1e-14);
}

TEST(Innovations, StandardizedMoments) {
  for (ErrorFamily fam : {ErrorFamily::Normal, ErrorFamily::Uniform, ErrorFamily::T6, ErrorFamily::Chi2_6}) {
    const MatrixXd u = standardized_innovations(fam, 200000, 2, 3);
    const VectorXd mean = u.colwise().mean();
    const MatrixXd c = (u.rowwise() - mean.transpose()).transpose() * (u.rowwise() - mean.transpose()) / 200000.0;
    EXPECT_LT(mean.cwiseAbs().maxCoeff(), 0.015) << to_string(fam);
    EXPECT_LT((c - MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff(), 0.04) << to_string(fam);
  }
  // Uniform support is [-sqrt(3), sqrt(3)]; chi2_6 is bounded below by -6/sqrt(12).
  EXPECT_LE(standardized_innovations(ErrorFamily::Uniform, 1000, 1, 4).cwiseAbs().maxCoeff(), std::sqrt(3.0));
  EXPECT_GE(standardized_innovations(ErrorFamily::Chi2_6, 1000, 1, 5).minCoeff(), -6.0 / std::sqrt(12.0));
}

TEST(Errors, CovarianceIsSigma) {
  MatrixXd sigma(2, 2);
  sigma << 2.0, 0.6, 0.6, 1.0;
  for (ErrorFamily fam : {ErrorFamily::Normal, ErrorFamily::T6, ErrorFamily::Mds}) {
    const MatrixXd e = generate_errors(fam, 200000, sigma, 6);
    const MatrixXd c = e.transpose() * e / 200000.0;
    EXPECT_LT((c - sigma).cwiseAbs().maxCoeff(), 0.06) << to_string(fam);
  }
}

TEST(Errors, MdsIncrementsOfTheStatedRandomWalk) {
  // zeta_{t+1} | zeta_t ~ N(zeta_t, I): increments are independent N(0, I),
  // so the lag-1 autocorrelation of e_t is zero.
  const MatrixXd e = generate_errors(ErrorFamily::Mds, 100000, MatrixXd::Identity(2, 2), 7);
  for (Index j = 0; j < 2; ++j) {
    const VectorXd x = e.col(j);
    const double rho = x.head(99999).dot(x.tail(99999)) / x.squaredNorm();
    EXPECT_NEAR(rho, 0.0, 0.015);
  }
}

TEST(Errors, SvMdsIsUncorrelatedButVolatilityClusters) {
  const MatrixXd e = generate_errors(ErrorFamily::SvMds, 100000, MatrixXd::Identity(3, 3), 8);
  const VectorXd x = e.col(0);
  EXPECT_NEAR(x.head(99999).dot(x.tail(99999)) / x.squaredNorm(), 0.0, 0.015);
  EXPECT_NEAR(x.squaredNorm() / 100000.0, 1.0, 0.05);
  EXPECT_THROW(parse_family("cauchy"), Error);
  EXPECT_EQ(parse_family("sv-mds"), ErrorFamily::SvMds);
}

TEST(SimulateVar, FollowsRecursion) {
  const TrueParameters t = generate_true_parameters({1, 2, 2, 3}, 9);
  const MatrixXd e = generate_errors(ErrorFamily::Normal, 50, t.sigma, 10);
  const SimulatedSeries s = simulate_var(t.beta, e, 11);
  ASSERT_EQ(s.presample.rows(), 2);
  const MatrixXd& y = s.data.values;
  VectorXd x(6);
  x << y.row(9).transpose(), y.row(8).transpose();
  EXPECT_LT((y.row(10).transpose() - t.beta * x - e.row(10).transpose()).norm(), 1e-12);
  x << y.row(0).transpose(), s.presample.row(1).transpose();
  EXPECT_LT((y.row(1).transpose() - t.beta * x - e.row(1).transpose()).norm(), 1e-12);
}

TEST(ParallelFor, CoversEveryIndexOnce) {
  std::vector<int> hits(100, 0);
  parallel_for(100, 4, [&](int i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
}

TEST(MonteCarlo, DeterministicAcrossThreadCounts) {
  SimulationScenario sc;
  sc.dims = {1, 2, 1, 3};
  sc.sample_sizes = {100, 200};
  sc.replications = 6;
  sc.seed = 3;
  sc.threads = 1;
  const McReport a = run_monte_carlo(sc);
  sc.threads = 3;
  const McReport b = run_monte_carlo(sc);
  ASSERT_EQ(a.rows.size(), 8u);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].mean_error, b.rows[i].mean_error);
    EXPECT_EQ(a.rows[i].r_avg, b.rows[i].r_avg);
  }
  EXPECT_EQ(a.failures, 0);
  for (const McRow& r : a.rows) {
    if (r.model == ModelKind::REVAR) EXPECT_DOUBLE_EQ(r.r_avg, 1.0);
    if (r.model == ModelKind::OLSVAR) EXPECT_GE(r.r_min, 1.0 - 1e-6);
  }
}

TEST(SelectionStudy, SmallRunProducesFractions) {
  SimulationScenario sc;
  sc.dims = {1, 2, 1, 3};
  sc.sample_sizes = {400};
  sc.replications = 4;
  const SelectionStudy st = run_selection_study(sc);
  ASSERT_EQ(st.rows.size(), 1u);
  EXPECT_EQ(st.rows[0].n, 4);
  EXPECT_GE(st.rows[0].p_correct, 0.0);
  EXPECT_LE(st.rows[0].u_correct, 1.0);
}
