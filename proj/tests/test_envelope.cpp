#include <gtest/gtest.h>

#include "support.hpp"

using namespace revar;
using revar::testing::random_matrix;
using revar::testing::random_spd;
using revar::testing::simulate_sample;

namespace {

// f(D) = tr(D'AD) on the Grassmannian; minimum is the sum of the smallest eigenvalues.
struct Rayleigh {
  MatrixXd a;
  double value(const MatrixXd& d) const { return (d.transpose() * a * d).trace(); }
  MatrixXd gradient(const MatrixXd& d) const { return 2.0 * a * d; }
};

}  // namespace

TEST(Grassmann, CayleyStepStaysOrthonormal) {
  std::mt19937_64 rng(1);
  const MatrixXd d = orthonormalize(random_matrix(6, 2, rng));
  MatrixXd xi = random_matrix(6, 2, rng);
  xi -= d * (d.transpose() * xi);
  const MatrixXd next = cayley_step<double>(d, xi, 0.7);
  EXPECT_LT((next.transpose() * next - MatrixXd::Identity(2, 2)).norm(), 1e-12);
}

TEST(Grassmann, MinimizesRayleighQuotient) {
  std::mt19937_64 rng(2);
  Rayleigh f{random_spd(8, rng)};
  const MatrixXd start = orthonormalize(random_matrix(8, 3, rng));
  GrassmannOptions<double> o;
  o.gtol = 1e-10;
  o.ftol = 1e-15;
  const GrassmannResult<double> r = grassmann_minimize<double>(f, start, o);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(f.a);
  EXPECT_NEAR(r.value, es.eigenvalues().head(3).sum(), 1e-8);
  EXPECT_TRUE(r.converged());
  EXPECT_LT(principal_angles(r.point, es.eigenvectors().leftCols(3)).maxCoeff(), 1e-3);
  for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_LE(r.trace[i], r.trace[i - 1] + 1e-12);
}

TEST(Grassmann, MaxIterReported) {
  std::mt19937_64 rng(3);
  Rayleigh f{random_spd(8, rng)};
  GrassmannOptions<double> o;
  o.max_iter = 1;
  o.gtol = 0.0;
  o.ftol = 0.0;
  const GrassmannResult<double> r = grassmann_minimize<double>(f, orthonormalize(random_matrix(8, 3, rng)), o);
  EXPECT_EQ(r.reason, StopReason::MaxIter);
  EXPECT_FALSE(r.converged());
}

TEST(EnvelopeObjective, EigenSumFormAndInvariance) {
  const auto s = simulate_sample({2, 3, 1, 5}, 300, 11);
  const EnvelopeObjective obj(s.acov, 2);
  std::mt19937_64 rng(4);
  for (int k = 1; k <= 5; ++k) {
    const MatrixXd d = orthonormalize(random_matrix(5, k, rng));
    EXPECT_NEAR(obj.value(d), obj.value_eigen_sum(d), 1e-10);
    // Depends on span(D) only.
    const MatrixXd o = orthonormalize(random_matrix(k, k, rng));
    EXPECT_NEAR(obj.value(d), obj.value(MatrixXd(d * o)), 1e-10);
  }
}

TEST(EnvelopeObjective, GradientMatchesFiniteDifferences) {
  const auto s = simulate_sample({2, 3, 1, 6}, 300, 12);
  const EnvelopeObjective obj(s.acov, 2);
  std::mt19937_64 rng(5);
  for (int k : {1, 2, 3, 4}) {
    const MatrixXd d = orthonormalize(random_matrix(6, k, rng));
    const MatrixXd g = obj.gradient(d), gf = obj.gradient_fd(d);
    EXPECT_LT((g - gf).norm() / gf.norm(), 1e-6) << k;
  }
}

TEST(EnvelopeObjective, FullSpaceValue) {
  // At D = I_q: log|G0| + log|G0^{-1}| = 0 and the sum equals log|Sigma_RR| - log|G0|.
  const auto s = simulate_sample({2, 3, 1, 4}, 300, 13);
  const EnvelopeObjective obj(s.acov, 2);
  const VarEstimate rr = fit_rrvar(s.acov, 2);
  EXPECT_NEAR(obj.value(MatrixXd::Identity(4, 4)), logdet_spd(rr.sigma) - logdet_spd(s.acov.gamma0), 1e-10);
}

TEST(EnvelopeOptimizer, FgAndOneDAgree) {
  const auto s = simulate_sample({2, 3, 1, 6}, 500, 14);
  const EnvelopeObjective obj(s.acov, 2);
  EnvelopeOptions o;
  const EnvelopeFit fg = optimize_envelope_fg(obj, 3, o);
  const EnvelopeFit od = optimize_envelope_1d(obj, 3, o);
  EXPECT_LT(fg.objective, od.objective + 1e-3);
  EXPECT_LT(principal_angles(fg.phi, od.phi).maxCoeff(), 0.05);
  EXPECT_LT((fg.phi.transpose() * fg.phi - MatrixXd::Identity(3, 3)).norm(), 1e-10);
  EXPECT_FALSE(fg.start.empty());
}

TEST(EnvelopeOptimizer, RecoversTrueEnvelopeAtLargeT) {
  const auto s = simulate_sample({1, 2, 1, 5}, 20000, 15);
  const EnvelopeObjective obj(s.acov, 1);
  const EnvelopeFit fit = optimize_envelope(obj, 2);
  EXPECT_LT(principal_angles(fit.phi, s.truth.phi).maxCoeff(), 0.1);
}

TEST(EnvelopeOptimizer, DeterministicUnderSeed) {
  const auto s = simulate_sample({2, 3, 1, 6}, 300, 16);
  const EnvelopeObjective obj(s.acov, 2);
  EnvelopeOptions o;
  o.seed = 99;
  o.restarts = 7;
  const EnvelopeFit a = optimize_envelope(obj, 3, o), b = optimize_envelope(obj, 3, o);
  EXPECT_EQ((a.phi - b.phi).norm(), 0.0);
  EXPECT_EQ(a.start, b.start);
}
