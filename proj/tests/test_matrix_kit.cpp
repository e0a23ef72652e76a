#include <gtest/gtest.h>

#include "support.hpp"

using namespace revar;
using revar::testing::random_matrix;
using revar::testing::random_spd;

TEST(SymmetricMatrix, SymmetrizesOnConstruction) {
  MatrixXd m(2, 2);
  m << 1, 2, 4, 3;
  const SymMatd s(m);
  EXPECT_DOUBLE_EQ(s.matrix()(0, 1), 3.0);
  EXPECT_DOUBLE_EQ(s.matrix()(1, 0), 3.0);
  EXPECT_THROW(SymMatd(MatrixXd(2, 3)), Error);
}

TEST(SymPower, PowersAreConsistent) {
  std::mt19937_64 rng(3);
  const MatrixXd m = random_spd(5, rng);
  const MatrixXd r = sym_power(SymMatd(m), SymPower::Sqrt);
  const MatrixXd ri = sym_power(SymMatd(m), SymPower::InvSqrt);
  const MatrixXd inv = sym_power(SymMatd(m), SymPower::Inverse);
  EXPECT_LT((r * r - m).norm(), 1e-12);
  EXPECT_LT((ri * m * ri - MatrixXd::Identity(5, 5)).norm(), 1e-12);
  EXPECT_LT((inv * m - MatrixXd::Identity(5, 5)).norm(), 1e-12);
}

TEST(SymPower, RejectsIndefiniteAndSingular) {
  MatrixXd m = MatrixXd::Identity(3, 3);
  m(2, 2) = -1.0;
  try {
    sym_power(SymMatd(m), SymPower::Sqrt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotPSD);
  }
  m(2, 2) = 0.0;
  EXPECT_NO_THROW(sym_power(SymMatd(m), SymPower::Sqrt));
  try {
    sym_power(SymMatd(m), SymPower::Inverse);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Singular);
  }
}

TEST(Logdet, MatchesDeterminant) {
  std::mt19937_64 rng(4);
  const MatrixXd m = random_spd(4, rng);
  EXPECT_NEAR(logdet_spd(m), std::log(m.determinant()), 1e-12);
}

TEST(Kron, MatchesDefinitionAndVecIdentity) {
  std::mt19937_64 rng(5);
  const MatrixXd a = random_matrix(2, 3, rng), x = random_matrix(3, 4, rng), b = random_matrix(4, 2, rng);
  // vec(A X B) = (B' kron A) vec(X)
  EXPECT_LT((vec(MatrixXd(a * x * b)) - kron(MatrixXd(b.transpose()), a) * vec(x)).norm(), 1e-12);
  EXPECT_DOUBLE_EQ(kron(a, b)(2 * 4 - 1, 0), a(1, 0) * b(3, 0));
}

TEST(VecVech, RoundTripsAndDuplication) {
  std::mt19937_64 rng(6);
  const MatrixXd s = random_spd(4, rng);
  EXPECT_EQ(vech(s).size(), 10);
  EXPECT_LT((unvech(vech(s), 4) - s).norm(), 1e-15);
  const MatrixXd m = random_matrix(3, 5, rng);
  EXPECT_EQ((unvec(vec(m), 3, 5) - m).norm(), 0.0);
  const VecVechKit<double> kit = vec_vech_build<double>(4);
  EXPECT_LT((kit.expansion * vech(s) - vec(s)).norm(), 1e-15);
  EXPECT_LT((kit.contraction * vec(s) - vech(s)).norm(), 1e-15);
  EXPECT_LT((kit.expansion_pinv * kit.expansion - MatrixXd::Identity(10, 10)).norm(), 1e-15);
}

TEST(Commutation, TransposesVec) {
  std::mt19937_64 rng(7);
  const MatrixXd x = random_matrix(3, 5, rng);
  EXPECT_LT((commutation(3, 5) * vec(x) - vec(MatrixXd(x.transpose()))).norm(), 1e-15);
}

TEST(Projection, WeightedProjectionIsIdempotent) {
  std::mt19937_64 rng(8);
  const MatrixXd x = random_matrix(5, 2, rng), v = random_spd(5, rng);
  const auto pr = projection(x, v);
  EXPECT_LT((pr.p * pr.p - pr.p).norm(), 1e-12);
  EXPECT_LT((pr.p * x - x).norm(), 1e-12);
  EXPECT_LT((pr.p + pr.q - MatrixXd::Identity(5, 5)).norm(), 1e-15);
  const auto po = projection(x);
  EXPECT_LT((po.p - po.p.transpose()).norm(), 1e-15);
  EXPECT_THROW(projection(MatrixXd(MatrixXd::Zero(5, 2))), Error);
}

TEST(Pinv, MoorePenroseConditions) {
  std::mt19937_64 rng(9);
  const MatrixXd a = random_matrix(5, 2, rng) * random_matrix(2, 4, rng);
  const MatrixXd g = pinv(a);
  EXPECT_LT((a * g * a - a).norm(), 1e-10);
  EXPECT_LT((g * a * g - g).norm(), 1e-10);
  EXPECT_LT(((a * g).transpose() - a * g).norm(), 1e-10);
  const MatrixXd s = a.transpose() * a;
  EXPECT_LT((pinv_psd(SymMatd(s)) - pinv(s)).norm(), 1e-8);
}

TEST(Orthonormal, ComplementSpansTheRest) {
  std::mt19937_64 rng(10);
  const MatrixXd phi = orthonormalize(random_matrix(6, 2, rng));
  const MatrixXd phi0 = orthonormal_complement(phi);
  ASSERT_EQ(phi0.cols(), 4);
  EXPECT_LT((phi.transpose() * phi - MatrixXd::Identity(2, 2)).norm(), 1e-14);
  EXPECT_LT((phi0.transpose() * phi0 - MatrixXd::Identity(4, 4)).norm(), 1e-14);
  EXPECT_LT((phi.transpose() * phi0).norm(), 1e-14);
  EXPECT_EQ((orthonormal_complement(phi) - phi0).norm(), 0.0);
}

TEST(PrincipalAngles, KnownPlaneAngle) {
  MatrixXd a(3, 1), b(3, 1);
  a << 1, 0, 0;
  b << std::cos(0.3), std::sin(0.3), 0;
  EXPECT_NEAR(principal_angles(a, b)(0), 0.3, 1e-12);
}

TEST(ReducingResidual, ZeroForReducingSubspace) {
  std::mt19937_64 rng(11);
  const MatrixXd phi = orthonormalize(random_matrix(5, 2, rng));
  const MatrixXd phi0 = orthonormal_complement(phi);
  const MatrixXd m = phi * random_spd(2, rng) * phi.transpose() + phi0 * random_spd(3, rng) * phi0.transpose();
  EXPECT_LT(reducing_residual(m, phi), 1e-12);
  EXPECT_GT(reducing_residual(random_spd(5, rng), phi), 1e-3);
}

TEST(MatrixKit, LongDoubleInstantiation) {
  Mat<long double> m(2, 2);
  m << 4, 1, 1, 3;
  const Mat<long double> r = sym_power(SymmetricMatrix<long double>(m), SymPower::Sqrt);
  EXPECT_LT(static_cast<double>((r * r - m).norm()), 1e-15);
}
