#pragma once

// Dense symmetric linear algebra and vec/vech calculus shared by every
// other module. Everything here is a pure function templated on the scalar.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "revar/error.hpp"

namespace revar {

using Index = Eigen::Index;

template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = Mat<double>;
using VectorXd = Vec<double>;

/// Square matrix that is exactly symmetric: the input is replaced by
/// (M + M')/2 on construction.
template <class Scalar>
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;

  template <class Derived>
  SymmetricMatrix(const Eigen::MatrixBase<Derived>& m) {  // NOLINT: implicit by design of call sites
    if (m.rows() != m.cols()) {
      throw Error(ErrorKind::DimensionMismatch, "symmetric matrix must be square");
    }
    data_ = (m + m.transpose()) / Scalar(2);
  }

  Index dim() const { return data_.rows(); }
  const Mat<Scalar>& matrix() const { return data_; }
  operator const Mat<Scalar>&() const { return data_; }  // NOLINT

 private:
  Mat<Scalar> data_;
};

using SymMatd = SymmetricMatrix<double>;

enum class SymPower { Sqrt, InvSqrt, Inverse };

template <class Scalar>
Scalar spectral_norm_symmetric(const SymmetricMatrix<Scalar>& m) {
  if (m.dim() == 0) return Scalar(0);
  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(m.matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

/// V diag(lambda^e) V' from the symmetric eigendecomposition.
///
/// Eigenvalues below 1e-12 * ||M||_2 are clamped to that floor for the square
/// root and rejected (Singular) for the negative powers. A negative eigenvalue
/// beyond -1e-10 * ||M||_2 is NotPSD.
template <class Scalar>
Mat<Scalar> sym_power(const SymmetricMatrix<Scalar>& m, SymPower power) {
  const Index n = m.dim();
  if (n == 0) return Mat<Scalar>(0, 0);
  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(m.matrix());
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::Singular, "eigendecomposition failed");
  }
  Vec<Scalar> lambda = es.eigenvalues();
  const Scalar norm = lambda.cwiseAbs().maxCoeff();
  if (norm == Scalar(0)) {
    if (power == SymPower::Sqrt) return Mat<Scalar>::Zero(n, n);
    throw Error(ErrorKind::Singular, "negative power of the zero matrix");
  }
  if (lambda.minCoeff() < Scalar(-1e-10) * norm) {
    throw Error(ErrorKind::NotPSD, "minimum eigenvalue " + std::to_string(double(lambda.minCoeff())) +
                                       " below tolerance");
  }
  const Scalar floor = Scalar(1e-12) * norm;
  for (Index i = 0; i < n; ++i) {
    Scalar l = lambda(i);
    if (l < floor) {
      if (power != SymPower::Sqrt) {
        throw Error(ErrorKind::Singular, "eigenvalue below 1e-12 relative floor");
      }
      l = floor;
    }
    switch (power) {
      case SymPower::Sqrt: lambda(i) = std::sqrt(l); break;
      case SymPower::InvSqrt: lambda(i) = Scalar(1) / std::sqrt(l); break;
      case SymPower::Inverse: lambda(i) = Scalar(1) / l; break;
    }
  }
  const Mat<Scalar>& v = es.eigenvectors();
  Mat<Scalar> out = v * lambda.asDiagonal() * v.transpose();
  return (out + out.transpose()) / Scalar(2);
}

template <class Scalar>
Scalar min_eigenvalue(const SymmetricMatrix<Scalar>& m) {
  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(m.matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

/// log|M| for symmetric positive definite M; Singular otherwise.
template <class Derived>
typename Derived::Scalar logdet_spd(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  if (m.rows() == 0) return Scalar(0);
  Eigen::LLT<Mat<Scalar>> llt(m.derived());
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::Singular, "matrix is not positive definite");
  }
  const auto& l = llt.matrixLLT();
  Scalar sum(0);
  for (Index i = 0; i < l.rows(); ++i) sum += std::log(l(i, i));
  return Scalar(2) * sum;
}

template <class DerivedA, class DerivedB>
Mat<typename DerivedA::Scalar> kron(const Eigen::MatrixBase<DerivedA>& a,
                                    const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  Mat<Scalar> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

template <class Derived>
Vec<typename Derived::Scalar> vec(const Eigen::MatrixBase<Derived>& m) {
  Mat<typename Derived::Scalar> tmp = m;
  return Eigen::Map<const Vec<typename Derived::Scalar>>(tmp.data(), tmp.size());
}

template <class Derived>
Mat<typename Derived::Scalar> unvec(const Eigen::MatrixBase<Derived>& v, Index rows, Index cols) {
  if (v.size() != rows * cols) throw Error(ErrorKind::DimensionMismatch, "unvec size");
  Vec<typename Derived::Scalar> tmp = v;
  return Eigen::Map<const Mat<typename Derived::Scalar>>(tmp.data(), rows, cols);
}

/// Lower triangle, column by column, diagonal included.
template <class Derived>
Vec<typename Derived::Scalar> vech(const Eigen::MatrixBase<Derived>& m) {
  const Index q = m.rows();
  Vec<typename Derived::Scalar> out(q * (q + 1) / 2);
  Index k = 0;
  for (Index j = 0; j < q; ++j) {
    for (Index i = j; i < q; ++i) out(k++) = m(i, j);
  }
  return out;
}

template <class Derived>
Mat<typename Derived::Scalar> unvech(const Eigen::MatrixBase<Derived>& v, Index q) {
  if (v.size() != q * (q + 1) / 2) throw Error(ErrorKind::DimensionMismatch, "unvech size");
  Mat<typename Derived::Scalar> out(q, q);
  Index k = 0;
  for (Index j = 0; j < q; ++j) {
    for (Index i = j; i < q; ++i) {
      out(i, j) = v(k);
      out(j, i) = v(k);
      ++k;
    }
  }
  return out;
}

/// Commutation matrix K with K vec(X) = vec(X') for X of size rows x cols.
template <class Scalar = double>
Mat<Scalar> commutation(Index rows, Index cols) {
  Mat<Scalar> k = Mat<Scalar>::Zero(rows * cols, rows * cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) k(i * cols + j, j * rows + i) = Scalar(1);
  }
  return k;
}

/// Expansion E_q, contraction C_q (0/1 selection) and E_q^+ = (E'E)^{-1}E'.
template <class Scalar = double>
struct VecVechKit {
  Index dim = 0;
  Mat<Scalar> expansion;
  Mat<Scalar> contraction;
  Mat<Scalar> expansion_pinv;
};

template <class Scalar = double>
VecVechKit<Scalar> vec_vech_build(Index q) {
  if (q < 1) throw Error(ErrorKind::InvalidArgument, "vec_vech_build requires q >= 1");
  const Index m = q * (q + 1) / 2;
  VecVechKit<Scalar> kit;
  kit.dim = q;
  kit.expansion = Mat<Scalar>::Zero(q * q, m);
  kit.contraction = Mat<Scalar>::Zero(m, q * q);
  Index k = 0;
  for (Index j = 0; j < q; ++j) {
    for (Index i = j; i < q; ++i) {
      kit.expansion(j * q + i, k) = Scalar(1);
      kit.expansion(i * q + j, k) = Scalar(1);
      kit.contraction(k, j * q + i) = Scalar(1);
      ++k;
    }
  }
  // E'E is diagonal (1 on the diagonal entries of U, 2 off it).
  Vec<Scalar> counts = kit.expansion.colwise().sum().transpose();
  kit.expansion_pinv = counts.cwiseInverse().asDiagonal() * kit.expansion.transpose();
  return kit;
}

template <class Scalar>
struct Projection {
  Mat<Scalar> p;
  Mat<Scalar> q;
};

/// P = X (X'VX)^{-1} X'V and Q = I - P.
template <class DerivedX, class DerivedV>
Projection<typename DerivedX::Scalar> projection(const Eigen::MatrixBase<DerivedX>& x,
                                                 const Eigen::MatrixBase<DerivedV>& v) {
  using Scalar = typename DerivedX::Scalar;
  const Index n = x.rows();
  if (v.rows() != n || v.cols() != n) throw Error(ErrorKind::DimensionMismatch, "projection V");
  Mat<Scalar> xv = x.transpose() * v;
  Mat<Scalar> gram = xv * x;
  Eigen::ColPivHouseholderQR<Mat<Scalar>> qr(gram);
  qr.setThreshold(Scalar(1e-12));
  if (x.cols() > 0 && qr.rank() < x.cols()) {
    throw Error(ErrorKind::RankDeficient, "X'VX is not invertible");
  }
  Projection<Scalar> out;
  out.p = x.cols() == 0 ? Mat<Scalar>::Zero(n, n) : Mat<Scalar>(x * qr.solve(xv));
  out.q = Mat<Scalar>::Identity(n, n) - out.p;
  return out;
}

template <class DerivedX>
Projection<typename DerivedX::Scalar> projection(const Eigen::MatrixBase<DerivedX>& x) {
  using Scalar = typename DerivedX::Scalar;
  Projection<Scalar> out = projection(x, Mat<Scalar>::Identity(x.rows(), x.rows()));
  out.p = (out.p + out.p.transpose()) / Scalar(2);
  out.q = Mat<Scalar>::Identity(x.rows(), x.rows()) - out.p;
  return out;
}

/// Moore-Penrose inverse via SVD; singular values below rel_tol * sigma_1 are zeroed.
template <class Derived>
Mat<typename Derived::Scalar> pinv(const Eigen::MatrixBase<Derived>& a, double rel_tol = 1e-10) {
  using Scalar = typename Derived::Scalar;
  Eigen::BDCSVD<Mat<Scalar>> svd(a.derived(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vec<Scalar>& s = svd.singularValues();
  if (s.size() == 0) return Mat<Scalar>::Zero(a.cols(), a.rows());
  const Scalar cut = Scalar(rel_tol) * s(0);
  Vec<Scalar> inv(s.size());
  for (Index i = 0; i < s.size(); ++i) inv(i) = s(i) > cut ? Scalar(1) / s(i) : Scalar(0);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

/// Pseudoinverse of a symmetric PSD matrix. Its eigendecomposition is its SVD,
/// so this is the same thresholded pseudoinverse at lower cost.
template <class Scalar>
Mat<Scalar> pinv_psd(const SymmetricMatrix<Scalar>& a, double rel_tol = 1e-10) {
  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(a.matrix());
  const Vec<Scalar>& l = es.eigenvalues();
  if (l.size() == 0) return Mat<Scalar>(0, 0);
  const Scalar cut = Scalar(rel_tol) * l.cwiseAbs().maxCoeff();
  Vec<Scalar> inv(l.size());
  for (Index i = 0; i < l.size(); ++i) inv(i) = std::abs(l(i)) > cut ? Scalar(1) / l(i) : Scalar(0);
  Mat<Scalar> out = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
  return (out + out.transpose()) / Scalar(2);
}

/// Thin QR basis of span(X) with the triangular factor's diagonal made positive.
template <class Derived>
Mat<typename Derived::Scalar> orthonormalize(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  const Index n = x.rows();
  const Index k = x.cols();
  Eigen::HouseholderQR<Mat<Scalar>> qr(x.derived());
  Mat<Scalar> q = qr.householderQ() * Mat<Scalar>::Identity(n, k);
  const auto& r = qr.matrixQR();
  for (Index j = 0; j < k; ++j) {
    if (r(j, j) < Scalar(0)) q.col(j) = -q.col(j);
  }
  return q;
}

/// Orthonormal basis of the orthogonal complement of span(Phi), from a column
/// pivoted QR of I - Phi Phi'. Deterministic for a given Phi.
template <class Derived>
Mat<typename Derived::Scalar> orthonormal_complement(const Eigen::MatrixBase<Derived>& phi) {
  using Scalar = typename Derived::Scalar;
  const Index q = phi.rows();
  const Index u = phi.cols();
  if (u >= q) return Mat<Scalar>(q, 0);
  Mat<Scalar> resid = Mat<Scalar>::Identity(q, q) - phi * phi.transpose();
  Eigen::ColPivHouseholderQR<Mat<Scalar>> qr(resid);
  Mat<Scalar> basis = qr.householderQ() * Mat<Scalar>::Identity(q, q - u);
  const auto& r = qr.matrixQR();
  for (Index j = 0; j < q - u; ++j) {
    if (r(j, j) < Scalar(0)) basis.col(j) = -basis.col(j);
  }
  // One Gram-Schmidt pass against Phi removes the O(eps) leakage.
  basis -= phi * (phi.transpose() * basis);
  return orthonormalize(basis);
}

/// Principal angles (radians, ascending) between span(A) and span(B).
template <class DerivedA, class DerivedB>
Vec<typename DerivedA::Scalar> principal_angles(const Eigen::MatrixBase<DerivedA>& a,
                                                const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  Mat<Scalar> qa = orthonormalize(a);
  Mat<Scalar> qb = orthonormalize(b);
  Eigen::JacobiSVD<Mat<Scalar>> svd(qa.transpose() * qb);
  Vec<Scalar> s = svd.singularValues();
  Vec<Scalar> angles(s.size());
  for (Index i = 0; i < s.size(); ++i) {
    angles(i) = std::acos(std::clamp(s(i), Scalar(-1), Scalar(1)));
  }
  return angles;
}

/// || M - P M P - Q M Q ||_F for the orthogonal projection P onto span(Phi).
template <class DerivedM, class DerivedP>
typename DerivedM::Scalar reducing_residual(const Eigen::MatrixBase<DerivedM>& m,
                                            const Eigen::MatrixBase<DerivedP>& phi) {
  auto proj = projection(phi);
  return (m - proj.p * m * proj.p - proj.q * m * proj.q).norm();
}

}  // namespace revar
