// Copyright 2026 The PMI Channel Estimation Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Small dense helpers shared by the estimators: ordered Hermitian
// eigendecompositions, orthonormal bases and isometry checks.

#ifndef PMI_LINALG_HPP
#define PMI_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "pmi/types.hpp"

namespace pmi {

/// Eigenpairs of a Hermitian matrix in descending eigenvalue order.
template <typename Scalar>
struct OrderedEigen {
  Vec<RealOf<Scalar>> values;
  Mat<Scalar> vectors;
};

/// Rotates each column so that its first entry with magnitude above `tol`
/// (relative to the column norm) is real and positive.
template <typename Scalar>
void normalize_column_phases(Mat<Scalar>& m, double tol = 1e-9) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const double n = m.col(j).norm();
    if (n == 0.0) continue;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double mag = std::abs(m(i, j));
      if (mag > tol * n) {
        const Scalar phase = m(i, j) / mag;
        m.col(j) *= Eigen::numext::conj(phase);
        break;
      }
    }
  }
}

/// Descending-order eigendecomposition; ties in ordering are resolved by the
/// solver's ascending index, and each eigenvector's phase is normalized.
template <typename Scalar>
OrderedEigen<Scalar> ordered_eigen(const Mat<Scalar>& hermitian) {
  require(hermitian.rows() == hermitian.cols(), "ordered_eigen: matrix must be square");
  const Mat<Scalar> sym = (hermitian + hermitian.adjoint()) / RealOf<Scalar>(2);
  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(sym);
  if (es.info() != Eigen::Success) throw NumericalError("ordered_eigen: eigensolver failed");
  const Eigen::Index n = sym.rows();
  OrderedEigen<Scalar> out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = es.eigenvalues()(n - 1 - k);
    out.vectors.col(k) = es.eigenvectors().col(n - 1 - k);
  }
  normalize_column_phases(out.vectors);
  return out;
}

/// The `r` dominant eigenvectors (columns) of a Hermitian matrix.
template <typename Scalar>
Mat<Scalar> top_eigvecs(const Mat<Scalar>& hermitian, Eigen::Index r) {
  require(r >= 0 && r <= hermitian.rows(), "top_eigvecs: r out of range");
  return ordered_eigen(hermitian).vectors.leftCols(r);
}

template <typename Scalar>
bool is_hermitian(const Mat<Scalar>& a, double tol = 1e-10) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(1.0, a.norm());
  return (a - a.adjoint()).norm() <= tol * scale;
}

/// max-abs deviation of Q^H Q from the identity.
template <typename Scalar>
double isometry_defect(const Mat<Scalar>& q) {
  const Mat<Scalar> g = q.adjoint() * q;
  return (g - Mat<Scalar>::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

/// Orthonormal basis for the column space of `a` (rank-revealing).
template <typename Scalar>
Mat<Scalar> orthonormal_basis(const Mat<Scalar>& a, double tol = 1e-12) {
  if (a.cols() == 0 || a.norm() == 0.0) return Mat<Scalar>(a.rows(), 0);
  Eigen::ColPivHouseholderQR<Mat<Scalar>> qr(a);
  qr.setThreshold(tol);
  const Eigen::Index rank = qr.rank();
  Mat<Scalar> q = qr.householderQ() * Mat<Scalar>::Identity(a.rows(), rank);
  return q;
}

/// Orthonormal basis of the orthogonal complement of range(a), a having
/// orthonormal columns.
template <typename Scalar>
Mat<Scalar> complement_basis(const Mat<Scalar>& a) {
  const Eigen::Index d = a.rows();
  if (a.cols() == 0) return Mat<Scalar>::Identity(d, d);
  Eigen::HouseholderQR<Mat<Scalar>> qr(a);
  const Mat<Scalar> full = qr.householderQ() * Mat<Scalar>::Identity(d, d);
  return full.rightCols(d - a.cols());
}

/// Orthogonal projector onto range(a) for a with orthonormal columns.
template <typename Scalar>
Mat<Scalar> projector(const Mat<Scalar>& orthonormal) {
  return orthonormal * orthonormal.adjoint();
}

/// Unitary polar factor U V^H of a square matrix.
template <typename Scalar>
Mat<Scalar> polar_factor(const Mat<Scalar>& m) {
  Eigen::JacobiSVD<Mat<Scalar>> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

/// Kronecker product of two dense matrices.
template <typename Scalar>
Mat<Scalar> kron(const Mat<Scalar>& a, const Mat<Scalar>& b) {
  Mat<Scalar> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace pmi

#endif  // PMI_LINALG_HPP
