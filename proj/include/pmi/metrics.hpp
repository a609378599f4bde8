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

// Phase-invariant distances and beam-space quality metrics.

#ifndef PMI_METRICS_HPP
#define PMI_METRICS_HPP

#include <cmath>
#include <limits>

#include "pmi/linalg.hpp"
#include "pmi/types.hpp"

namespace pmi {

/// min over unit-modulus c of ||x - c y||.
template <typename Scalar>
double dist(const Vec<Scalar>& x, const Vec<Scalar>& y) {
  require(x.size() == y.size(), "dist: length mismatch");
  // aligned residual, not the expanded quadratic, so near-equal inputs keep
  // full relative accuracy
  const Scalar c = y.dot(x);  // y^H x
  const double mag = std::abs(c);
  Scalar rot(1);
  if (mag > 0.0) rot = c / mag;
  return (x - rot * y).norm();
}

/// ||x_hat e^{-j arg(h^H x_hat)} - h||^2, computed directly.
template <typename Scalar>
double phase_aligned_mse(const Vec<Scalar>& x_hat, const Vec<Scalar>& h) {
  require(x_hat.size() == h.size(), "phase_aligned_mse: length mismatch");
  const Scalar c = h.dot(x_hat);  // h^H x_hat
  const double mag = std::abs(c);
  Scalar rot(1);
  if (mag > 0.0) rot = Eigen::numext::conj(c) / mag;
  return (x_hat * rot - h).squaredNorm();
}

struct BeamPrecision {
  double value = 0.0;
  bool degenerate = false;  // rank(H) < r or H_hat spans fewer than r directions
};

/// Fraction of the optimal rank-r energy of H captured by range(H_hat).
template <typename Scalar>
BeamPrecision beam_precision(const Mat<Scalar>& h_hat, const Mat<Scalar>& h) {
  require(h_hat.rows() == h.rows(), "beam_precision: row mismatch");
  require(h.norm() > 0.0, "beam_precision: H must be nonzero");
  const Eigen::Index r = h_hat.cols();
  require(r >= 1 && r <= h.rows(), "beam_precision: invalid estimate width");
  BeamPrecision out;
  const Mat<Scalar> q = orthonormal_basis(h_hat);
  if (q.cols() < r) out.degenerate = true;

  Eigen::JacobiSVD<Mat<Scalar>> svd(h);
  const auto& s = svd.singularValues();
  const double tol = std::max(h.rows(), h.cols()) * std::numeric_limits<double>::epsilon() * s(0);
  double denom = 0.0;
  for (Eigen::Index i = 0; i < std::min<Eigen::Index>(r, s.size()); ++i) {
    if (s(i) <= tol) {
      out.degenerate = true;
      break;
    }
    denom += s(i) * s(i);
  }
  if (s.size() < r) out.degenerate = true;
  out.value = (q.adjoint() * h).squaredNorm() / denom;
  return out;
}

/// Relative change between iterates modulo a right unitary factor. For one
/// column this is the phase-aligned form. Returns +inf if X_old = 0.
template <typename Scalar>
double procrustes_rel_change(const Mat<Scalar>& x_new, const Mat<Scalar>& x_old) {
  require(x_new.rows() == x_old.rows() && x_new.cols() == x_old.cols(), "procrustes_rel_change: shape mismatch");
  const double denom = x_old.norm();
  if (denom == 0.0) return std::numeric_limits<double>::infinity();
  if (x_new.cols() == 1) {
    const Scalar c = x_old.col(0).dot(x_new.col(0));  // x_old^H x_new
    const double mag = std::abs(c);
    Scalar rot(1);
    if (mag > 0.0) rot = Eigen::numext::conj(c) / mag;
    return (x_new * rot - x_old).norm() / denom;
  }
  const Mat<Scalar> r = polar_factor<Scalar>(x_new.adjoint() * x_old);
  return (x_new * r - x_old).norm() / denom;
}

}  // namespace pmi

#endif  // PMI_METRICS_HPP
