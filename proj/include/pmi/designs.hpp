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

// Codebooks, dimensionality-reduction designs and a synthetic multipath
// channel generator.

#ifndef PMI_DESIGNS_HPP
#define PMI_DESIGNS_HPP

#include <cstdint>

#include "pmi/model.hpp"

namespace pmi {

/// Haar-distributed d x p matrix with orthonormal columns: QR of a Gaussian
/// matrix with the phases of R's diagonal moved into Q.
template <typename Scalar>
Mat<Scalar> haar_stiefel(Eigen::Index d, Eigen::Index p, Rng& rng) {
  require(p >= 1 && p <= d, "haar_stiefel: need 1 <= p <= d");
  const Mat<Scalar> g = gaussian_matrix<Scalar>(d, p, rng);
  Eigen::HouseholderQR<Mat<Scalar>> qr(g);
  Mat<Scalar> q = qr.householderQ() * Mat<Scalar>::Identity(d, p);
  const Mat<Scalar>& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < p; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

/// Real identity codebook I_p (N = p, zero coherence).
Codebook<double> identity_codebook(Eigen::Index p);

/// Normalized DFT codebook DFT(p) / sqrt(p).
Codebook<cd> dft_codebook(Eigen::Index p);

/// Width-2 codebook whose blocks are all unordered pairs of DFT(p) columns.
Codebook<cd> dft_pair_codebook(Eigen::Index p);

/// Q_out U with Q_out the top-p eigenvectors of sigma_ul and U Haar p x p.
CMat structured_q(const CMat& sigma_ul, Eigen::Index p, Rng& rng);

/// I_2 kron (F_2 kron F_2) / 2 with F_2 = [[1, 1], [1, -1]].
CMat type1_inner();

/// First-round design eigvecs(sigma_ul, 8) times type1_inner().
CMat type1_q1(const CMat& sigma_ul);

struct SyntheticChannel {
  CMat h;         // d x N_r, unit Frobenius norm
  CMat sigma_ul;  // d x d uplink covariance
};

/// Finite-ray uniform-linear-array channel. Downlink and uplink share path
/// angles; the uplink covariance has independent path powers and a small
/// noise floor.
SyntheticChannel synthetic_channel(Eigen::Index d, Eigen::Index n_r, int paths, Rng& rng);

/// Unit-norm ULA steering vector for spacing `spacing` wavelengths.
CVec steering_vector(Eigen::Index n, double angle, double spacing = 0.5);

}  // namespace pmi

#endif  // PMI_DESIGNS_HPP
