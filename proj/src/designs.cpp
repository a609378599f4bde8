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

#include "pmi/designs.hpp"

#include <cmath>
#include <numbers>

namespace pmi {

Codebook<double> identity_codebook(Eigen::Index p) {
  require(p >= 1, "identity_codebook: p must be >= 1");
  return Codebook<double>(RMat::Identity(p, p));
}

Codebook<cd> dft_codebook(Eigen::Index p) {
  require(p >= 1, "dft_codebook: p must be >= 1");
  CMat v(p, p);
  const double scale = 1.0 / std::sqrt(static_cast<double>(p));
  for (Eigen::Index m = 0; m < p; ++m)
    for (Eigen::Index n = 0; n < p; ++n) {
      // reduce the exponent mod p to keep the phases exact for small p
      const double ang = -2.0 * std::numbers::pi * static_cast<double>((m * n) % p) / static_cast<double>(p);
      v(m, n) = std::polar(scale, ang);
    }
  return Codebook<cd>(v);
}

Codebook<cd> dft_pair_codebook(Eigen::Index p) {
  require(p >= 2, "dft_pair_codebook: p must be >= 2");
  const CMat f = dft_codebook(p).matrix();
  CMat v(p, p * (p - 1));
  Eigen::Index c = 0;
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = i + 1; j < p; ++j) {
      v.col(c++) = f.col(i);
      v.col(c++) = f.col(j);
    }
  return Codebook<cd>(v, 2);
}

CMat structured_q(const CMat& sigma_ul, Eigen::Index p, Rng& rng) {
  require(sigma_ul.rows() == sigma_ul.cols(), "structured_q: covariance must be square");
  require(is_hermitian(sigma_ul), "structured_q: covariance must be Hermitian");
  require(p >= 1 && p <= sigma_ul.rows(), "structured_q: p out of range");
  const CMat q_out = top_eigvecs(sigma_ul, p);
  return q_out * haar_stiefel<cd>(p, p, rng);
}

CMat type1_inner() {
  CMat f2(2, 2);
  f2 << 1, 1, 1, -1;
  const CMat i2 = CMat::Identity(2, 2);
  return kron<cd>(i2, kron<cd>(f2, f2) / 2.0);
}

CMat type1_q1(const CMat& sigma_ul) {
  require(sigma_ul.rows() == sigma_ul.cols(), "type1_q1: covariance must be square");
  require(sigma_ul.rows() >= 8, "type1_q1: need d >= 8");
  require(is_hermitian(sigma_ul), "type1_q1: covariance must be Hermitian");
  return top_eigvecs(sigma_ul, 8) * type1_inner();
}

CVec steering_vector(Eigen::Index n, double angle, double spacing) {
  CVec a(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    a(i) = std::polar(scale, 2.0 * std::numbers::pi * spacing * static_cast<double>(i) * std::sin(angle));
  return a;
}

SyntheticChannel synthetic_channel(Eigen::Index d, Eigen::Index n_r, int paths, Rng& rng) {
  require(d >= 1 && n_r >= 1, "synthetic_channel: dimensions must be >= 1");
  require(paths >= 1, "synthetic_channel: paths must be >= 1");
  constexpr double kNoiseFloor = 1e-3;
  std::uniform_real_distribution<double> dl_angle(-std::numbers::pi / 3.0, std::numbers::pi / 3.0);
  std::uniform_real_distribution<double> ue_angle(-std::numbers::pi / 2.0, std::numbers::pi / 2.0);

  SyntheticChannel ch;
  ch.h = CMat::Zero(d, n_r);
  ch.sigma_ul = CMat::Zero(d, d);
  for (int l = 0; l < paths; ++l) {
    const double phi = dl_angle(rng);
    const double psi = ue_angle(rng);
    const cd g = standard_normal<cd>(rng);
    ch.h.noalias() += g * steering_vector(d, phi) * steering_vector(n_r, psi).adjoint();
    const double power = std::norm(standard_normal<cd>(rng));
    const CVec a = steering_vector(d, phi);
    ch.sigma_ul.noalias() += power * a * a.adjoint();
  }
  const double tr = ch.sigma_ul.trace().real();
  ch.sigma_ul += (kNoiseFloor * tr / static_cast<double>(d)) * CMat::Identity(d, d);
  ch.sigma_ul = (ch.sigma_ul + ch.sigma_ul.adjoint()).eval() / 2.0;
  ch.h /= ch.h.norm();
  return ch;
}

}  // namespace pmi
