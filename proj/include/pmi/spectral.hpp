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

// Spectral beam-space estimate from reported codewords.

#ifndef PMI_SPECTRAL_HPP
#define PMI_SPECTRAL_HPP

#include <vector>

#include "pmi/model.hpp"

namespace pmi {

template <typename Scalar>
struct SpectralResult {
  Mat<Scalar> x;            // d x r, orthonormal columns
  bool degenerate = false;  // fewer than r directions carry energy
};

/// (1/T) sum_t Q_t V_{I_t} V_{I_t}^H Q_t^H.
template <typename Scalar>
Mat<Scalar> spectral_matrix(const MeasurementDesign<Scalar>& design, const std::vector<std::size_t>& pmis) {
  require(static_cast<Eigen::Index>(pmis.size()) == design.num_rounds(), "spectral_matrix: one PMI per round");
  const Eigen::Index d = design.dim();
  Mat<Scalar> m = Mat<Scalar>::Zero(d, d);
  for (Eigen::Index t = 0; t < design.num_rounds(); ++t) {
    const auto b = design.block(t, static_cast<Eigen::Index>(pmis[static_cast<std::size_t>(t)]));
    m.noalias() += b * b.adjoint();
  }
  return m / static_cast<double>(design.num_rounds());
}

/// Top-r eigenvectors of spectral_matrix.
template <typename Scalar>
SpectralResult<Scalar> spectral_estimate(const MeasurementDesign<Scalar>& design,
                                         const std::vector<std::size_t>& pmis, Eigen::Index r) {
  require(r >= 1 && r <= design.dim(), "spectral_estimate: r out of range");
  const auto eig = ordered_eigen(spectral_matrix(design, pmis));
  SpectralResult<Scalar> out;
  out.x = eig.vectors.leftCols(r);
  const double lmax = eig.values(0);
  out.degenerate = !(eig.values(r - 1) > 1e-12 * std::max(lmax, 1e-300));
  return out;
}

template <typename Scalar>
SpectralResult<Scalar> spectral_estimate(const EstimationProblem<Scalar>& problem, Eigen::Index r) {
  return spectral_estimate(problem.design(), problem.pmis(), r);
}

}  // namespace pmi

#endif  // PMI_SPECTRAL_HPP
