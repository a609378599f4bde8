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

// Random instances shared by the unit and acceptance tests.

#ifndef PMI_TESTS_SUPPORT_RANDOM_HPP
#define PMI_TESTS_SUPPORT_RANDOM_HPP

#include <random>
#include <vector>

#include "pmi/designs.hpp"
#include "pmi/model.hpp"

namespace pmi::testing {

inline long uniform_int(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

inline double uniform_real(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Unit-norm Gaussian codewords, grouped into blocks of `width`.
template <typename Scalar>
Codebook<Scalar> random_codebook(Eigen::Index p, Eigen::Index n, Eigen::Index width, Rng& rng) {
  Mat<Scalar> v = gaussian_matrix<Scalar>(p, n * width, rng);
  for (Eigen::Index j = 0; j < v.cols(); ++j) v.col(j).normalize();
  return Codebook<Scalar>(v, width);
}

template <typename Scalar>
MeasurementDesign<Scalar> random_design(Eigen::Index d, Eigen::Index p, Eigen::Index n, Eigen::Index t_count,
                                        Eigen::Index width, Rng& rng) {
  auto cb = random_codebook<Scalar>(p, n, width, rng);
  std::vector<Mat<Scalar>> qs;
  for (Eigen::Index t = 0; t < t_count; ++t) qs.push_back(haar_stiefel<Scalar>(d, p, rng));
  return MeasurementDesign<Scalar>(cb, qs);
}

template <typename Scalar>
EstimationProblem<Scalar> random_problem(Eigen::Index d, Eigen::Index p, Eigen::Index n, Eigen::Index t_count,
                                         double tau, Rng& rng, Eigen::Index width = 1) {
  auto design = random_design<Scalar>(d, p, n, t_count, width, rng);
  std::vector<std::size_t> pmis;
  for (Eigen::Index t = 0; t < t_count; ++t) pmis.push_back(static_cast<std::size_t>(uniform_int(rng, 0, n - 1)));
  return EstimationProblem<Scalar>(std::move(design), pmis, tau);
}

/// Frobenius distance between the orthogonal projectors of two matrices with
/// orthonormal columns; sqrt(2) times the l2 norm of the principal-angle sines.
template <typename Scalar>
double subspace_gap(const Mat<Scalar>& a, const Mat<Scalar>& b) {
  return (a * a.adjoint() - b * b.adjoint()).norm();
}

}  // namespace pmi::testing

#endif  // PMI_TESTS_SUPPORT_RANDOM_HPP
