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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "pmi/designs.hpp"
#include "pmi/linalg.hpp"
#include "support/random.hpp"

using namespace pmi;
using pmi::testing::subspace_gap;

namespace {

/// Hermitian PSD matrix with a clear spectral gap after the first `strong` eigenvalues.
CMat gapped_covariance(Eigen::Index d, Eigen::Index strong, Rng& rng) {
  const CMat u = haar_stiefel<cd>(d, d, rng);
  RVec lam(d);
  for (Eigen::Index i = 0; i < d; ++i) lam(i) = i < strong ? 10.0 + static_cast<double>(strong - i) : 1.0 / (1.0 + i);
  return u * lam.asDiagonal() * u.adjoint();
}

}  // namespace

TEST_CASE("DFT codebook is unitary") {
  for (Eigen::Index p : {1, 2, 4, 8}) {
    const auto cb = dft_codebook(p);
    CHECK(cb.size() == p);
    CHECK((cb.matrix().adjoint() * cb.matrix() - CMat::Identity(p, p)).norm() < 1e-12);
  }
  CMat two(2, 2);
  two << 1.0, 1.0, 1.0, -1.0;
  CHECK((dft_codebook(2).matrix() - two / std::sqrt(2.0)).norm() < 1e-15);
  CHECK(dft_codebook(1).matrix()(0, 0) == cd(1.0));
  const CMat v = dft_codebook(4).matrix();
  for (Eigen::Index i = 0; i < 4; ++i)
    for (Eigen::Index k = 0; k < 4; ++k)
      CHECK(std::abs(v(k, i) - std::polar(0.5, -2.0 * std::numbers::pi * k * i / 4.0)) < 1e-15);
}

TEST_CASE("DFT pair codebook has orthonormal blocks covering every pair") {
  const auto cb = dft_pair_codebook(8);
  CHECK(cb.width() == 2);
  CHECK(cb.size() == 28);
  for (Eigen::Index i = 0; i < cb.size(); ++i) {
    const CMat b = cb.block(i);
    CHECK((b.adjoint() * b - CMat::Identity(2, 2)).norm() < 1e-12);
  }
  CHECK_THROWS_AS(dft_pair_codebook(1), ArgumentError);
}

TEST_CASE("identity codebook") {
  const auto cb = identity_codebook(3);
  CHECK(cb.matrix() == RMat::Identity(3, 3));
  CHECK(cb.coherence() == 0.0);
}

TEST_CASE("Haar Stiefel draws are isometries") {
  Rng rng(21);
  for (Eigen::Index d = 1; d <= 9; d += 2)
    for (Eigen::Index p = 1; p <= d; ++p) {
      CHECK(isometry_defect(haar_stiefel<cd>(d, p, rng)) < 1e-10);
      CHECK(isometry_defect(haar_stiefel<double>(d, p, rng)) < 1e-10);
    }
  CHECK_THROWS_AS(haar_stiefel<cd>(2, 3, rng), ArgumentError);
  CHECK_THROWS_AS(haar_stiefel<cd>(2, 0, rng), ArgumentError);
}

TEST_CASE("Haar Stiefel first entry has the uniform-sphere second moment") {
  Rng rng(22);
  const int n = 100000;
  double sum = 0.0, sum2 = 0.0;
  for (int k = 0; k < n; ++k) {
    const double v = std::norm(haar_stiefel<cd>(2, 1, rng)(0, 0));
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum2 / n - mean * mean) / n);
  CHECK(std::abs(mean - 0.5) < 3.0 * se);
}

TEST_CASE("Haar Stiefel draws are reproducible from the seed") {
  Rng a(5), b(5);
  CHECK((haar_stiefel<cd>(6, 3, a) - haar_stiefel<cd>(6, 3, b)).norm() == 0.0);
}

TEST_CASE("structured reduction spans the top eigenspace") {
  Rng rng(23);
  for (Eigen::Index p : {1, 3, 4}) {
    const CMat sigma = gapped_covariance(8, p, rng);
    const CMat q = structured_q(sigma, p, rng);
    CHECK(isometry_defect(q) < 1e-10);
    Eigen::SelfAdjointEigenSolver<CMat> es(sigma);
    const CMat top = es.eigenvectors().rightCols(p);
    CHECK(subspace_gap<cd>(q, top) < 1e-8);
  }
  CHECK(isometry_defect(structured_q(CMat::Identity(5, 5), 2, rng)) < 1e-10);
  CHECK_THROWS_AS(structured_q(CMat::Identity(5, 5), 6, rng), ArgumentError);
  CMat bad = CMat::Identity(3, 3);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(structured_q(bad, 1, rng), ArgumentError);
}

TEST_CASE("Type-I first-round reduction") {
  Rng rng(24);
  const CMat w = type1_inner();
  CHECK((w.adjoint() * w - CMat::Identity(8, 8)).norm() < 1e-12);
  const CMat sigma = gapped_covariance(16, 8, rng);
  const CMat q1 = type1_q1(sigma);
  CHECK(isometry_defect(q1) < 1e-10);
  Eigen::SelfAdjointEigenSolver<CMat> es(sigma);
  CHECK(subspace_gap<cd>(q1, CMat(es.eigenvectors().rightCols(8))) < 1e-8);
  CHECK_THROWS_AS(type1_q1(CMat::Identity(4, 4)), ArgumentError);
}

TEST_CASE("steering vectors have unit norm and linear phase") {
  const CVec a = steering_vector(6, 0.4, 0.5);
  CHECK(a.norm() == doctest::Approx(1.0));
  const cd ratio = a(1) / a(0);
  for (Eigen::Index i = 1; i < 6; ++i) CHECK(std::abs(a(i) / a(i - 1) - ratio) < 1e-12);
  CHECK(std::arg(ratio) == doctest::Approx(std::remainder(std::numbers::pi * std::sin(0.4), 2 * std::numbers::pi)));
}

TEST_CASE("synthetic channel normalization and covariance structure") {
  Rng rng(25);
  for (int k = 0; k < 50; ++k) {
    const int paths = 4;
    const auto ch = synthetic_channel(32, 4, paths, rng);
    CHECK(ch.h.rows() == 32);
    CHECK(ch.h.cols() == 4);
    CHECK(ch.h.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(is_hermitian(ch.sigma_ul, 1e-10));
    Eigen::SelfAdjointEigenSolver<CMat> es(ch.sigma_ul);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10);
    const CMat top = es.eigenvectors().rightCols(2 * paths);
    CHECK((top.adjoint() * ch.h).squaredNorm() > 0.9);
  }
  const auto single = synthetic_channel(16, 1, 1, rng);
  Eigen::JacobiSVD<CMat> svd(single.h, Eigen::ComputeThinU);
  CHECK(svd.singularValues()(0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(synthetic_channel(4, 1, 0, rng), ArgumentError);
}
