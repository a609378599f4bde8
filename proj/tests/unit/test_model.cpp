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
#include <numbers>

#include "pmi/designs.hpp"
#include "pmi/model.hpp"
#include "support/random.hpp"

using namespace pmi;
using pmi::testing::random_design;
using pmi::testing::uniform_int;

namespace {

Codebook<cd> canonical_codebook(Eigen::Index p) { return Codebook<cd>(CMat::Identity(p, p)); }

}  // namespace

TEST_CASE("codebook rejects malformed codewords") {
  CMat v = CMat::Identity(3, 3);
  v(0, 0) = 2.0;
  CHECK_THROWS_AS(Codebook<cd>{v}, ArgumentError);
  CHECK_THROWS_AS(Codebook<cd>(CMat::Identity(4, 3), 2), ArgumentError);
  CHECK_THROWS_AS(Codebook<cd>(CMat::Identity(3, 3), 0), ArgumentError);
}

TEST_CASE("codebook coherence ignores columns of the same block") {
  const auto cb = dft_codebook(4);
  CHECK(cb.coherence() < 1e-12);
  CMat v(2, 2);
  v << 1.0, std::sqrt(0.5), 0.0, std::sqrt(0.5);
  CHECK(Codebook<cd>(v).coherence() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  CHECK(Codebook<cd>(v, 2).coherence() == 0.0);
}

TEST_CASE("design rejects non-isometric reductions") {
  CMat q = CMat::Identity(4, 2);
  q(0, 0) = 1.1;
  CHECK_THROWS_AS(MeasurementDesign<cd>(canonical_codebook(2), {q}), ArgumentError);
  CHECK_THROWS_AS(MeasurementDesign<cd>(canonical_codebook(2), {}), ArgumentError);
  CHECK_THROWS_AS(MeasurementDesign<cd>(canonical_codebook(3), {CMat(CMat::Identity(4, 2))}), ArgumentError);
}

TEST_CASE("effective codeword equals the product of reduction and codeword") {
  Rng rng(11);
  const CMat q = haar_stiefel<cd>(4, 2, rng);
  const MeasurementDesign<cd> design(canonical_codebook(2), {q});
  CHECK((effective_codeword(design, 0, 0) - q.col(0)).norm() < 1e-15);

  const auto big = random_design<cd>(6, 3, 4, 3, 1, rng);
  for (Eigen::Index t = 0; t < 3; ++t)
    for (Eigen::Index i = 0; i < 4; ++i) {
      CVec direct = CVec::Zero(6);
      for (Eigen::Index a = 0; a < 6; ++a)
        for (Eigen::Index b = 0; b < 3; ++b) direct(a) += big.reduction(t)(a, b) * big.codebook().matrix()(b, i);
      CHECK((effective_codeword(big, t, i).col(0) - direct).norm() < 1e-14);
      CHECK(effective_codeword(big, t, i).norm() <= 1.0 + 1e-10);
    }
  CHECK_THROWS_AS(effective_codeword(big, 3, 0), ArgumentError);
  CHECK_THROWS_AS(effective_codeword(big, 0, 4), ArgumentError);
}

TEST_CASE("gain matches an entrywise sum") {
  Rng rng(12);
  for (Eigen::Index width : {1, 2}) {
    const auto design = random_design<cd>(5, 3, 3, 2, width, rng);
    const CMat x = gaussian_matrix<cd>(5, width, rng);
    const RMat all = all_gains(design, x);
    for (Eigen::Index t = 0; t < 2; ++t)
      for (Eigen::Index i = 0; i < 3; ++i) {
        const CMat a = design.block(t, i);
        double brute = 0.0;
        for (Eigen::Index c = 0; c < width; ++c)
          for (Eigen::Index s = 0; s < width; ++s) {
            cd acc = 0.0;
            for (Eigen::Index k = 0; k < 5; ++k) acc += std::conj(a(k, c)) * x(k, s);
            brute += std::norm(acc);
          }
        CHECK(gain(design, t, i, x) == doctest::Approx(brute).epsilon(1e-12));
        CHECK(all(i, t) == doctest::Approx(brute).epsilon(1e-12));
      }
    CHECK_THROWS_AS(gain(design, 0, 0, CMat(CMat::Zero(5, width + 1))), ArgumentError);
  }
}

TEST_CASE("softmax pmf for two codewords") {
  const MeasurementDesign<cd> design(canonical_codebook(2), {CMat(CMat::Identity(2, 2))});
  const CVec x = CVec::Unit(2, 0);
  const RVec p = softmax_pmf(design, 0, x, 1.0);
  const double e = std::exp(1.0);
  CHECK(p(0) == doctest::Approx(e / (1 + e)).epsilon(1e-15));
  CHECK(p(1) == doctest::Approx(1 / (1 + e)).epsilon(1e-15));
  CHECK_THROWS_AS(softmax_pmf(design, 0, x, 0.0), ArgumentError);
}

TEST_CASE("softmax stays finite for extreme gains") {
  RVec g(3);
  g << 1e6, 1e6 - 1.0, -1e6;
  const RVec p = softmax(g, 1e-3);
  CHECK(p.allFinite());
  CHECK(p.sum() == doctest::Approx(1.0));
  CHECK(p(0) == doctest::Approx(1.0));
  CHECK(log_sum_exp(g) == doctest::Approx(1e6 + std::log1p(std::exp(-1.0))).epsilon(1e-15));
  RVec shifted = g.array() + 123.0;
  CHECK((softmax(shifted, 2.0) - softmax(g, 2.0)).norm() < 1e-15);
}

TEST_CASE("sampled PMI frequencies follow the pmf") {
  Rng rng(13);
  const auto design = random_design<cd>(4, 4, 4, 1, 1, rng);
  const CVec x = gaussian_matrix<cd>(4, 1, rng).col(0);
  const double tau = 0.5;
  const RVec p = softmax_pmf(design, 0, x, tau);
  const int draws = 100000;
  RVec counts = RVec::Zero(4);
  for (int k = 0; k < draws; ++k) counts(static_cast<Eigen::Index>(sample_pmi(design, 0, x, tau, rng))) += 1.0;
  double chi2 = 0.0;
  for (Eigen::Index i = 0; i < 4; ++i) {
    const double expected = draws * p(i);
    chi2 += (counts(i) - expected) * (counts(i) - expected) / expected;
  }
  // 0.999 quantile of chi-square with 3 degrees of freedom
  CHECK(chi2 < 16.266);
}

TEST_CASE("categorical sampling never returns zero-probability indices") {
  Rng rng(14);
  RVec pmf(4);
  pmf << 0.0, 0.5, 0.0, 0.5;
  for (int k = 0; k < 2000; ++k) {
    const auto i = sample_categorical(pmf, rng);
    CHECK((i == 1 || i == 3));
  }
}

TEST_CASE("hard PMI is the exhaustive argmax and CQI its gain") {
  Rng rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    const long n = uniform_int(rng, 1, 6);
    const auto design = random_design<cd>(6, 3, n, 2, 1, rng);
    const CMat h = gaussian_matrix<cd>(6, 3, rng);
    for (Eigen::Index t = 0; t < 2; ++t) {
      Eigen::Index best = 0;
      for (Eigen::Index i = 1; i < n; ++i)
        if ((design.block(t, i).adjoint() * h).squaredNorm() > (design.block(t, best).adjoint() * h).squaredNorm())
          best = i;
      const auto pmi = hard_pmi(design, t, h);
      CHECK(pmi == static_cast<std::size_t>(best));
      const double g = (design.block(t, best).adjoint() * h).squaredNorm();
      CHECK(std::abs(cqi(design, t, pmi, h) - g) <= g * std::ldexp(1.0, -23));
    }
  }
}

TEST_CASE("hard PMI breaks ties toward the smallest index") {
  const MeasurementDesign<cd> design(canonical_codebook(2), {CMat(CMat::Identity(2, 2))});
  CHECK(hard_pmi(design, 0, CVec::Ones(2)) == 0);
}

TEST_CASE("estimation problem validates its inputs") {
  const MeasurementDesign<cd> design(canonical_codebook(2), {CMat(CMat::Identity(3, 2))});
  CHECK_THROWS_AS(EstimationProblem<cd>(design, {2}, 1.0), ArgumentError);
  CHECK_THROWS_AS(EstimationProblem<cd>(design, {0, 1}, 1.0), ArgumentError);
  CHECK_THROWS_AS(EstimationProblem<cd>(design, {0}, 0.0), ArgumentError);
  CHECK_THROWS_AS(EstimationProblem<cd>(design, {0}, 1.0, -1.0), ArgumentError);
  CHECK_THROWS_AS(EstimationProblem<cd>(design, {0}, 1.0, std::nullopt, {std::optional<float>(-1.0f)}),
                  ArgumentError);
  const EstimationProblem<cd> ok(design, {1}, 0.5, 2.0, {std::optional<float>(0.25f)});
  CHECK(ok.has_all_cqi());
  CHECK(ok.round(0).pmi == 1);
}

TEST_CASE("problem built from feedback rounds matches the explicit form") {
  Rng rng(16);
  const auto cb = dft_codebook(2);
  std::vector<FeedbackRound<cd>> rounds;
  for (int t = 0; t < 3; ++t) rounds.push_back({haar_stiefel<cd>(4, 2, rng), static_cast<std::size_t>(t % 2), 1.0f});
  const EstimationProblem<cd> prob(rounds, cb, 1.0);
  CHECK(prob.num_rounds() == 3);
  CHECK(prob.pmi(2) == 0);
  CHECK((prob.design().reduction(1) - rounds[1].reduction).norm() == 0.0);
}

TEST_CASE("concat, replicate and prefix preserve round order") {
  Rng rng(17);
  const auto a = random_design<cd>(4, 2, 3, 2, 1, rng);
  const MeasurementDesign<cd> b(a.codebook(), {haar_stiefel<cd>(4, 2, rng)});
  const auto ab = concat(a, b);
  CHECK(ab.num_rounds() == 3);
  CHECK((ab.reduction(2) - b.reduction(0)).norm() == 0.0);
  const auto rep = replicate(a, 3);
  CHECK(rep.num_rounds() == 6);
  CHECK((rep.reduction(4) - a.reduction(0)).norm() == 0.0);
  CHECK((ab.prefix(2).lifted() - a.lifted()).norm() == 0.0);
  CHECK_THROWS_AS(a.prefix(0), ArgumentError);
}

TEST_CASE("simulated feedback is reproducible from the seed") {
  Rng rng(18);
  const auto design = random_design<cd>(5, 3, 4, 30, 1, rng);
  const CVec h = gaussian_matrix<cd>(5, 1, rng).col(0);
  Rng r1(99), r2(99);
  CHECK(simulate_softmax_feedback(design, h, 0.3, r1) == simulate_softmax_feedback(design, h, 0.3, r2));
  const auto fb = simulate_hard_feedback(design, h);
  for (Eigen::Index t = 0; t < 30; ++t) CHECK(fb.pmis[static_cast<std::size_t>(t)] == hard_pmi(design, t, h));
}
