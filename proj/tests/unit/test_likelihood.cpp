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
#include <string>

#include "pmi/designs.hpp"
#include "pmi/likelihood.hpp"
#include "pmi/metrics.hpp"
#include "support/random.hpp"

using namespace pmi;
using pmi::testing::random_problem;
using pmi::testing::uniform_int;
using pmi::testing::uniform_real;

namespace {

template <typename Scalar>
Mat<Scalar> fd_gradient(const EstimationProblem<Scalar>& prob, const Mat<Scalar>& x, double h) {
  Mat<Scalar> fd(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      Mat<Scalar> xp = x, xm = x;
      xp(i, j) += Scalar(h);
      xm(i, j) -= Scalar(h);
      const double re = (nll(prob, xp) - nll(prob, xm)) / (2 * h);
      if constexpr (is_complex_v<Scalar>) {
        xp = x;
        xm = x;
        xp(i, j) += Scalar(0, h);
        xm(i, j) -= Scalar(0, h);
        fd(i, j) = Scalar(re, (nll(prob, xp) - nll(prob, xm)) / (2 * h));
      } else {
        fd(i, j) = re;
      }
    }
  return fd;
}

}  // namespace

TEST_CASE("nll of a two-codeword problem matches the scalar formula") {
  CMat v(2, 2);
  v << 1.0, std::sqrt(0.5), 0.0, std::sqrt(0.5);
  const MeasurementDesign<cd> design(Codebook<cd>(v), {CMat(CMat::Identity(2, 2))});
  const double tau = 0.7;
  CVec x(2);
  x << cd(0.3, 0.2), cd(0.0, -0.5);
  const double g0 = std::norm(x(0));
  const double g1 = std::norm((x(0) + x(1)) * std::sqrt(0.5));
  for (std::size_t pmi : {0u, 1u}) {
    const EstimationProblem<cd> prob(design, {pmi}, tau);
    const double g_sel = pmi == 0 ? g0 : g1;
    const double expected = std::log(std::exp(g0 / tau) + std::exp(g1 / tau)) - g_sel / tau;
    CHECK(nll(prob, x) == doctest::Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("relaxed loss is the affine image of nll") {
  Rng rng(41);
  for (int k = 0; k < 100; ++k) {
    const long w = uniform_int(rng, 1, 2);
    const long d = uniform_int(rng, 2, 6);
    const auto prob = random_problem<cd>(d, uniform_int(rng, w, d), uniform_int(rng, 1, 5), uniform_int(rng, 1, 4),
                                         uniform_real(rng, 0.1, 3.0), rng, w);
    const CMat x = 2.0 * gaussian_matrix<cd>(d, w, rng);
    const double lhs = relaxed_loss(prob, x);
    const double rhs = prob.tau() * nll(prob, x) - prob.tau() * std::log(static_cast<double>(prob.num_codewords()));
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("real gradient matches central differences") {
  Rng rng(42);
  for (int k = 0; k < 10; ++k) {
    const auto prob = random_problem<double>(3, 3, 3, 2, 0.8, rng);
    const RMat x = gaussian_matrix<double>(3, 1, rng);
    const RMat g = nll_gradient(prob, x);
    const RMat fd = fd_gradient(prob, x, 1e-6);
    CHECK((g - fd).norm() / g.norm() < 1e-6);
  }
}

TEST_CASE("complex gradient matches central differences") {
  Rng rng(43);
  for (int k = 0; k < 10; ++k) {
    const Eigen::Index w = k % 2 == 0 ? 1 : 2;
    const auto prob = random_problem<cd>(5, 3, 4, 3, 0.6, rng, w);
    const CMat x = gaussian_matrix<cd>(5, w, rng);
    const CMat g = nll_gradient(prob, x);
    const CMat fd = fd_gradient(prob, x, 1e-6);
    CHECK((g - fd).norm() / g.norm() < 1e-6);
    const double f0 = nll(prob, x);
    CHECK(nll(prob, CMat(x - 1e-4 * g)) < f0);
  }
}

TEST_CASE("nll and gradient respect right unitary invariance") {
  Rng rng(44);
  const auto prob = random_problem<cd>(6, 4, 3, 3, 0.5, rng, 2);
  const CMat x = gaussian_matrix<cd>(6, 2, rng);
  const CMat u = haar_stiefel<cd>(2, 2, rng);
  CHECK(std::abs(nll(prob, CMat(x * u)) - nll(prob, x)) < 1e-10);
  CHECK((nll_gradient(prob, CMat(x * u)) - nll_gradient(prob, x) * u).norm() < 1e-10);
}

TEST_CASE("real Hessian matches differences of the gradient") {
  Rng rng(45);
  const double h = 1e-6;
  for (int k = 0; k < 10; ++k) {
    const auto prob = random_problem<double>(4, 3, 4, 3, 0.9, rng);
    const RVec x = gaussian_matrix<double>(4, 1, rng).col(0);
    const RMat hess = nll_hessian_real(prob, x);
    CHECK((hess - hess.transpose()).norm() == 0.0);
    for (Eigen::Index i = 0; i < 4; ++i) {
      RVec xp = x, xm = x;
      xp(i) += h;
      xm(i) -= h;
      const RVec col = (nll_gradient(prob, xp) - nll_gradient(prob, xm)).col(0) / (2 * h);
      CHECK((hess.col(i) - col).cwiseAbs().maxCoeff() < 1e-5);
    }
  }
  const auto cprob = random_problem<cd>(3, 2, 2, 1, 1.0, rng);
  CHECK_THROWS_AS(nll_hessian_real(cprob, CVec(CVec::Ones(3))), UnsupportedMode);
}

TEST_CASE("population excess risk equals the enumerated KL sum") {
  Rng rng(46);
  for (int k = 0; k < 10; ++k) {
    const auto prob = random_problem<cd>(4, 3, 4, 3, 0.4, rng);
    const CVec h = gaussian_matrix<cd>(4, 1, rng).col(0);
    const CVec x = gaussian_matrix<cd>(4, 1, rng).col(0);
    const auto& design = prob.design();
    double acc = 0.0;
    for (Eigen::Index t = 0; t < 3; ++t) {
      const RVec ph = softmax_pmf(design, t, h, 0.4);
      const RVec px = softmax_pmf(design, t, x, 0.4);
      for (Eigen::Index i = 0; i < 4; ++i) acc += ph(i) * (-std::log(px(i)) + std::log(ph(i)));
    }
    CHECK(std::abs(population_excess_risk(design, h, x, 0.4) - acc / 3.0) < 1e-12);
    CHECK(population_excess_risk(design, h, h, 0.4) == doctest::Approx(0.0));
    CHECK(population_excess_risk(design, h, x, 0.4) >= 0.0);
  }
}

TEST_CASE("MLE with one round aligns with the selected effective codeword") {
  Rng rng(47);
  const auto cb = dft_codebook(4);
  const CMat q = haar_stiefel<cd>(8, 4, rng);
  for (std::size_t i = 0; i < 4; ++i) {
    const EstimationProblem<cd> prob(MeasurementDesign<cd>(cb, {q}), {i}, 1.0, 1e3);
    MleConfig<cd> cfg;
    cfg.max_iters = 5000;
    cfg.rel_tol = 1e-12;
    const auto res = solve_mle(prob, cfg);
    const CVec a = prob.design().block(0, static_cast<Eigen::Index>(i));
    CHECK(std::abs(a.dot(res.x.col(0))) / res.x.norm() > 0.99);
    CHECK(res.x.norm() < 1e3);
  }
}

TEST_CASE("MLE with a single codeword stops immediately") {
  Rng rng(48);
  const MeasurementDesign<cd> design(Codebook<cd>(CMat(CMat::Identity(2, 1))), {haar_stiefel<cd>(3, 2, rng)});
  const EstimationProblem<cd> prob(design, {0}, 1.0, 5.0);
  MleConfig<cd> cfg;
  cfg.init = MleInit::kRandomStiefel;
  const auto res = solve_mle(prob, cfg);
  CHECK(res.iterations == 1);
  CHECK(res.last_rel_change == 0.0);
  CHECK(res.stop == StopReason::kStationary);
}

TEST_CASE("MLE on softmax data improves on its starting point") {
  Rng rng(49);
  const auto cb = identity_codebook(3);
  std::vector<RMat> qs;
  for (int t = 0; t < 2000; ++t) qs.push_back(haar_stiefel<double>(3, 3, rng));
  MeasurementDesign<double> design(cb, qs);
  RVec h = gaussian_matrix<double>(3, 1, rng).col(0);
  h *= 1.5 / h.norm();
  const double tau = 0.5;
  const auto pmis = simulate_softmax_feedback(design, h, tau, rng);
  const EstimationProblem<double> prob(design, pmis, tau, 3.0);
  MleConfig<double> cfg;
  cfg.max_iters = 500;
  cfg.rel_tol = 1e-8;
  const auto res = solve_mle(prob, cfg);
  const RVec x0 = RVec::Unit(3, 0);
  const RVec xhat = res.x.col(0);
  CHECK(dist<double>(xhat, h) < dist<double>(x0, h));
  CHECK(res.final_nll <= nll(prob, h) + 1e-6);
  for (std::size_t k = 1; k < res.history.size(); ++k) CHECK(res.history[k] <= res.history[k - 1]);
  CHECK(xhat.norm() <= 3.0 + 1e-12);
}

TEST_CASE("MLE projects onto the radius ball and honours the subspace prior") {
  Rng rng(50);
  const auto prob = random_problem<cd>(6, 3, 4, 8, 0.3, rng);
  const CMat basis = haar_stiefel<cd>(6, 2, rng);
  MleConfig<cd> cfg;
  cfg.radius = 0.5;
  const auto res = solve_mle(prob, cfg, std::optional(SubspacePrior<cd>{basis}));
  CHECK(res.x.norm() <= 0.5 + 1e-12);
  CHECK((res.x - basis * (basis.adjoint() * res.x)).norm() < 1e-12);
  CHECK_THROWS_AS(solve_mle(prob, cfg, std::optional(SubspacePrior<cd>{CMat(2.0 * basis)})), ArgumentError);
}

TEST_CASE("MLE configuration errors") {
  Rng rng(51);
  const auto prob = random_problem<cd>(4, 2, 3, 2, 1.0, rng);
  MleConfig<cd> cfg;
  cfg.init = MleInit::kExplicit;
  CHECK_THROWS_AS(solve_mle(prob, cfg), ArgumentError);
  cfg.x_init = CMat::Zero(4, 1);
  CHECK_THROWS_AS(solve_mle(prob, cfg), ArgumentError);
  cfg.init = MleInit::kIdentity;
  cfg.max_iters = 0;
  CHECK_THROWS_AS(solve_mle(prob, cfg), ArgumentError);
}

TEST_CASE("non-finite objective reports the iteration") {
  Rng rng(52);
  const auto prob = random_problem<cd>(4, 2, 3, 2, 1e-308, rng);
  MleConfig<cd> cfg;
  cfg.init = MleInit::kExplicit;
  cfg.x_init = 100.0 * gaussian_matrix<cd>(4, 1, rng);
  cfg.radius = 1e3;
  try {
    solve_mle(prob, cfg);
    FAIL("expected a numerical failure");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("iteration 0") != std::string::npos);
  }
}

TEST_CASE("init names round-trip") {
  for (auto m : {MleInit::kIdentity, MleInit::kRandomStiefel, MleInit::kSpectral, MleInit::kExplicit})
    CHECK(parse_mle_init(to_string(m)) == m);
  CHECK_THROWS_AS(parse_mle_init("zeros"), ArgumentError);
}
