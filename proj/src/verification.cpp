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

// Numerical verification suite behind the verify-theory subcommand.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pmi/crb.hpp"
#include "pmi/designs.hpp"
#include "pmi/experiments.hpp"
#include "pmi/likelihood.hpp"
#include "pmi/theory.hpp"

namespace pmi {

namespace {

long uniform_int(Rng& rng, long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(rng);
}

double uniform_real(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

template <typename Scalar>
Codebook<Scalar> random_codebook(Eigen::Index p, Eigen::Index n, Eigen::Index width, Rng& rng) {
  Mat<Scalar> v = gaussian_matrix<Scalar>(p, n * width, rng);
  for (Eigen::Index j = 0; j < v.cols(); ++j) v.col(j).normalize();
  return Codebook<Scalar>(v, width);
}

template <typename Scalar>
EstimationProblem<Scalar> random_problem(Rng& rng, Eigen::Index width = 1) {
  const Eigen::Index d = uniform_int(rng, std::max<long>(2, width), 6);
  const Eigen::Index p = uniform_int(rng, width, d);
  const Eigen::Index n = uniform_int(rng, 1, 5);
  const Eigen::Index t_count = uniform_int(rng, 1, 4);
  const double tau = uniform_real(rng, 0.5, 2.0);
  auto cb = random_codebook<Scalar>(p, n, width, rng);
  std::vector<Mat<Scalar>> qs;
  for (Eigen::Index t = 0; t < t_count; ++t) qs.push_back(haar_stiefel<Scalar>(d, p, rng));
  std::vector<std::size_t> pmis;
  for (Eigen::Index t = 0; t < t_count; ++t) pmis.push_back(static_cast<std::size_t>(uniform_int(rng, 0, n - 1)));
  return EstimationProblem<Scalar>(MeasurementDesign<Scalar>(cb, qs), pmis, tau);
}

/// Relative error of nll_gradient against central differences.
template <typename Scalar>
double gradient_fd_error(const EstimationProblem<Scalar>& prob, const Mat<Scalar>& x) {
  const double h = 1e-6;
  const Mat<Scalar> g = nll_gradient(prob, x);
  Mat<Scalar> fd = Mat<Scalar>::Zero(x.rows(), x.cols());
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
        const double im = (nll(prob, xp) - nll(prob, xm)) / (2 * h);
        fd(i, j) = Scalar(re, im);
      } else {
        fd(i, j) = re;
      }
    }
  // Tied gains make the gradient vanish; the floor keeps rounding noise relative.
  const double scale = std::max({fd.norm(), g.norm(), 1e-3 * x.norm() / prob.tau()});
  return scale == 0.0 ? 0.0 : (g - fd).norm() / scale;
}

TheoryCheck upper(const std::string& name, double value, double threshold) {
  return {name, value, threshold, "<=", 0.0, value <= threshold};
}

TheoryCheck lower(const std::string& name, double value, double threshold) {
  return {name, value, threshold, ">=", 0.0, value >= threshold};
}

}  // namespace

TheoryReport run_theory_verification(const ExperimentConfig& cfg) {
  TheoryReport rep;
  Rng rng(stream_seed(cfg.seed, 0x7e0));

  {
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      const auto prob = random_problem<double>(rng);
      worst = std::max(worst, gradient_fd_error(prob, Mat<double>(gaussian_matrix<double>(prob.dim(), 1, rng))));
    }
    rep.checks.push_back(upper("gradient_fd_real", worst, 1e-6));
  }
  {
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      const Eigen::Index w = k % 2 == 0 ? 1 : 2;
      const auto prob = random_problem<cd>(rng, w);
      worst = std::max(worst, gradient_fd_error(prob, CMat(gaussian_matrix<cd>(prob.dim(), w, rng))));
    }
    rep.checks.push_back(upper("gradient_fd_complex", worst, 1e-6));
  }
  {
    double worst = 0.0;
    const double h = 1e-6;
    for (int k = 0; k < 50; ++k) {
      const auto prob = random_problem<double>(rng);
      const RVec x = gaussian_matrix<double>(prob.dim(), 1, rng).col(0);
      const RMat hess = nll_hessian_real(prob, x);
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        RVec xp = x, xm = x;
        xp(i) += h;
        xm(i) -= h;
        const RVec col = (nll_gradient(prob, xp) - nll_gradient(prob, xm)).col(0) / (2 * h);
        worst = std::max(worst, (hess.col(i) - col).cwiseAbs().maxCoeff());
      }
    }
    rep.checks.push_back(upper("hessian_fd_real", worst, 1e-5));
  }
  {
    double worst_gauge = 0.0, worst_rot = 0.0;
    for (int k = 0; k < 100; ++k) {
      const Eigen::Index d = uniform_int(rng, 1, 8);
      const Eigen::Index p = uniform_int(rng, 1, d);
      const Eigen::Index n = uniform_int(rng, 1, 6);
      const Eigen::Index t_count = uniform_int(rng, 1, 6);
      const double tau = uniform_real(rng, 0.1, 2.0);
      auto cb = random_codebook<cd>(p, n, 1, rng);
      std::vector<CMat> qs;
      for (Eigen::Index t = 0; t < t_count; ++t) qs.push_back(haar_stiefel<cd>(d, p, rng));
      const MeasurementDesign<cd> design(cb, qs);
      const CVec h = gaussian_matrix<cd>(d, 1, rng).col(0);
      const RMat f = fisher(design, h, tau);
      const double floor = 1e-4 * fisher_scale(design, h, tau);
      worst_gauge = std::max(worst_gauge, gauge_nullity(f, realify(h), floor));
      worst_rot = std::max(worst_rot,
                           rotation_equivariance_check(design, h, tau, uniform_real(rng, 0.0, 2 * std::numbers::pi), floor));
    }
    rep.checks.push_back(upper("gauge_nullity", worst_gauge, 1e-10));
    rep.checks.push_back(upper("rotation_equivariance", worst_rot, 1e-10));
  }
  {
    const auto cb = dft_codebook(4);
    std::vector<CMat> qs;
    for (int t = 0; t < 40; ++t) qs.push_back(haar_stiefel<cd>(8, 4, rng));
    const MeasurementDesign<cd> design(cb, qs);
    CVec h = gaussian_matrix<cd>(8, 1, rng).col(0);
    h.normalize();
    const double base = crb_trace(fisher(design, h, 0.5)).trace;
    const double rep3 = crb_trace(fisher(replicate(design, 3), h, 0.5)).trace;
    rep.checks.push_back(upper("crb_replication", std::abs(3.0 * rep3 - base) / base, 1e-10));
  }
  {
    double worst_kl = 0.0, worst_relax = 0.0;
    for (int k = 0; k < 100; ++k) {
      const auto prob = random_problem<double>(rng);
      const RVec h = gaussian_matrix<double>(prob.dim(), 1, rng).col(0);
      const RVec x = gaussian_matrix<double>(prob.dim(), 1, rng).col(0);
      const auto& design = prob.design();
      double enumerated = 0.0;
      for (Eigen::Index t = 0; t < prob.num_rounds(); ++t) {
        const RVec ph = softmax_pmf(design, t, h, prob.tau());
        const RVec px = softmax_pmf(design, t, x, prob.tau());
        for (Eigen::Index i = 0; i < ph.size(); ++i) enumerated += ph(i) * (-std::log(px(i)) + std::log(ph(i)));
      }
      enumerated /= static_cast<double>(prob.num_rounds());
      worst_kl = std::max(worst_kl, std::abs(enumerated - population_excess_risk(design, h, x, prob.tau())));
      const double lhs = relaxed_loss(prob, x);
      const double rhs = prob.tau() * nll(prob, x) - prob.tau() * std::log(static_cast<double>(prob.num_codewords()));
      worst_relax = std::max(worst_relax, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
    rep.checks.push_back(upper("kl_identity", worst_kl, 1e-12));
    rep.checks.push_back(upper("relaxed_loss_identity", worst_relax, 1e-10));
  }
  {
    double worst_margin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 100; ++k) {
      const auto prob = random_problem<double>(rng);
      const double radius = uniform_real(rng, 0.2, 2.0);
      RVec x = gaussian_matrix<double>(prob.dim(), 1, rng).col(0);
      x *= radius * uniform_real(rng, 0.0, 1.0) / x.norm();
      const double pmin = p_min_value(prob.num_codewords(), radius, prob.tau());
      for (Eigen::Index t = 0; t < prob.num_rounds(); ++t)
        worst_margin = std::min(worst_margin, softmax_pmf(prob.design(), t, x, prob.tau()).minCoeff() / pmin);
    }
    rep.checks.push_back(lower("p_min_certification", worst_margin, 1.0));
    rep.checks.push_back(upper("kappa0_spot_value", std::abs(kappa0_value(4, 6, 0.0, 0.5) - 0.5 * 4 * 4 * 3 / (6.0 * 8.0)), 1e-15));
  }
  {
    rep.checks.push_back(upper("sphere_fourth_moment_z", sphere_fourth_moment_check(5, 1000000, rng).max_z, 4.0));
    RMat v(2, 2);
    v << 1, 0, 0, 1;
    rep.checks.push_back(upper("secant_expectation_z",
                               secant_expectation_check(Codebook<double>(v), 4, 100000, rng).max_z, 4.0));
  }
  {
    const auto cb = identity_codebook(3);
    std::vector<RMat> qs;
    for (int t = 0; t < 500; ++t) qs.push_back(haar_stiefel<double>(4, 3, rng));
    const MeasurementDesign<double> design(cb, qs);
    RVec h = gaussian_matrix<double>(4, 1, rng).col(0);
    h.normalize();
    const auto sec = certify_secant(design, h, 2000, 0.5, rng);
    rep.checks.push_back(lower("secant_random_vs_operator",
                               sec.random_min - sec.operator_min * (1.0 - 1.0 / 4.0), -1e-8));
    rep.checks.push_back(lower("secant_certified_margin", sec.operator_min * 0.75 - sec.kappa0, 0.0));
    const double tau = 0.25, radius = 3.0;
    const double beta0 = beta0_value(sec.kappa0, p_min_value(3, radius, tau), h.norm(), tau);
    Eigen::SelfAdjointEigenSolver<RMat> es(expected_hessian_at_truth(design, h, tau), Eigen::EigenvaluesOnly);
    rep.checks.push_back(lower("hessian_min_eig_minus_beta0", es.eigenvalues()(0) - beta0, 0.0));
  }
  {
    int failures = 0;
    for (int k = 0; k < 10000; ++k) {
      const Eigen::Index d = uniform_int(rng, 1, 6);
      const RVec x = gaussian_matrix<double>(d, 1, rng).col(0) * uniform_real(rng, 0.1, 3.0);
      const RVec h = gaussian_matrix<double>(d, 1, rng).col(0) * uniform_real(rng, 0.1, 3.0);
      if (!rank1_distance_bound_check(x, h)) ++failures;
    }
    rep.checks.push_back(upper("rank1_distance_failures", failures, 0.0));
  }
  {
    ExperimentConfig rc = cfg;
    const auto curve = run_excess_risk(rc);
    const double s = curve.slope;
    rep.checks.push_back({"excess_risk_slope", s, -1.15, "in", -0.85, s >= -1.15 && s <= -0.85});
  }
  return rep;
}

ExperimentOutput theory_output(const TheoryReport& report) {
  ExperimentOutput out;
  CsvTable t({"check", "value", "relation", "threshold", "upper", "pass"});
  for (const auto& c : report.checks) {
    t.add_row({c.name, format_double(c.value), c.relation, format_double(c.threshold),
               c.relation == "in" ? format_double(c.upper) : "", c.pass ? "1" : "0"});
    out.rows.push_back({"theory", "", 0, 0, 0, c.name, c.value, c.pass ? "" : "fail"});
  }
  out.summary = std::move(t);
  return out;
}

}  // namespace pmi
