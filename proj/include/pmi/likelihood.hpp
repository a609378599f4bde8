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

// Softmax negative log-likelihood, its derivatives, and the projected
// gradient maximum-likelihood solver.

#ifndef PMI_LIKELIHOOD_HPP
#define PMI_LIKELIHOOD_HPP

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "pmi/designs.hpp"
#include "pmi/metrics.hpp"
#include "pmi/model.hpp"
#include "pmi/spectral.hpp"

namespace pmi {

namespace detail {

/// Softmax of each column of gains / tau.
inline RMat column_softmax(const RMat& gains, double tau) {
  RMat p(gains.rows(), gains.cols());
  for (Eigen::Index t = 0; t < gains.cols(); ++t) p.col(t) = softmax(gains.col(t), tau);
  return p;
}

}  // namespace detail

/// (1/T) sum_t [log sum_j exp(g_tj / tau) - g_{t,I_t} / tau].
template <typename Scalar, typename Derived>
double nll(const EstimationProblem<Scalar>& problem, const Eigen::MatrixBase<Derived>& x) {
  const RMat g = all_gains(problem.design(), x);
  const double tau = problem.tau();
  double acc = 0.0;
  for (Eigen::Index t = 0; t < g.cols(); ++t) {
    const RVec z = g.col(t) / tau;
    acc += log_sum_exp(z) - z(static_cast<Eigen::Index>(problem.pmi(t)));
  }
  const double v = acc / static_cast<double>(g.cols());
  return std::isnan(v) ? v : std::max(0.0, v);
}

/// Moreau-envelope form of the loss:
/// (1/T) sum_t [tau log sum_j exp(g_tj / tau) - g_{t,I_t}] - tau log N.
template <typename Scalar, typename Derived>
double relaxed_loss(const EstimationProblem<Scalar>& problem, const Eigen::MatrixBase<Derived>& x) {
  const RMat g = all_gains(problem.design(), x);
  const double tau = problem.tau();
  double acc = 0.0;
  for (Eigen::Index t = 0; t < g.cols(); ++t)
    acc += tau * log_sum_exp(g.col(t) / tau) - g(static_cast<Eigen::Index>(problem.pmi(t)), t);
  return acc / static_cast<double>(g.cols()) - tau * std::log(static_cast<double>(problem.num_codewords()));
}

/// Gradient of nll under the real inner product Re<., .>:
/// (2 / (tau T)) sum_t sum_j (p_tj - [j = I_t]) B_tj B_tj^H X.
template <typename Scalar, typename Derived>
Mat<Scalar> nll_gradient(const EstimationProblem<Scalar>& problem, const Eigen::MatrixBase<Derived>& x) {
  const auto& design = problem.design();
  check_channel_shape(design, x);
  const Eigen::Index n = design.num_codewords(), r = design.width(), t_count = design.num_rounds();
  Mat<Scalar> proj = design.lifted().adjoint() * x;  // (T N r) x r
  RMat g(n, t_count);
  for (Eigen::Index t = 0; t < t_count; ++t)
    for (Eigen::Index j = 0; j < n; ++j) g(j, t) = proj.middleRows((t * n + j) * r, r).squaredNorm();
  const RMat p = detail::column_softmax(g, problem.tau());
  for (Eigen::Index t = 0; t < t_count; ++t)
    for (Eigen::Index j = 0; j < n; ++j) {
      double w = p(j, t);
      if (static_cast<std::size_t>(j) == problem.pmi(t)) w -= 1.0;
      proj.middleRows((t * n + j) * r, r) *= w;
    }
  return (2.0 / (problem.tau() * static_cast<double>(t_count))) * (design.lifted() * proj);
}

/// Hessian of nll for a real single-stream problem:
/// -(2/tau T) sum A_I + (2/tau T) sum C_t + (4/tau^2 T) sum S_t - (4/tau^2 T) sum v_t v_t^T.
template <typename Scalar>
RMat nll_hessian_real(const EstimationProblem<Scalar>& problem, const Vec<Scalar>& x) {
  if constexpr (is_complex_v<Scalar>) {
    throw UnsupportedMode("nll_hessian_real: complex problems have no real Hessian");
  } else {
    const auto& design = problem.design();
    require(design.width() == 1, "nll_hessian_real: single-stream problems only");
    require(x.size() == design.dim(), "nll_hessian_real: x has the wrong length");
    const Eigen::Index d = design.dim(), n = design.num_codewords(), t_count = design.num_rounds();
    const double tau = problem.tau();
    RMat sum_ai = RMat::Zero(d, d), sum_c = RMat::Zero(d, d), sum_s = RMat::Zero(d, d), sum_vv = RMat::Zero(d, d);
    for (Eigen::Index t = 0; t < t_count; ++t) {
      const auto a = design.lifted().middleCols(t * n, n);  // d x N
      const RVec c = a.transpose() * x;
      const RVec p = softmax(c.array().square().matrix(), tau);
      const auto ai = a.col(static_cast<Eigen::Index>(problem.pmi(t)));
      sum_ai.noalias() += ai * ai.transpose();
      sum_c.noalias() += a * p.asDiagonal() * a.transpose();
      const RVec pc2 = p.array() * c.array().square();
      sum_s.noalias() += a * pc2.asDiagonal() * a.transpose();
      const RVec v = a * (p.array() * c.array()).matrix();
      sum_vv.noalias() += v * v.transpose();
    }
    const double tt = static_cast<double>(t_count);
    RMat h = (2.0 / (tau * tt)) * (sum_c - sum_ai) + (4.0 / (tau * tau * tt)) * (sum_s - sum_vv);
    return (h + h.transpose()) / 2.0;
  }
}

/// (1/T) sum_t KL(p_t(.; h) || p_t(.; x)), exact over the N outcomes.
template <typename Scalar, typename DerivedH, typename DerivedX>
double population_excess_risk(const MeasurementDesign<Scalar>& design, const Eigen::MatrixBase<DerivedH>& h,
                              const Eigen::MatrixBase<DerivedX>& x, double tau) {
  require(tau > 0.0, "population_excess_risk: tau must be positive");
  const RMat gh = all_gains(design, h) / tau;
  const RMat gx = all_gains(design, x) / tau;
  double acc = 0.0;
  for (Eigen::Index t = 0; t < gh.cols(); ++t) {
    const RVec log_ph = gh.col(t).array() - log_sum_exp(gh.col(t));
    const RVec log_px = gx.col(t).array() - log_sum_exp(gx.col(t));
    acc += (log_ph.array().exp() * (log_ph - log_px).array()).sum();
  }
  return std::max(0.0, acc / static_cast<double>(gh.cols()));
}

// ---------------------------------------------------------------------------
// Solver

enum class MleInit { kIdentity, kRandomStiefel, kSpectral, kExplicit };
enum class StopReason { kMaxIters, kRelChange, kStationary };

std::string to_string(MleInit init);
std::string to_string(StopReason reason);
MleInit parse_mle_init(const std::string& name);

template <typename Scalar>
struct MleConfig {
  int max_iters = 100;
  double rel_tol = 1e-3;
  MleInit init = MleInit::kIdentity;
  std::optional<Mat<Scalar>> x_init;      // used with kExplicit (X, or S in subspace mode)
  std::optional<double> radius;           // overrides the problem's radius
  std::optional<double> initial_step;     // default ||X0||_F / ||grad(X0)||_F
  double armijo = 1e-4;
  std::uint64_t seed = 0;                 // for kRandomStiefel
};

/// Orthonormal d x k basis restricting estimates to X = B S.
template <typename Scalar>
struct SubspacePrior {
  Mat<Scalar> basis;
};

template <typename Scalar>
struct MleResult {
  Mat<Scalar> x;
  int iterations = 0;
  double final_nll = 0.0;
  double last_rel_change = 0.0;
  StopReason stop = StopReason::kMaxIters;
  std::vector<double> history;  // nll at the initial point and after each step
};

/// Projected gradient descent on nll over the Frobenius ball of radius R with
/// Armijo backtracking. With a prior, the variable is S and X = B S.
template <typename Scalar>
MleResult<Scalar> solve_mle(const EstimationProblem<Scalar>& problem, const MleConfig<Scalar>& config,
                            const std::optional<SubspacePrior<Scalar>>& prior = std::nullopt) {
  require(config.max_iters >= 1, "solve_mle: max_iters must be >= 1");
  require(config.rel_tol > 0.0, "solve_mle: rel_tol must be positive");
  const Eigen::Index d = problem.dim(), r = problem.width();
  const bool sub = prior.has_value();
  if (sub) {
    require(prior->basis.rows() == d && prior->basis.cols() >= r, "solve_mle: prior basis must be d x k with k >= r");
    require(isometry_defect(prior->basis) <= 1e-10, "solve_mle: prior basis must have orthonormal columns");
  }
  const Eigen::Index rows = sub ? prior->basis.cols() : d;

  Mat<Scalar> s;
  switch (config.init) {
    case MleInit::kIdentity:
      s = Mat<Scalar>::Identity(rows, r);
      break;
    case MleInit::kRandomStiefel: {
      Rng rng(config.seed);
      s = haar_stiefel<Scalar>(rows, r, rng);
      break;
    }
    case MleInit::kSpectral: {
      const Mat<Scalar> xs = spectral_estimate(problem, r).x;
      s = sub ? Mat<Scalar>(prior->basis.adjoint() * xs) : xs;
      break;
    }
    case MleInit::kExplicit:
      require(config.x_init.has_value(), "solve_mle: explicit init requires x_init");
      s = *config.x_init;
      require(s.rows() == rows && s.cols() == r, "solve_mle: x_init has the wrong shape");
      break;
  }
  require(s.allFinite(), "solve_mle: initial point must be finite");

  double radius = 0.0;
  if (config.radius) radius = *config.radius;
  else if (problem.radius()) radius = *problem.radius();
  else radius = 10.0 * s.norm();
  require(radius > 0.0, "solve_mle: radius must be positive (zero initial point needs an explicit radius)");

  auto lift = [&](const Mat<Scalar>& v) -> Mat<Scalar> { return sub ? Mat<Scalar>(prior->basis * v) : v; };
  auto objective = [&](const Mat<Scalar>& v, int iter) {
    const double f = nll(problem, lift(v));
    if (!std::isfinite(f)) throw NumericalError("solve_mle: non-finite objective at iteration " + std::to_string(iter));
    return f;
  };
  auto gradient = [&](const Mat<Scalar>& v) -> Mat<Scalar> {
    const Mat<Scalar> g = nll_gradient(problem, lift(v));
    return sub ? Mat<Scalar>(prior->basis.adjoint() * g) : g;
  };
  auto project = [&](Mat<Scalar>& v) {
    const double nv = v.norm();
    if (nv > radius) v *= radius / nv;
  };

  project(s);
  MleResult<Scalar> res;
  double f = objective(s, 0);
  res.history.push_back(f);
  Mat<Scalar> g = gradient(s);
  double step = 0.0;
  if (config.initial_step) {
    step = *config.initial_step;
  } else {
    const double gn = g.norm();
    step = gn > 0.0 ? (s.norm() > 0.0 ? s.norm() : radius) / gn : 1.0;
  }
  require(step > 0.0, "solve_mle: initial step must be positive");

  res.stop = StopReason::kMaxIters;
  for (int it = 1; it <= config.max_iters; ++it) {
    res.iterations = it;
    if (g.norm() == 0.0) {
      res.stop = StopReason::kStationary;
      res.last_rel_change = 0.0;
      break;
    }
    Mat<Scalar> s_new;
    double f_new = 0.0;
    bool accepted = false;
    while (step > 1e-300) {
      s_new = s - step * g;
      project(s_new);
      f_new = objective(s_new, it);
      const double decrease = (g.array() * (s - s_new).array().conjugate()).real().sum();
      if (f_new <= f - config.armijo * decrease) {
        accepted = true;
        break;
      }
      step /= 2.0;
    }
    if (!accepted) {
      res.stop = StopReason::kStationary;
      res.last_rel_change = 0.0;
      break;
    }
    res.last_rel_change = procrustes_rel_change<Scalar>(s_new, s);
    s = std::move(s_new);
    f = f_new;
    res.history.push_back(f);
    step *= 2.0;
    if (res.last_rel_change < config.rel_tol) {
      res.stop = StopReason::kRelChange;
      break;
    }
    g = gradient(s);
  }
  res.x = lift(s);
  res.final_nll = f;
  return res;
}

}  // namespace pmi

#endif  // PMI_LIKELIHOOD_HPP
