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

#include "pmi/baselines.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "pmi/designs.hpp"
#include "pmi/metrics.hpp"

namespace pmi {

std::string to_string(PrVariant v) {
  switch (v) {
    case PrVariant::kWirtinger: return "wirtinger";
    case PrVariant::kAmplitude: return "amplitude";
    case PrVariant::kBestOfBoth: return "best-of-both";
  }
  return "unknown";
}

PrVariant parse_pr_variant(const std::string& name) {
  if (name == "wirtinger" || name == "wf") return PrVariant::kWirtinger;
  if (name == "amplitude" || name == "af") return PrVariant::kAmplitude;
  if (name == "best-of-both" || name == "best") return PrVariant::kBestOfBoth;
  throw ArgumentError("unknown phase-retrieval variant '" + name + "'");
}

RVec cqi_vector(const EstimationProblem<cd>& problem) {
  RVec eta(problem.num_rounds());
  for (Eigen::Index t = 0; t < eta.size(); ++t) {
    const auto& c = problem.cqis()[static_cast<std::size_t>(t)];
    require(c.has_value(), "baseline requires CQI in every round");
    eta(t) = static_cast<double>(*c);
  }
  return eta;
}

// ---------------------------------------------------------------------------
// Alternating minimization

double am_objective(const CMat& e, const RVec& y, double lambda, const CVec& u) {
  const CVec c = e.adjoint() * u;
  return (c.cwiseAbs() - y).squaredNorm() + lambda * u.squaredNorm();
}

AmResult am_solve(const CMat& e, const RVec& y, double lambda, const CVec& u0, int max_iters, double rel_tol) {
  require(e.cols() == y.size(), "am_solve: one target per measurement");
  require(u0.size() == e.rows(), "am_solve: init has the wrong length");
  require(lambda >= 0.0, "am_solve: lambda must be nonnegative");
  require(max_iters >= 1, "am_solve: max_iters must be >= 1");
  const Eigen::Index m = e.rows();
  const CMat gram = e * e.adjoint() + lambda * CMat::Identity(m, m);

  AmResult res;
  Eigen::LDLT<CMat> ldlt;
  Eigen::CompleteOrthogonalDecomposition<CMat> cod;
  bool use_cod = lambda == 0.0;
  if (!use_cod) {
    ldlt.compute(gram);
    use_cod = ldlt.info() != Eigen::Success;
  }
  if (use_cod) {
    cod.compute(gram);
    res.singular = cod.rank() < m;
  }

  CVec u = u0;
  res.history.push_back(am_objective(e, y, lambda, u));
  for (int it = 1; it <= max_iters; ++it) {
    res.iterations = it;
    // phase step: rotate each target onto the current measurement; phase 0
    // when the measurement vanishes
    const CVec c = e.adjoint() * u;
    CVec b(c.size());
    for (Eigen::Index t = 0; t < c.size(); ++t) {
      const double mag = std::abs(c(t));
      b(t) = mag > 0.0 ? y(t) * c(t) / mag : cd(y(t), 0.0);
    }
    const CVec rhs = e * b;
    CVec u_new = use_cod ? CVec(cod.solve(rhs)) : CVec(ldlt.solve(rhs));
    res.history.push_back(am_objective(e, y, lambda, u_new));
    const double rel = procrustes_rel_change<cd>(u_new, u);
    u = std::move(u_new);
    if (rel < rel_tol) break;
  }
  res.x = u;
  res.objective = res.history.back();
  return res;
}

namespace {

CVec am_init(const EstimationProblem<cd>& problem, const CMat& basis, Eigen::Index stream, BaselineInit init,
             Rng& rng) {
  const Eigen::Index m = basis.cols();
  switch (init) {
    case BaselineInit::kSpectral: {
      const auto& design = problem.design();
      CMat c = CMat::Zero(m, m);
      for (Eigen::Index t = 0; t < problem.num_rounds(); ++t) {
        const CVec a = basis.adjoint() * design.block(t, static_cast<Eigen::Index>(problem.pmi(t))).col(stream);
        c.noalias() += a * a.adjoint();
      }
      return top_eigvecs<cd>(c, 1).col(0);
    }
    case BaselineInit::kRandom:
      return haar_stiefel<cd>(m, 1, rng).col(0);
    case BaselineInit::kIdentity:
      return CVec::Unit(m, 0);
  }
  return CVec::Unit(m, 0);
}

}  // namespace

AmResult am_estimate_single(const EstimationProblem<cd>& problem, const BaselineConfig& config, Rng& rng) {
  require(problem.width() == 1, "am_estimate_single: single-stream codebook required");
  const RVec eta = cqi_vector(problem);
  const auto& design = problem.design();
  CMat e(problem.dim(), problem.num_rounds());
  for (Eigen::Index t = 0; t < e.cols(); ++t) e.col(t) = design.block(t, static_cast<Eigen::Index>(problem.pmi(t)));
  const CMat eye = CMat::Identity(problem.dim(), problem.dim());
  const CVec u0 = am_init(problem, eye, 0, config.init, rng);
  return am_solve(e, eta.cwiseMax(0.0).cwiseSqrt(), config.lambda_am, u0, config.max_iters, config.rel_tol);
}

AmResult am_estimate_multi(const EstimationProblem<cd>& problem, Eigen::Index r, const BaselineConfig& config,
                           Rng& rng) {
  require(r >= 1 && r <= problem.width(), "am_estimate_multi: r must not exceed the codeword block width");
  require(r <= problem.dim(), "am_estimate_multi: r must not exceed d");
  const RVec eta = cqi_vector(problem);
  const RVec y = (eta.cwiseMax(0.0) / static_cast<double>(r)).cwiseSqrt();
  const auto& design = problem.design();
  const Eigen::Index d = problem.dim();

  AmResult out;
  out.x = CMat::Zero(d, r);
  for (Eigen::Index k = 0; k < r; ++k) {
    const CMat p = complement_basis<cd>(CMat(out.x.leftCols(k)));
    require(p.cols() >= 1, "am_estimate_multi: empty orthogonal complement");
    CMat e(p.cols(), problem.num_rounds());
    for (Eigen::Index t = 0; t < e.cols(); ++t)
      e.col(t) = p.adjoint() * design.block(t, static_cast<Eigen::Index>(problem.pmi(t))).col(k);
    const CVec u0 = am_init(problem, p, k, config.init, rng);
    AmResult stream = am_solve(e, y, config.lambda_am, u0, config.max_iters, config.rel_tol);
    CVec hk = p * stream.x;
    const double n = hk.norm();
    if (n > 0.0) {
      hk /= n;
    } else {
      // zero solution: fall back to the first complement direction
      hk = p.col(0);
    }
    out.x.col(k) = hk;
    out.iterations += stream.iterations;
    out.objective = stream.objective;
    out.singular = out.singular || stream.singular;
    out.history = std::move(stream.history);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Subspace phase retrieval

std::vector<CMat> pr_measurements(const EstimationProblem<cd>& problem, const CMat& basis) {
  require(basis.rows() == problem.dim(), "pr_measurements: basis must have d rows");
  std::vector<CMat> m;
  m.reserve(static_cast<std::size_t>(problem.num_rounds()));
  for (Eigen::Index t = 0; t < problem.num_rounds(); ++t)
    m.emplace_back(problem.design().block(t, static_cast<Eigen::Index>(problem.pmi(t))).adjoint() * basis);
  return m;
}

double wf_loss(const std::vector<CMat>& m, const RVec& eta, const CMat& s) {
  double acc = 0.0;
  for (std::size_t t = 0; t < m.size(); ++t) {
    const double r = (m[t] * s).squaredNorm() - eta(static_cast<Eigen::Index>(t));
    acc += r * r;
  }
  return acc / static_cast<double>(m.size());
}

CMat wf_gradient(const std::vector<CMat>& m, const RVec& eta, const CMat& s) {
  CMat g = CMat::Zero(s.rows(), s.cols());
  for (std::size_t t = 0; t < m.size(); ++t) {
    const CMat ms = m[t] * s;
    g.noalias() += (ms.squaredNorm() - eta(static_cast<Eigen::Index>(t))) * (m[t].adjoint() * ms);
  }
  return g * (4.0 / static_cast<double>(m.size()));
}

double af_loss(const std::vector<CMat>& m, const RVec& eta, const CMat& s) {
  double acc = 0.0;
  for (std::size_t t = 0; t < m.size(); ++t) {
    const double r = (m[t] * s).norm() - std::sqrt(std::max(0.0, eta(static_cast<Eigen::Index>(t))));
    acc += r * r;
  }
  return acc / static_cast<double>(m.size());
}

CMat af_gradient(const std::vector<CMat>& m, const RVec& eta, const CMat& s) {
  CMat g = CMat::Zero(s.rows(), s.cols());
  for (std::size_t t = 0; t < m.size(); ++t) {
    const CMat ms = m[t] * s;
    const double n = ms.norm();
    if (n == 0.0) continue;
    const double w = 1.0 - std::sqrt(std::max(0.0, eta(static_cast<Eigen::Index>(t)))) / n;
    g.noalias() += w * (m[t].adjoint() * ms);
  }
  return g * (2.0 / static_cast<double>(m.size()));
}

namespace {

struct DescentResult {
  CMat s;
  double loss = 0.0;
  int iterations = 0;
};

DescentResult descend(const std::function<double(const CMat&)>& loss, const std::function<CMat(const CMat&)>& grad,
                      CMat s, double step, int max_iters, double rel_tol) {
  DescentResult res;
  double f = loss(s);
  if (!std::isfinite(f)) throw NumericalError("subspace_pr_estimate: non-finite loss at iteration 0");
  for (int it = 1; it <= max_iters; ++it) {
    res.iterations = it;
    const CMat g = grad(s);
    const double gn2 = g.squaredNorm();
    if (gn2 == 0.0) break;
    CMat s_new;
    double f_new = f;
    bool accepted = false;
    while (step > 1e-300) {
      s_new = s - step * g;
      f_new = loss(s_new);
      if (std::isfinite(f_new) && f_new <= f - 1e-4 * step * gn2) {
        accepted = true;
        break;
      }
      step /= 2.0;
    }
    if (!accepted) break;
    if (!std::isfinite(f_new))
      throw NumericalError("subspace_pr_estimate: non-finite loss at iteration " + std::to_string(it));
    const double rel = procrustes_rel_change<cd>(s_new, s);
    s = std::move(s_new);
    f = f_new;
    step *= 2.0;
    if (rel < rel_tol) break;
  }
  res.s = std::move(s);
  res.loss = f;
  return res;
}

}  // namespace

PrResult subspace_pr_estimate(const EstimationProblem<cd>& problem, const CMat& basis, Eigen::Index r,
                              const BaselineConfig& config) {
  require(r >= 1 && r <= basis.cols(), "subspace_pr_estimate: need 1 <= r <= k");
  require(r == problem.width(), "subspace_pr_estimate: r must equal the codeword block width");
  require(isometry_defect(basis) <= 1e-10, "subspace_pr_estimate: basis must have orthonormal columns");
  const RVec eta = cqi_vector(problem);
  const Eigen::Index k = basis.cols();
  PrResult out;
  if (eta.cwiseAbs().maxCoeff() == 0.0) {
    out.s = CMat::Zero(k, r);
    out.x = CMat::Zero(basis.rows(), r);
    out.degenerate = true;
    return out;
  }
  const auto m = pr_measurements(problem, basis);

  CMat c = CMat::Zero(k, k);
  for (const auto& mt : m) c.noalias() += mt.adjoint() * mt;
  c /= static_cast<double>(m.size());
  const auto eig = ordered_eigen(c);
  CMat s0 = eig.vectors.leftCols(r);
  double energy = 0.0;
  for (const auto& mt : m) energy += (mt * s0).squaredNorm();
  if (energy > 0.0) s0 *= std::sqrt(eta.sum() / energy);
  const double step0 = eig.values(0) > 0.0 ? 1.0 / eig.values(0) : 1.0;

  auto run = [&](PrVariant v) {
    if (v == PrVariant::kWirtinger)
      return descend([&](const CMat& s) { return wf_loss(m, eta, s); },
                     [&](const CMat& s) { return wf_gradient(m, eta, s); }, s0, step0, config.max_iters,
                     config.rel_tol);
    return descend([&](const CMat& s) { return af_loss(m, eta, s); },
                   [&](const CMat& s) { return af_gradient(m, eta, s); }, s0, step0, config.max_iters,
                   config.rel_tol);
  };

  if (config.pr_variant == PrVariant::kBestOfBoth) {
    const DescentResult wf = run(PrVariant::kWirtinger);
    const DescentResult af = run(PrVariant::kAmplitude);
    // both candidates are scored on the amplitude loss
    const double wf_score = af_loss(m, eta, wf.s);
    const bool pick_wf = wf_score <= af.loss;
    out.s = pick_wf ? wf.s : af.s;
    out.loss = pick_wf ? wf_score : af.loss;
    out.chosen = pick_wf ? PrVariant::kWirtinger : PrVariant::kAmplitude;
    out.iterations = wf.iterations + af.iterations;
  } else {
    const DescentResult res = run(config.pr_variant);
    out.s = res.s;
    out.loss = res.loss;
    out.chosen = config.pr_variant;
    out.iterations = res.iterations;
  }
  out.x = basis * out.s;
  return out;
}

}  // namespace pmi
