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

#include "pmi/theory.hpp"

#include <cmath>
#include <limits>

#include "pmi/designs.hpp"
#include "pmi/metrics.hpp"

namespace pmi {

double p_min_value(Eigen::Index n, double radius, double tau) {
  require(n >= 1, "p_min_value: N must be >= 1");
  require(radius > 0.0 && tau > 0.0, "p_min_value: R and tau must be positive");
  // e^{-x} / (e^{-x} + N - 1) avoids overflow for large R^2 / tau
  const double x = radius * radius / tau;
  const double ex = std::exp(-x);
  return ex / (ex + static_cast<double>(n - 1));
}

namespace {

double kappa_numerator(Eigen::Index n, double mu, double delta) {
  require(n >= 1, "kappa0: N must be >= 1");
  require(mu >= 0.0 && mu <= 1.0, "kappa0: mu must lie in [0, 1]");
  require(delta >= 0.0 && delta < 1.0, "kappa0: delta must lie in [0, 1)");
  const double nn = static_cast<double>(n);
  return (1.0 - delta) * 4.0 * nn * (nn - 1.0) * (1.0 - mu * mu);
}

}  // namespace

double kappa0_value(Eigen::Index n, Eigen::Index d, double mu, double delta) {
  require(d >= 1, "kappa0_value: d must be >= 1");
  const double dd = static_cast<double>(d);
  return kappa_numerator(n, mu, delta) / (dd * (dd + 2.0));
}

double kappa0_operator_value(Eigen::Index n, Eigen::Index d, double mu, double delta) {
  require(d >= 2, "kappa0_operator_value: d must be >= 2");
  const double dd = static_cast<double>(d);
  return kappa_numerator(n, mu, delta) / ((dd - 1.0) * (dd + 2.0));
}

double beta0_value(double kappa0, double p_min, double h_norm, double tau) {
  require(tau > 0.0, "beta0_value: tau must be positive");
  return kappa0 * p_min * p_min * h_norm * h_norm / (tau * tau);
}

double lipschitz_hessian(double radius, double tau) {
  require(radius > 0.0 && tau > 0.0, "lipschitz_hessian: R and tau must be positive");
  return 48.0 * radius * radius * radius / (tau * tau * tau) + 24.0 * radius / (tau * tau);
}

TheoryConstants theory_constants(Eigen::Index n, Eigen::Index d, double mu, double delta, double radius, double tau,
                                 double h_norm) {
  TheoryConstants c;
  c.delta = delta;
  c.p_min = p_min_value(n, radius, tau);
  c.kappa0 = kappa0_value(n, d, mu, delta);
  c.kappa0_operator = d >= 2 ? kappa0_operator_value(n, d, mu, delta) : 0.0;
  c.beta0 = beta0_value(c.kappa0, c.p_min, h_norm, tau);
  c.lipschitz_h = lipschitz_hessian(radius, tau);
  return c;
}

std::vector<RMat> traceless_symmetric_basis(Eigen::Index d) {
  require(d >= 1, "traceless_symmetric_basis: d must be >= 1");
  std::vector<RMat> raw;
  for (Eigen::Index i = 0; i + 1 < d; ++i) {
    RMat e = RMat::Zero(d, d);
    e(i, i) = 1.0;
    e(i + 1, i + 1) = -1.0;
    raw.push_back(e);
  }
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = i + 1; j < d; ++j) {
      RMat e = RMat::Zero(d, d);
      e(i, j) = e(j, i) = 1.0 / std::sqrt(2.0);
      raw.push_back(e);
    }
  // Gram-Schmidt in the Frobenius inner product
  std::vector<RMat> basis;
  for (auto e : raw) {
    for (const auto& b : basis) e -= (e.cwiseProduct(b).sum()) * b;
    basis.push_back(e / e.norm());
  }
  return basis;
}

namespace {

/// d^2 x m matrix whose columns are the vectorized basis elements.
RMat basis_matrix(Eigen::Index d) {
  const auto basis = traceless_symmetric_basis(d);
  RMat bv(d * d, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k)
    bv.col(static_cast<Eigen::Index>(k)) = Eigen::Map<const RVec>(basis[k].data(), d * d);
  return bv;
}

/// Coordinates of a_i a_i^T for each column of `a`: an m x N matrix.
RMat rank1_coords(const RMat& bv, const Eigen::Ref<const RMat>& a) {
  const Eigen::Index d = a.rows();
  RMat c(bv.cols(), a.cols());
  for (Eigen::Index i = 0; i < a.cols(); ++i) {
    const RMat aa = a.col(i) * a.col(i).transpose();
    c.col(i) = bv.transpose() * Eigen::Map<const RVec>(aa.data(), d * d);
  }
  return c;
}

/// sum_{i,j} (c_i - c_j)(c_i - c_j)^T = 2 N sum c_i c_i^T - 2 (sum c_i)(sum c_i)^T.
RMat pair_scatter(const RMat& c) {
  const double n = static_cast<double>(c.cols());
  const RVec s = c.rowwise().sum();
  return 2.0 * n * c * c.transpose() - 2.0 * s * s.transpose();
}

}  // namespace

RMat secant_operator(const MeasurementDesign<double>& design) {
  require(design.width() == 1, "secant_operator: single-stream designs only");
  const Eigen::Index d = design.dim(), n = design.num_codewords();
  const RMat bv = basis_matrix(d);
  RMat g = RMat::Zero(bv.cols(), bv.cols());
  for (Eigen::Index t = 0; t < design.num_rounds(); ++t)
    g += pair_scatter(rank1_coords(bv, design.lifted().middleCols(t * n, n)));
  g /= static_cast<double>(design.num_rounds());
  return (g + g.transpose()) / 2.0;
}

double secant_ratio(const MeasurementDesign<double>& design, const RVec& x, const RVec& h) {
  require(design.width() == 1, "secant_ratio: single-stream designs only");
  require(x.size() == design.dim() && h.size() == design.dim(), "secant_ratio: length mismatch");
  const double denom = (x * x.transpose() - h * h.transpose()).squaredNorm();
  require(denom > 0.0, "secant_ratio: x x^T must differ from h h^T");
  const Eigen::Index n = design.num_codewords();
  const double nn = static_cast<double>(n);
  double acc = 0.0;
  for (Eigen::Index t = 0; t < design.num_rounds(); ++t) {
    const auto a = design.lifted().middleCols(t * n, n);
    const RVec w = (a.transpose() * x).array().square() - (a.transpose() * h).array().square();
    acc += 2.0 * nn * w.squaredNorm() - 2.0 * w.sum() * w.sum();
  }
  return acc / static_cast<double>(design.num_rounds()) / denom;
}

SecantReport certify_secant(const MeasurementDesign<double>& design, const RVec& h, int trials, double delta,
                            Rng& rng) {
  require(trials >= 0, "certify_secant: trials must be nonnegative");
  const Eigen::Index d = design.dim();
  SecantReport rep;
  const RMat g = secant_operator(design);
  if (g.size() > 0) {
    Eigen::SelfAdjointEigenSolver<RMat> es(g, Eigen::EigenvaluesOnly);
    rep.operator_min = es.eigenvalues()(0);
  }
  rep.random_min = std::numeric_limits<double>::infinity();
  const double hn = std::max(h.norm(), 1.0);
  for (int k = 0; k < trials; ++k) {
    RVec x = gaussian_matrix<double>(d, 1, rng).col(0);
    x *= hn;
    if ((x * x.transpose() - h * h.transpose()).squaredNorm() <= 1e-24 * hn * hn * hn * hn) continue;
    rep.random_min = std::min(rep.random_min, secant_ratio(design, x, h));
    ++rep.evaluated;
  }
  rep.kappa0 = kappa0_value(design.num_codewords(), d, design.codebook().coherence(), delta);
  rep.kappa0_operator = d >= 2 ? kappa0_operator_value(design.num_codewords(), d, design.codebook().coherence(), delta)
                               : 0.0;
  rep.certified = rep.operator_min * (1.0 - 1.0 / static_cast<double>(d)) >= rep.kappa0;
  return rep;
}

MomentReport sphere_fourth_moment_check(Eigen::Index d, long samples, Rng& rng) {
  require(d >= 1 && samples >= 2, "sphere_fourth_moment_check: need d >= 1 and samples >= 2");
  struct Index4 {
    Eigen::Index i, j, k, l;
  };
  std::vector<Index4> idx;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = i; j < d; ++j)
      for (Eigen::Index k = j; k < d; ++k)
        for (Eigen::Index l = k; l < d; ++l) idx.push_back({i, j, k, l});
  RVec sum = RVec::Zero(static_cast<Eigen::Index>(idx.size()));
  RVec sum2 = sum;
  std::normal_distribution<double> n01(0.0, 1.0);
  RVec u(d);
  for (long s = 0; s < samples; ++s) {
    double nrm = 0.0;
    do {
      for (Eigen::Index i = 0; i < d; ++i) u(i) = n01(rng);
      nrm = u.norm();
    } while (nrm == 0.0);
    u /= nrm;
    for (std::size_t q = 0; q < idx.size(); ++q) {
      const auto& m = idx[q];
      const double v = u(m.i) * u(m.j) * u(m.k) * u(m.l);
      sum(static_cast<Eigen::Index>(q)) += v;
      sum2(static_cast<Eigen::Index>(q)) += v * v;
    }
  }
  const double ns = static_cast<double>(samples);
  const double dd = static_cast<double>(d);
  MomentReport rep;
  for (std::size_t q = 0; q < idx.size(); ++q) {
    const auto& m = idx[q];
    const auto kd = [](Eigen::Index a, Eigen::Index b) { return a == b ? 1.0 : 0.0; };
    const double target =
        (kd(m.i, m.j) * kd(m.k, m.l) + kd(m.i, m.k) * kd(m.j, m.l) + kd(m.i, m.l) * kd(m.j, m.k)) / (dd * (dd + 2.0));
    const double mean = sum(static_cast<Eigen::Index>(q)) / ns;
    const double var = std::max(0.0, sum2(static_cast<Eigen::Index>(q)) / ns - mean * mean);
    const double se = std::sqrt(var / (ns - 1.0));
    const double dev = std::abs(mean - target);
    rep.max_abs_dev = std::max(rep.max_abs_dev, dev);
    if (target != 0.0) rep.max_rel_dev = std::max(rep.max_rel_dev, dev / target);
    if (se > 0.0) rep.max_z = std::max(rep.max_z, dev / se);
    else if (dev > 1e-12) rep.max_z = std::numeric_limits<double>::infinity();
  }
  return rep;
}

double secant_expectation_mu(const Codebook<double>& codebook, Eigen::Index d) {
  require(codebook.width() == 1, "secant_expectation_mu: single-stream codebook required");
  require(d >= 2, "secant_expectation_mu: d must be >= 2");
  const RMat& v = codebook.matrix();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < v.cols(); ++i)
    for (Eigen::Index j = 0; j < v.cols(); ++j)
      acc += (v.col(i) * v.col(i).transpose() - v.col(j) * v.col(j).transpose()).squaredNorm();
  const double dd = static_cast<double>(d);
  return acc / (dd * (dd + 1.0) / 2.0 - 1.0);
}

MomentReport secant_expectation_check(const Codebook<double>& codebook, Eigen::Index d, long samples, Rng& rng) {
  require(samples >= 2, "secant_expectation_check: samples must be >= 2");
  require(codebook.dim() <= d, "secant_expectation_check: codebook dimension exceeds d");
  const double mu_v = secant_expectation_mu(codebook, d);
  const RMat bv = basis_matrix(d);
  const Eigen::Index m = bv.cols();
  RVec sum = RVec::Zero(m), sum2 = RVec::Zero(m);
  for (long s = 0; s < samples; ++s) {
    const RMat q = haar_stiefel<double>(d, codebook.dim(), rng);
    const RMat c = rank1_coords(bv, q * codebook.matrix());
    const double n = static_cast<double>(c.cols());
    const RVec rs = c.rowwise().sum();
    const RVec val = 2.0 * n * c.rowwise().squaredNorm().array() - 2.0 * rs.array().square();
    sum += val;
    sum2 += val.array().square().matrix();
  }
  const double ns = static_cast<double>(samples);
  MomentReport rep;
  for (Eigen::Index k = 0; k < m; ++k) {
    const double mean = sum(k) / ns;
    const double var = std::max(0.0, sum2(k) / ns - mean * mean);
    const double se = std::sqrt(var / (ns - 1.0));
    const double dev = std::abs(mean - mu_v);
    rep.max_abs_dev = std::max(rep.max_abs_dev, dev);
    if (mu_v != 0.0) rep.max_rel_dev = std::max(rep.max_rel_dev, dev / mu_v);
    if (se > 0.0) rep.max_z = std::max(rep.max_z, dev / se);
    else if (dev > 1e-12) rep.max_z = std::numeric_limits<double>::infinity();
  }
  return rep;
}

bool rank1_distance_bound_check(const RVec& x, const RVec& h) {
  require(x.size() == h.size(), "rank1_distance_bound_check: length mismatch");
  const double lhs = (x * x.transpose() - h * h.transpose()).norm();
  const double rhs = std::min(x.norm(), h.norm()) * dist<double>(x, h);
  return lhs >= rhs - 1e-12 * std::max(1.0, x.squaredNorm() + h.squaredNorm());
}

RMat expected_hessian_at_truth(const MeasurementDesign<double>& design, const RVec& h, double tau) {
  require(design.width() == 1, "expected_hessian_at_truth: single-stream designs only");
  require(h.size() == design.dim(), "expected_hessian_at_truth: length mismatch");
  const Eigen::Index d = design.dim(), n = design.num_codewords();
  RMat acc = RMat::Zero(d, d);
  for (Eigen::Index t = 0; t < design.num_rounds(); ++t) {
    const auto a = design.lifted().middleCols(t * n, n);
    const RVec c = a.transpose() * h;
    const RVec p = softmax(c.array().square().matrix(), tau);
    const RVec pc2 = p.array() * c.array().square();
    const RVec v = a * (p.array() * c.array()).matrix();
    acc.noalias() += a * pc2.asDiagonal() * a.transpose();
    acc.noalias() -= v * v.transpose();
  }
  acc *= 4.0 / (tau * tau * static_cast<double>(design.num_rounds()));
  return (acc + acc.transpose()) / 2.0;
}

}  // namespace pmi
