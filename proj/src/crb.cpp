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

#include "pmi/crb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pmi {

RMat realify(const CMat& a) {
  require(a.rows() == a.cols(), "realify: matrix must be square");
  require(is_hermitian(a), "realify: matrix must be Hermitian");
  const Eigen::Index d = a.rows();
  RMat m(2 * d, 2 * d);
  m.topLeftCorner(d, d) = a.real();
  m.topRightCorner(d, d) = -a.imag();
  m.bottomLeftCorner(d, d) = a.imag();
  m.bottomRightCorner(d, d) = a.real();
  return m;
}

RVec realify(const CVec& h) {
  RVec theta(2 * h.size());
  theta << h.real(), h.imag();
  return theta;
}

CVec complexify(const RVec& theta) {
  require(theta.size() % 2 == 0, "complexify: length must be even");
  const Eigen::Index d = theta.size() / 2;
  CVec h(d);
  for (Eigen::Index i = 0; i < d; ++i) h(i) = cd(theta(i), theta(d + i));
  return h;
}

RVec gauge_direction(const RVec& theta) {
  require(theta.size() % 2 == 0, "gauge_direction: length must be even");
  const Eigen::Index d = theta.size() / 2;
  RVec u(theta.size());
  u << -theta.tail(d), theta.head(d);
  return u;
}

RMat fisher(const MeasurementDesign<cd>& design, const CVec& h, double tau) {
  require(design.width() == 1, "fisher: single-stream designs only");
  require(h.size() == design.dim(), "fisher: channel has the wrong length");
  require(tau > 0.0, "fisher: tau must be positive");
  const Eigen::Index d = design.dim(), n = design.num_codewords();
  RMat f = RMat::Zero(2 * d, 2 * d);
  RMat g(2 * d, n);
  for (Eigen::Index t = 0; t < design.num_rounds(); ++t) {
    const auto a = design.lifted().middleCols(t * n, n);
    const CVec c = a.adjoint() * h;
    const CMat ah = a * c.asDiagonal();  // column i is A_{t,i} h
    g.topRows(d) = ah.real();
    g.bottomRows(d) = ah.imag();
    const RVec p = softmax(c.cwiseAbs2(), tau);
    const RVec mean = g * p;
    f.noalias() += g * p.asDiagonal() * g.transpose();
    f.noalias() -= mean * mean.transpose();
  }
  f *= 4.0 / (tau * tau);
  return (f + f.transpose()) / 2.0;
}

namespace {

double spectral_norm_sym(const RMat& f) {
  if (f.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<RMat> es(f, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

double gauge_nullity(const RMat& f, const RVec& theta, double floor) {
  require(f.rows() == f.cols() && f.rows() == theta.size(), "gauge_nullity: shape mismatch");
  const RVec u = gauge_direction(theta);
  const double fn = std::max(spectral_norm_sym(f), floor);
  const double un = u.squaredNorm();
  if (fn == 0.0 || un == 0.0) return 0.0;
  return std::abs(u.dot(f * u)) / (fn * un);
}

double fisher_scale(const MeasurementDesign<cd>& design, const CVec& h, double tau) {
  return 4.0 / (tau * tau) * static_cast<double>(design.num_rounds()) * h.squaredNorm();
}

double rotation_equivariance_check(const MeasurementDesign<cd>& design, const CVec& h, double tau, double phi,
                                   double floor) {
  const Eigen::Index d = design.dim();
  const RMat f0 = fisher(design, h, tau);
  const RMat f1 = fisher(design, CVec(std::polar(1.0, phi) * h), tau);
  RMat rot(2 * d, 2 * d);
  const RMat eye = RMat::Identity(d, d);
  rot << std::cos(phi) * eye, -std::sin(phi) * eye, std::sin(phi) * eye, std::cos(phi) * eye;
  const double diff = (f1 - rot * f0 * rot.transpose()).norm();
  const double base = std::max(f0.norm(), floor);
  return base > 0.0 ? diff / base : diff;
}

CrbResult crb_trace(const RMat& f) {
  require(f.rows() == f.cols(), "crb_trace: matrix must be square");
  CrbResult out;
  if (f.size() == 0) return out;
  Eigen::SelfAdjointEigenSolver<RMat> es((f + f.transpose()) / 2.0, Eigen::EigenvaluesOnly);
  const RVec& lam = es.eigenvalues();
  const double lmax = lam.maxCoeff();
  const double tol = static_cast<double>(f.rows()) * std::numeric_limits<double>::epsilon() * lmax;
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    if (lam(i) > tol) {
      out.trace += 1.0 / lam(i);
      ++out.rank;
    }
  out.identifiability_deficit = out.rank < f.rows() - 1;
  return out;
}

double crb_trace_gauge_reduced(const RMat& f, const RVec& theta) {
  const RVec u = gauge_direction(theta);
  require(u.norm() > 0.0, "crb_trace_gauge_reduced: theta must be nonzero");
  const RMat d = complement_basis<double>(RMat(u / u.norm()));
  const RMat reduced = d.transpose() * f * d;
  return reduced.ldlt().solve(RMat::Identity(reduced.rows(), reduced.cols())).trace();
}

}  // namespace pmi
