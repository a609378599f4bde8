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

// Fisher information of the softmax PMI model in realified coordinates and
// the gauge-aware Cramer-Rao bound.

#ifndef PMI_CRB_HPP
#define PMI_CRB_HPP

#include "pmi/model.hpp"

namespace pmi {

/// [[Re A, -Im A], [Im A, Re A]] for Hermitian A.
RMat realify(const CMat& a);

/// [Re h; Im h].
RVec realify(const CVec& h);

/// Inverse of realify for vectors.
CVec complexify(const RVec& theta);

/// J theta with J = [[0, -I], [I, 0]].
RVec gauge_direction(const RVec& theta);

/// Fisher information of (I_1, ..., I_T) about theta = [Re h; Im h] under the
/// softmax model. Single-stream designs only.
RMat fisher(const MeasurementDesign<cd>& design, const CVec& h, double tau);

/// |u^T F u| / (max(||F||_2, floor) ||u||^2) with u = J theta; 0 when the
/// denominator vanishes. A positive floor keeps designs whose Fisher matrix is
/// zero up to rounding from reporting O(1) values.
double gauge_nullity(const RMat& f, const RVec& theta, double floor = 0.0);

/// ||F(theta_phi) - R_phi F(theta) R_phi^T||_F / max(||F(theta)||_F, floor).
double rotation_equivariance_check(const MeasurementDesign<cd>& design, const CVec& h, double tau, double phi,
                                   double floor = 0.0);

/// Natural magnitude of the Fisher matrix: (4 / tau^2) T ||h||^2.
double fisher_scale(const MeasurementDesign<cd>& design, const CVec& h, double tau);

struct CrbResult {
  double trace = 0.0;            // tr(F^+)
  Eigen::Index rank = 0;         // eigenvalues kept
  bool identifiability_deficit = false;  // more than one null direction
};

/// tr(F^+) with eigenvalues at or below 2d eps lambda_max treated as zero.
CrbResult crb_trace(const RMat& f);

/// tr((D^T F D)^{-1}) with D an orthonormal basis of the complement of J theta.
double crb_trace_gauge_reduced(const RMat& f, const RVec& theta);

}  // namespace pmi

#endif  // PMI_CRB_HPP
