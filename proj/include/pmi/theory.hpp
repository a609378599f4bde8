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

// Computable constants from the local and global error analysis, and
// numerical checks of the identities they rest on. Real-valued designs.

#ifndef PMI_THEORY_HPP
#define PMI_THEORY_HPP

#include <vector>

#include "pmi/model.hpp"

namespace pmi {

/// 1 / (1 + (N - 1) exp(R^2 / tau)): lower bound on every softmax probability
/// when ||x|| <= R.
double p_min_value(Eigen::Index n, double radius, double tau);

/// (1 - delta) 4 N (N - 1) (1 - mu^2) / (d (d + 2)).
double kappa0_value(Eigen::Index n, Eigen::Index d, double mu, double delta);

/// Same with denominator (d - 1)(d + 2): the minimum eigenvalue bound of the
/// averaged secant operator on traceless symmetric matrices.
double kappa0_operator_value(Eigen::Index n, Eigen::Index d, double mu, double delta);

/// kappa0 p_min^2 ||h||^2 / tau^2.
double beta0_value(double kappa0, double p_min, double h_norm, double tau);

/// 48 R^3 / tau^3 + 24 R / tau^2.
double lipschitz_hessian(double radius, double tau);

struct TheoryConstants {
  double p_min = 0.0;
  double kappa0 = 0.0;
  double kappa0_operator = 0.0;
  double beta0 = 0.0;
  double lipschitz_h = 0.0;
  double delta = 0.0;
};

TheoryConstants theory_constants(Eigen::Index n, Eigen::Index d, double mu, double delta, double radius, double tau,
                                 double h_norm);

/// Orthonormal basis (Frobenius) of the symmetric traceless d x d matrices.
std::vector<RMat> traceless_symmetric_basis(Eigen::Index d);

/// Gram matrix of the averaged secant operator
/// (1/T) sum_t sum_{i,j} <A_ti - A_tj, M> (A_ti - A_tj) in the traceless basis.
RMat secant_operator(const MeasurementDesign<double>& design);

/// (1/T) sum_t sum_{i,j} <A_ti - A_tj, x x^T - h h^T>^2 / ||x x^T - h h^T||_F^2.
double secant_ratio(const MeasurementDesign<double>& design, const RVec& x, const RVec& h);

struct SecantReport {
  double operator_min = 0.0;    // lambda_min of secant_operator
  double random_min = 0.0;      // min secant_ratio over random x
  int evaluated = 0;            // random x actually used (x = +-h skipped)
  double kappa0 = 0.0;          // statement constant at delta
  double kappa0_operator = 0.0; // operator-bound constant at delta
  bool certified = false;       // operator_min (1 - 1/d) >= kappa0
};

/// Both certification paths for a real design. The random path is bounded
/// below by operator_min (1 - 1/d) since only the traceless part of
/// x x^T - h h^T is seen by the operator.
SecantReport certify_secant(const MeasurementDesign<double>& design, const RVec& h, int trials, double delta,
                            Rng& rng);

struct MomentReport {
  double max_z = 0.0;        // worst deviation in standard errors
  double max_abs_dev = 0.0;  // worst absolute deviation
  double max_rel_dev = 0.0;  // worst relative deviation (nonzero targets)
};

/// Monte-Carlo check of E[u_i u_j u_k u_l] on the unit sphere against
/// (d_ij d_kl + d_ik d_jl + d_il d_jk) / (d (d + 2)).
MomentReport sphere_fourth_moment_check(Eigen::Index d, long samples, Rng& rng);

/// (1/m) sum_{i,j} ||v_i v_i^T - v_j v_j^T||_F^2 with m = d (d + 1) / 2 - 1.
double secant_expectation_mu(const Codebook<double>& codebook, Eigen::Index d);

/// Monte-Carlo check that E <V(M), M> = mu_V ||M||^2 for Haar Q over an
/// orthonormal traceless basis.
MomentReport secant_expectation_check(const Codebook<double>& codebook, Eigen::Index d, long samples, Rng& rng);

/// ||x x^T - h h^T||_F >= min(||x||, ||h||) dist(x, h), with slack 1e-12.
bool rank1_distance_bound_check(const RVec& x, const RVec& h);

/// Expected Hessian of the loss at x = h over I_t ~ p_t(.; h):
/// (4 / (tau^2 T)) sum_t (S_t - v_t v_t^T).
RMat expected_hessian_at_truth(const MeasurementDesign<double>& design, const RVec& h, double tau);

}  // namespace pmi

#endif  // PMI_THEORY_HPP
