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

// Comparison estimators that use CQI in addition to PMI: alternating
// minimization with auxiliary phases and subspace phase retrieval. The
// PMI-only spectral estimate lives in spectral.hpp.

#ifndef PMI_BASELINES_HPP
#define PMI_BASELINES_HPP

#include <string>
#include <vector>

#include "pmi/model.hpp"
#include "pmi/spectral.hpp"

namespace pmi {

enum class PrVariant { kWirtinger, kAmplitude, kBestOfBoth };
enum class BaselineInit { kSpectral, kRandom, kIdentity };

std::string to_string(PrVariant v);
PrVariant parse_pr_variant(const std::string& name);

struct BaselineConfig {
  double lambda_am = 1.0;
  int max_iters = 100;
  double rel_tol = 1e-3;
  PrVariant pr_variant = PrVariant::kBestOfBoth;
  BaselineInit init = BaselineInit::kSpectral;
};

struct AmResult {
  CMat x;                       // d x 1 (single) or d x r (multi)
  int iterations = 0;
  double objective = 0.0;       // final value (last stream for multi)
  bool singular = false;        // normal equations solved by pseudoinverse
  std::vector<double> history;  // objective per alternation (last stream for multi)
};

/// Core alternating minimization over u for
/// sum_t |e_t^H u e^{j phi_t} - y_t|^2 + lambda ||u||^2, with E = [e_1 .. e_T].
AmResult am_solve(const CMat& e, const RVec& y, double lambda, const CVec& u0, int max_iters, double rel_tol);

/// Objective of am_solve at u with the phases at their optimum.
double am_objective(const CMat& e, const RVec& y, double lambda, const CVec& u);

/// Single-stream AM from PMI and CQI. `rng` is used only for random init.
AmResult am_estimate_single(const EstimationProblem<cd>& problem, const BaselineConfig& config, Rng& rng);

/// Sequential multi-stream AM with per-stream CQI eta_t / r. Stream k uses
/// column k of the reported block and lives in the orthogonal complement of
/// the previous streams. Returns orthonormal columns.
AmResult am_estimate_multi(const EstimationProblem<cd>& problem, Eigen::Index r, const BaselineConfig& config,
                           Rng& rng);

struct PrResult {
  CMat x;                 // B S
  CMat s;                 // k x r coefficients
  double loss = 0.0;      // loss of the chosen variant at s
  PrVariant chosen = PrVariant::kWirtinger;
  int iterations = 0;
  bool degenerate = false;  // all CQI zero; x = 0
};

/// Per-round reduced measurement matrices M_t = V_{I_t}^H Q_t^H B (r x k).
std::vector<CMat> pr_measurements(const EstimationProblem<cd>& problem, const CMat& basis);

/// (1/T) sum_t (||M_t S||_F^2 - eta_t)^2.
double wf_loss(const std::vector<CMat>& m, const RVec& eta, const CMat& s);
/// (4/T) sum_t (||M_t S||_F^2 - eta_t) M_t^H M_t S.
CMat wf_gradient(const std::vector<CMat>& m, const RVec& eta, const CMat& s);
/// (1/T) sum_t (||M_t S||_F - sqrt(eta_t))^2.
double af_loss(const std::vector<CMat>& m, const RVec& eta, const CMat& s);
/// (2/T) sum_t (1 - sqrt(eta_t) / ||M_t S||_F) M_t^H M_t S, zero terms where M_t S = 0.
CMat af_gradient(const std::vector<CMat>& m, const RVec& eta, const CMat& s);

/// Subspace phase retrieval with a subspace-aware spectral initialization.
PrResult subspace_pr_estimate(const EstimationProblem<cd>& problem, const CMat& basis, Eigen::Index r,
                              const BaselineConfig& config);

/// CQI values of a problem as a vector; throws if any round lacks CQI.
RVec cqi_vector(const EstimationProblem<cd>& problem);

}  // namespace pmi

#endif  // PMI_BASELINES_HPP
