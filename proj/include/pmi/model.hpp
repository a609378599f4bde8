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

// PMI feedback model.
//
// A round t applies a dimensionality-reduction matrix Q_t (d x p, orthonormal
// columns) and the user reports the index of the codeword block V_i (p x r)
// maximizing ||V_i^H Q_t^H X||_F^2. The probabilistic version replaces the
// argmax by a softmax with temperature tau. Everything here is templated on
// the scalar so that the real-valued theory setting and the complex channel
// setting share one implementation.

#ifndef PMI_MODEL_HPP
#define PMI_MODEL_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "pmi/linalg.hpp"
#include "pmi/types.hpp"

namespace pmi {

/// Shared codebook: columns grouped into N blocks of width r.
template <typename Scalar>
class Codebook {
 public:
  Codebook() = default;

  explicit Codebook(Mat<Scalar> v, Eigen::Index width = 1) : v_(std::move(v)), r_(width) {
    require(r_ >= 1, "Codebook: block width must be >= 1");
    require(v_.cols() >= r_ && v_.cols() % r_ == 0,
            "Codebook: column count must be a positive multiple of the block width");
    require(v_.allFinite(), "Codebook: entries must be finite");
    for (Eigen::Index j = 0; j < v_.cols(); ++j)
      require(std::abs(v_.col(j).norm() - 1.0) <= 1e-10, "Codebook: codewords must have unit norm");
    coherence_ = compute_coherence();
  }

  Eigen::Index dim() const { return v_.rows(); }
  Eigen::Index size() const { return v_.cols() / r_; }
  Eigen::Index width() const { return r_; }
  const Mat<Scalar>& matrix() const { return v_; }
  auto block(Eigen::Index i) const { return v_.middleCols(i * r_, r_); }

  /// max |v_a^H v_b| over columns a, b belonging to distinct blocks.
  double coherence() const { return coherence_; }

 private:
  double compute_coherence() const {
    double mu = 0.0;
    for (Eigen::Index a = 0; a < v_.cols(); ++a)
      for (Eigen::Index b = a + 1; b < v_.cols(); ++b)
        if (a / r_ != b / r_) mu = std::max(mu, std::abs(v_.col(a).dot(v_.col(b))));
    return mu;
  }

  Mat<Scalar> v_;
  Eigen::Index r_ = 1;
  double coherence_ = 0.0;
};

/// One feedback round as observed by the base station.
template <typename Scalar>
struct FeedbackRound {
  Mat<Scalar> reduction;       // Q_t, d x p
  std::size_t pmi = 0;         // reported index I_t
  std::optional<float> cqi;    // optional gain report
};

/// Codebook plus the sequence of reduction matrices, with every effective
/// codeword block Q_t V_i precomputed as one d x (T N r) matrix.
template <typename Scalar>
class MeasurementDesign {
 public:
  MeasurementDesign() = default;

  MeasurementDesign(Codebook<Scalar> codebook, std::vector<Mat<Scalar>> reductions)
      : codebook_(std::move(codebook)), reductions_(std::move(reductions)) {
    require(!reductions_.empty(), "MeasurementDesign: at least one round is required");
    const Eigen::Index d = reductions_.front().rows();
    require(d >= 1, "MeasurementDesign: channel dimension must be >= 1");
    for (const auto& q : reductions_) {
      require(q.rows() == d && q.cols() == codebook_.dim(),
              "MeasurementDesign: reduction matrices must be d x p");
      require(q.allFinite(), "MeasurementDesign: reduction entries must be finite");
      require(isometry_defect(q) <= 1e-10, "MeasurementDesign: Q^H Q must equal I_p");
    }
    build_lifted();
  }

  Eigen::Index dim() const { return reductions_.front().rows(); }
  Eigen::Index reduced_dim() const { return codebook_.dim(); }
  Eigen::Index num_codewords() const { return codebook_.size(); }
  Eigen::Index width() const { return codebook_.width(); }
  Eigen::Index num_rounds() const { return static_cast<Eigen::Index>(reductions_.size()); }

  const Codebook<Scalar>& codebook() const { return codebook_; }
  const std::vector<Mat<Scalar>>& reductions() const { return reductions_; }
  const Mat<Scalar>& reduction(Eigen::Index t) const { return reductions_.at(static_cast<std::size_t>(t)); }

  /// All effective codeword blocks side by side; block (t, i) starts at
  /// column (t N + i) r.
  const Mat<Scalar>& lifted() const { return lifted_; }

  auto block(Eigen::Index t, Eigen::Index i) const {
    check_index(t, i);
    const Eigen::Index n = num_codewords(), r = width();
    return lifted_.middleCols((t * n + i) * r, r);
  }

  /// First `t` rounds.
  MeasurementDesign prefix(Eigen::Index t) const {
    require(t >= 1 && t <= num_rounds(), "MeasurementDesign::prefix: round count out of range");
    return MeasurementDesign(codebook_, {reductions_.begin(), reductions_.begin() + t});
  }

  void check_index(Eigen::Index t, Eigen::Index i) const {
    require(t >= 0 && t < num_rounds(), "round index out of range");
    require(i >= 0 && i < num_codewords(), "codeword index out of range");
  }

 private:
  void build_lifted() {
    const Eigen::Index n = num_codewords(), r = width();
    lifted_.resize(dim(), num_rounds() * n * r);
    for (Eigen::Index t = 0; t < num_rounds(); ++t)
      lifted_.middleCols(t * n * r, n * r).noalias() = reductions_[static_cast<std::size_t>(t)] * codebook_.matrix();
  }

  Codebook<Scalar> codebook_;
  std::vector<Mat<Scalar>> reductions_;
  Mat<Scalar> lifted_;
};

/// Rounds of `a` followed by rounds of `b` (codebooks must agree).
template <typename Scalar>
MeasurementDesign<Scalar> concat(const MeasurementDesign<Scalar>& a, const MeasurementDesign<Scalar>& b) {
  require(a.codebook().matrix() == b.codebook().matrix() && a.width() == b.width(),
          "concat: designs must share a codebook");
  std::vector<Mat<Scalar>> qs = a.reductions();
  qs.insert(qs.end(), b.reductions().begin(), b.reductions().end());
  return MeasurementDesign<Scalar>(a.codebook(), std::move(qs));
}

/// Design repeated `k` times.
template <typename Scalar>
MeasurementDesign<Scalar> replicate(const MeasurementDesign<Scalar>& design, int k) {
  require(k >= 1, "replicate: k must be >= 1");
  std::vector<Mat<Scalar>> qs;
  qs.reserve(design.reductions().size() * static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) qs.insert(qs.end(), design.reductions().begin(), design.reductions().end());
  return MeasurementDesign<Scalar>(design.codebook(), std::move(qs));
}

/// Observed feedback plus model hyperparameters. Immutable once built.
template <typename Scalar>
class EstimationProblem {
 public:
  EstimationProblem(MeasurementDesign<Scalar> design, std::vector<std::size_t> pmis, double tau,
                    std::optional<double> radius = std::nullopt,
                    std::vector<std::optional<float>> cqis = {})
      : design_(std::move(design)), pmis_(std::move(pmis)), cqis_(std::move(cqis)), tau_(tau), radius_(radius) {
    require(tau_ > 0.0 && std::isfinite(tau_), "EstimationProblem: tau must be positive");
    require(!radius_ || (*radius_ > 0.0 && std::isfinite(*radius_)),
            "EstimationProblem: radius must be positive");
    require(static_cast<Eigen::Index>(pmis_.size()) == design_.num_rounds(),
            "EstimationProblem: one PMI per round is required");
    for (auto i : pmis_)
      require(static_cast<Eigen::Index>(i) < design_.num_codewords(), "EstimationProblem: PMI out of range");
    if (cqis_.empty()) cqis_.resize(pmis_.size());
    require(cqis_.size() == pmis_.size(), "EstimationProblem: CQI list length must match round count");
    for (const auto& c : cqis_)
      require(!c || (std::isfinite(*c) && *c >= 0.0f), "EstimationProblem: CQI must be finite and nonnegative");
  }

  EstimationProblem(const std::vector<FeedbackRound<Scalar>>& rounds, Codebook<Scalar> codebook, double tau,
                    std::optional<double> radius = std::nullopt)
      : EstimationProblem(make_design(rounds, std::move(codebook)), collect_pmis(rounds), tau, radius,
                          collect_cqis(rounds)) {}

  const MeasurementDesign<Scalar>& design() const { return design_; }
  const Codebook<Scalar>& codebook() const { return design_.codebook(); }
  const std::vector<std::size_t>& pmis() const { return pmis_; }
  const std::vector<std::optional<float>>& cqis() const { return cqis_; }
  std::size_t pmi(Eigen::Index t) const { return pmis_.at(static_cast<std::size_t>(t)); }
  double tau() const { return tau_; }
  std::optional<double> radius() const { return radius_; }

  Eigen::Index dim() const { return design_.dim(); }
  Eigen::Index reduced_dim() const { return design_.reduced_dim(); }
  Eigen::Index num_codewords() const { return design_.num_codewords(); }
  Eigen::Index num_rounds() const { return design_.num_rounds(); }
  Eigen::Index width() const { return design_.width(); }

  bool has_all_cqi() const {
    return std::all_of(cqis_.begin(), cqis_.end(), [](const auto& c) { return c.has_value(); });
  }

  FeedbackRound<Scalar> round(Eigen::Index t) const {
    return {design_.reduction(t), pmi(t), cqis_.at(static_cast<std::size_t>(t))};
  }

 private:
  static MeasurementDesign<Scalar> make_design(const std::vector<FeedbackRound<Scalar>>& rounds,
                                               Codebook<Scalar> codebook) {
    std::vector<Mat<Scalar>> qs;
    qs.reserve(rounds.size());
    for (const auto& r : rounds) qs.push_back(r.reduction);
    return MeasurementDesign<Scalar>(std::move(codebook), std::move(qs));
  }
  static std::vector<std::size_t> collect_pmis(const std::vector<FeedbackRound<Scalar>>& rounds) {
    std::vector<std::size_t> out;
    for (const auto& r : rounds) out.push_back(r.pmi);
    return out;
  }
  static std::vector<std::optional<float>> collect_cqis(const std::vector<FeedbackRound<Scalar>>& rounds) {
    std::vector<std::optional<float>> out;
    for (const auto& r : rounds) out.push_back(r.cqi);
    return out;
  }

  MeasurementDesign<Scalar> design_;
  std::vector<std::size_t> pmis_;
  std::vector<std::optional<float>> cqis_;
  double tau_;
  std::optional<double> radius_;
};

// ---------------------------------------------------------------------------
// Per-round quantities

/// Q_t V_i (d x r; a single column when r = 1).
template <typename Scalar>
Mat<Scalar> effective_codeword(const MeasurementDesign<Scalar>& design, Eigen::Index t, Eigen::Index i) {
  return design.block(t, i);
}

template <typename Scalar>
Mat<Scalar> effective_codeword(const EstimationProblem<Scalar>& problem, Eigen::Index t, Eigen::Index i) {
  return effective_codeword(problem.design(), t, i);
}

template <typename Scalar, typename Derived>
void check_channel_shape(const MeasurementDesign<Scalar>& design, const Eigen::MatrixBase<Derived>& x) {
  require(x.rows() == design.dim(), "channel estimate has the wrong number of rows");
  require(x.cols() == design.width(), "channel estimate column count must match the codeword block width");
}

/// ||V_i^H Q_t^H X||_F^2.
template <typename Scalar, typename Derived>
double gain(const MeasurementDesign<Scalar>& design, Eigen::Index t, Eigen::Index i,
            const Eigen::MatrixBase<Derived>& x) {
  design.check_index(t, i);
  check_channel_shape(design, x);
  return (design.block(t, i).adjoint() * x).squaredNorm();
}

template <typename Scalar, typename Derived>
double gain(const EstimationProblem<Scalar>& problem, Eigen::Index t, Eigen::Index i,
            const Eigen::MatrixBase<Derived>& x) {
  return gain(problem.design(), t, i, x);
}

/// Gains of every codeword in every round: an N x T matrix.
template <typename Scalar, typename Derived>
RMat all_gains(const MeasurementDesign<Scalar>& design, const Eigen::MatrixBase<Derived>& x) {
  check_channel_shape(design, x);
  const Eigen::Index n = design.num_codewords(), r = design.width(), t_count = design.num_rounds();
  const Mat<Scalar> proj = design.lifted().adjoint() * x;
  RMat g(n, t_count);
  for (Eigen::Index t = 0; t < t_count; ++t)
    for (Eigen::Index j = 0; j < n; ++j) g(j, t) = proj.middleRows((t * n + j) * r, r).squaredNorm();
  return g;
}

/// Numerically stable softmax of gains / tau.
inline RVec softmax(const Eigen::Ref<const RVec>& gains, double tau) {
  const double m = gains.maxCoeff();
  RVec e = ((gains.array() - m) / tau).exp().matrix();
  return e / e.sum();
}

/// log sum_j exp(z_j) with max subtraction.
inline double log_sum_exp(const Eigen::Ref<const RVec>& z) {
  const double m = z.maxCoeff();
  return m + std::log((z.array() - m).exp().sum());
}

/// p_t(. ; X): softmax over gains / tau.
template <typename Scalar, typename Derived>
RVec softmax_pmf(const MeasurementDesign<Scalar>& design, Eigen::Index t, const Eigen::MatrixBase<Derived>& x,
                 double tau) {
  require(tau > 0.0, "softmax_pmf: tau must be positive");
  design.check_index(t, 0);
  check_channel_shape(design, x);
  RVec g(design.num_codewords());
  for (Eigen::Index j = 0; j < g.size(); ++j) g(j) = (design.block(t, j).adjoint() * x).squaredNorm();
  return softmax(g, tau);
}

template <typename Scalar, typename Derived>
RVec softmax_pmf(const EstimationProblem<Scalar>& problem, Eigen::Index t, const Eigen::MatrixBase<Derived>& x) {
  return softmax_pmf(problem.design(), t, x, problem.tau());
}

/// Inverse-CDF categorical draw from a probability vector.
inline std::size_t sample_categorical(const Eigen::Ref<const RVec>& pmf, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng);
  double cum = 0.0;
  for (Eigen::Index i = 0; i < pmf.size(); ++i) {
    cum += pmf(i);
    if (u < cum) return static_cast<std::size_t>(i);
  }
  // u landed in the rounding slack above the accumulated sum
  for (Eigen::Index i = pmf.size() - 1; i > 0; --i)
    if (pmf(i) > 0.0) return static_cast<std::size_t>(i);
  return 0;
}

/// Draws I_t from the softmax feedback model at channel X.
template <typename Scalar, typename Derived>
std::size_t sample_pmi(const MeasurementDesign<Scalar>& design, Eigen::Index t, const Eigen::MatrixBase<Derived>& x,
                       double tau, Rng& rng) {
  return sample_categorical(softmax_pmf(design, t, x, tau), rng);
}

/// argmax_i ||V_i^H Q_t^H X||_F^2 (X may have any column count), smallest
/// index on ties.
template <typename Scalar, typename Derived>
std::size_t hard_pmi(const MeasurementDesign<Scalar>& design, Eigen::Index t, const Eigen::MatrixBase<Derived>& x) {
  design.check_index(t, 0);
  require(x.rows() == design.dim(), "hard_pmi: channel has the wrong number of rows");
  std::size_t best = 0;
  double best_gain = -std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < design.num_codewords(); ++j) {
    const double g = (design.block(t, j).adjoint() * x).squaredNorm();
    if (g > best_gain) {
      best_gain = g;
      best = static_cast<std::size_t>(j);
    }
  }
  return best;
}

/// Gain at the reported index, rounded to the nearest binary32 value. The
/// true channel may have any number of receive columns.
template <typename Scalar, typename Derived>
float cqi(const MeasurementDesign<Scalar>& design, Eigen::Index t, std::size_t pmi,
          const Eigen::MatrixBase<Derived>& x) {
  design.check_index(t, static_cast<Eigen::Index>(pmi));
  require(x.rows() == design.dim(), "cqi: channel has the wrong number of rows");
  return static_cast<float>((design.block(t, static_cast<Eigen::Index>(pmi)).adjoint() * x).squaredNorm());
}

/// Softmax-model feedback for every round of a design.
template <typename Scalar, typename Derived>
std::vector<std::size_t> simulate_softmax_feedback(const MeasurementDesign<Scalar>& design,
                                                   const Eigen::MatrixBase<Derived>& x, double tau, Rng& rng) {
  std::vector<std::size_t> out;
  out.reserve(static_cast<std::size_t>(design.num_rounds()));
  const RMat g = all_gains(design, x);
  for (Eigen::Index t = 0; t < design.num_rounds(); ++t) out.push_back(sample_categorical(softmax(g.col(t), tau), rng));
  return out;
}

/// Hard-decision PMI and CQI for every round of a design.
struct HardFeedback {
  std::vector<std::size_t> pmis;
  std::vector<std::optional<float>> cqis;
};

template <typename Scalar, typename Derived>
HardFeedback simulate_hard_feedback(const MeasurementDesign<Scalar>& design, const Eigen::MatrixBase<Derived>& h) {
  HardFeedback fb;
  for (Eigen::Index t = 0; t < design.num_rounds(); ++t) {
    const auto i = hard_pmi(design, t, h);
    fb.pmis.push_back(i);
    fb.cqis.emplace_back(cqi(design, t, i, h));
  }
  return fb;
}

}  // namespace pmi

#endif  // PMI_MODEL_HPP
