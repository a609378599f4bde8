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

#ifndef PMI_TYPES_HPP
#define PMI_TYPES_HPP

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <type_traits>

#include <Eigen/Dense>

namespace pmi {

using cd = std::complex<double>;

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using CVec = Vec<cd>;
using CMat = Mat<cd>;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

template <typename Scalar>
using RealOf = typename Eigen::NumTraits<Scalar>::Real;

template <typename Scalar>
inline constexpr bool is_complex_v = Eigen::NumTraits<Scalar>::IsComplex;

/// All randomness flows through caller-owned engines of this type.
using Rng = std::mt19937_64;

/// Invalid shapes, out-of-range indices, violated preconditions.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Non-finite objective or a solver that cannot make progress.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation that is only defined for real-valued problems was handed a
/// complex one (or vice versa).
class UnsupportedMode : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed or truncated dataset file.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::uint64_t offset)
      : std::runtime_error(what + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::uint64_t offset() const { return offset_; }

 private:
  std::uint64_t offset_;
};

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw ArgumentError(msg);
}

/// Derives an independent 64-bit stream seed from a base seed and a task
/// index (splitmix64 finalizer).
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Standard normal draw in the scalar's field. Complex draws are CN(0, 1):
/// real and imaginary parts each have variance 1/2.
template <typename Scalar>
Scalar standard_normal(Rng& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  if constexpr (is_complex_v<Scalar>) {
    const double re = n01(rng);
    const double im = n01(rng);
    return Scalar(re, im) / std::sqrt(2.0);
  } else {
    return Scalar(n01(rng));
  }
}

template <typename Scalar>
Mat<Scalar> gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Mat<Scalar> g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = standard_normal<Scalar>(rng);
  return g;
}

}  // namespace pmi

#endif  // PMI_TYPES_HPP
