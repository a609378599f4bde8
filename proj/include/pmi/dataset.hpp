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

// Binary channel dataset format (little-endian):
//
//   magic "PMICH01\0" (8 bytes)
//   u32 version = 1, u32 d, u32 N_r, u32 M, u8 has_covariance
//   M channel blocks of d * N_r complex values, column-major, as (re, im) f64
//   if has_covariance: M full d x d Hermitian blocks, column-major

#ifndef PMI_DATASET_HPP
#define PMI_DATASET_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "pmi/types.hpp"

namespace pmi {

struct ChannelDataset {
  Eigen::Index d = 0;
  Eigen::Index n_r = 0;
  std::vector<CMat> channels;     // M matrices, d x N_r
  std::vector<CMat> covariances;  // empty, or M matrices d x d

  std::size_t size() const { return channels.size(); }
  bool has_covariance() const { return !covariances.empty(); }
};

inline constexpr char kDatasetMagic[8] = {'P', 'M', 'I', 'C', 'H', '0', '1', '\0'};
inline constexpr std::uint32_t kDatasetVersion = 1;

std::vector<std::uint8_t> encode_dataset(const ChannelDataset& data);
ChannelDataset decode_dataset(const std::vector<std::uint8_t>& bytes);

void write_dataset(const std::string& path, const ChannelDataset& data);
ChannelDataset read_dataset(const std::string& path);

}  // namespace pmi

#endif  // PMI_DATASET_HPP
