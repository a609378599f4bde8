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

// Experiment configuration: JSON file plus command-line overrides.

#ifndef PMI_CONFIG_HPP
#define PMI_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pmi {

struct ExperimentConfig {
  std::string experiment = "crb";  // crb, fdd, ablate-tau, ablate-init, verify-theory

  long d = 16;
  long p = 4;
  long n = 0;    // codebook size; 0 picks the natural size for p and r
  long n_r = 1;
  long r = 1;
  long k = 8;

  double tau = 0.05;
  std::optional<double> radius;
  std::vector<long> rounds;
  long trials = 100;
  long samples = 100;
  std::uint64_t seed = 1;
  long threads = 0;  // 0 = hardware concurrency

  std::string scheme = "structured";  // structured, random
  std::vector<std::string> methods;
  std::string dataset;
  std::string out = "out";
  long paths = 4;

  long max_iters = 100;
  double rel_tol = 1e-3;
  std::string mle_init = "spectral";
  std::string subspace_init = "identity";
  std::optional<double> lambda_am;

  std::vector<double> tau_grid;
  std::vector<std::string> inits;
};

/// Defaults for one experiment kind.
ExperimentConfig default_config(const std::string& experiment);

/// Overwrites fields present in a JSON object; unknown keys are rejected.
void apply_json(ExperimentConfig& cfg, const std::string& json_text);
void apply_json_file(ExperimentConfig& cfg, const std::string& path);

/// Canonical JSON rendering (sorted keys).
std::string to_json(const ExperimentConfig& cfg);

/// Throws ArgumentError on inconsistent settings.
void validate(const ExperimentConfig& cfg);

std::vector<long> parse_long_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);
std::vector<std::string> parse_string_list(const std::string& text);

}  // namespace pmi

#endif  // PMI_CONFIG_HPP
