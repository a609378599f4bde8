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

#include "pmi/config.hpp"

#include <charconv>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pmi/types.hpp"

namespace pmi {

namespace {

const std::set<std::string> kExperiments = {"crb", "fdd", "ablate-tau", "ablate-init", "verify-theory"};
const std::set<std::string> kMethods = {"two-stage", "spectral", "am", "subspace-pr", "mle", "subspace-mle"};
const std::set<std::string> kInits = {"identity", "random", "spectral"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

ExperimentConfig default_config(const std::string& experiment) {
  require(kExperiments.count(experiment) > 0, "unknown experiment '" + experiment + "'");
  ExperimentConfig c;
  c.experiment = experiment;
  if (experiment == "crb") {
    c.d = 16;
    c.p = 4;
    c.n = 4;
    c.tau = 0.05;
    c.radius = 10.0;
    c.rounds = {2000, 5000, 10000};
    c.trials = 100;
    c.max_iters = 2000;
    c.rel_tol = 1e-8;
    c.mle_init = "spectral";
  } else if (experiment == "verify-theory") {
    c.d = 4;
    c.p = 3;
    c.n = 3;
    c.tau = 0.25;
    c.radius = 3.0;
    c.rounds = {250, 500, 1000, 2000, 4000};
    c.trials = 100;
    c.max_iters = 5000;
    c.rel_tol = 1e-10;
    c.mle_init = "spectral";
  } else {
    c.d = 32;
    c.p = 8;
    c.n_r = 4;
    c.r = 1;
    c.k = 8;
    c.tau = 1.0;
    c.rounds = {1, 5, 10, 20};
    c.samples = 100;
    c.scheme = "structured";
    c.methods = {"two-stage", "spectral", "am", "subspace-pr", "mle", "subspace-mle"};
    c.max_iters = 100;
    c.rel_tol = 1e-3;
    c.mle_init = "spectral";
    c.subspace_init = "identity";
    if (experiment == "ablate-tau") c.tau_grid = {0.1, 0.3, 1.0, 3.0, 10.0};
    if (experiment == "ablate-init") c.inits = {"identity", "random", "spectral"};
  }
  return c;
}

void apply_json(ExperimentConfig& c, const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ArgumentError(std::string("config: invalid JSON: ") + e.what());
  }
  require(j.is_object(), "config: top-level JSON value must be an object");
  // experiment first, so the remaining keys override its defaults
  if (j.contains("experiment")) {
    const auto out = c.out;
    c = default_config(j.at("experiment").get<std::string>());
    c.out = out;
  }
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& key = it.key();
      const auto& v = it.value();
      if (key == "experiment") continue;
      else if (key == "d") c.d = v.get<long>();
      else if (key == "p") c.p = v.get<long>();
      else if (key == "N" || key == "n") c.n = v.get<long>();
      else if (key == "N_r" || key == "n_r") c.n_r = v.get<long>();
      else if (key == "r") c.r = v.get<long>();
      else if (key == "k") c.k = v.get<long>();
      else if (key == "tau") c.tau = v.get<double>();
      else if (key == "radius") c.radius = v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
      else if (key == "rounds") c.rounds = v.get<std::vector<long>>();
      else if (key == "trials") c.trials = v.get<long>();
      else if (key == "samples") c.samples = v.get<long>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "threads") c.threads = v.get<long>();
      else if (key == "scheme") c.scheme = v.get<std::string>();
      else if (key == "methods") c.methods = v.get<std::vector<std::string>>();
      else if (key == "dataset") c.dataset = v.get<std::string>();
      else if (key == "out") c.out = v.get<std::string>();
      else if (key == "paths") c.paths = v.get<long>();
      else if (key == "max_iters") c.max_iters = v.get<long>();
      else if (key == "rel_tol") c.rel_tol = v.get<double>();
      else if (key == "mle_init") c.mle_init = v.get<std::string>();
      else if (key == "subspace_init") c.subspace_init = v.get<std::string>();
      else if (key == "lambda_am") c.lambda_am = v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
      else if (key == "tau_grid") c.tau_grid = v.get<std::vector<double>>();
      else if (key == "inits") c.inits = v.get<std::vector<std::string>>();
      else throw ArgumentError("config: unknown key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("config: wrong value type: ") + e.what());
  }
}

void apply_json_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open config '" + path + "'");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  apply_json(cfg, text);
}

std::string to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["experiment"] = c.experiment;
  j["d"] = c.d;
  j["p"] = c.p;
  j["N"] = c.n;
  j["N_r"] = c.n_r;
  j["r"] = c.r;
  j["k"] = c.k;
  j["tau"] = c.tau;
  j["radius"] = c.radius ? nlohmann::json(*c.radius) : nlohmann::json(nullptr);
  j["rounds"] = c.rounds;
  j["trials"] = c.trials;
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  j["scheme"] = c.scheme;
  j["methods"] = c.methods;
  j["dataset"] = c.dataset;
  j["paths"] = c.paths;
  j["max_iters"] = c.max_iters;
  j["rel_tol"] = c.rel_tol;
  j["mle_init"] = c.mle_init;
  j["subspace_init"] = c.subspace_init;
  j["lambda_am"] = c.lambda_am ? nlohmann::json(*c.lambda_am) : nlohmann::json(nullptr);
  j["tau_grid"] = c.tau_grid;
  j["inits"] = c.inits;
  return j.dump(2);
}

void validate(const ExperimentConfig& c) {
  require(kExperiments.count(c.experiment) > 0, "unknown experiment '" + c.experiment + "'");
  require(c.d >= 1 && c.p >= 1 && c.p <= c.d, "config: need 1 <= p <= d");
  require(c.n >= 0, "config: N must be >= 0");
  require(c.n_r >= 1, "config: N_r must be >= 1");
  require(c.r >= 1 && c.r <= c.p, "config: need 1 <= r <= p");
  const bool fdd_like = c.experiment == "fdd" || c.experiment == "ablate-tau" || c.experiment == "ablate-init";
  if (fdd_like) require(c.k >= c.r && c.k <= c.d, "config: need r <= k <= d");
  require(c.tau > 0.0, "config: tau must be positive");
  require(!c.radius || *c.radius > 0.0, "config: radius must be positive");
  require(!c.rounds.empty(), "config: rounds must not be empty");
  for (long t : c.rounds) require(t >= 1, "config: every T must be >= 1");
  require(c.trials >= 1, "config: trials must be >= 1");
  require(c.samples >= 1, "config: samples must be >= 1");
  require(c.threads >= 0, "config: threads must be >= 0");
  require(c.scheme == "structured" || c.scheme == "random", "config: scheme must be 'structured' or 'random'");
  for (const auto& m : c.methods) require(kMethods.count(m) > 0, "config: unknown method '" + m + "'");
  require(c.paths >= 1, "config: paths must be >= 1");
  require(c.max_iters >= 1, "config: max_iters must be >= 1");
  require(c.rel_tol > 0.0, "config: rel_tol must be positive");
  require(kInits.count(c.mle_init) > 0, "config: unknown mle_init '" + c.mle_init + "'");
  require(kInits.count(c.subspace_init) > 0, "config: unknown subspace_init '" + c.subspace_init + "'");
  for (const auto& i : c.inits) require(kInits.count(i) > 0, "config: unknown init '" + i + "'");
  for (double t : c.tau_grid) require(t > 0.0, "config: tau grid values must be positive");
  require(!c.lambda_am || *c.lambda_am >= 0.0, "config: lambda_am must be nonnegative");
  if (c.experiment == "ablate-tau") require(!c.tau_grid.empty(), "config: ablate-tau needs a tau grid");
  if (c.experiment == "ablate-init") require(!c.inits.empty(), "config: ablate-init needs an init list");
}

namespace {

template <typename T>
std::vector<T> parse_numbers(const std::string& text, const char* what) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    T v{};
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    require(res.ec == std::errc() && res.ptr == item.data() + item.size() && !item.empty(),
            std::string("cannot parse '") + item + "' as " + what);
    out.push_back(v);
  }
  require(!out.empty(), std::string("empty ") + what + " list");
  return out;
}

}  // namespace

std::vector<long> parse_long_list(const std::string& text) { return parse_numbers<long>(text, "integer"); }

std::vector<double> parse_double_list(const std::string& text) { return parse_numbers<double>(text, "number"); }

std::vector<std::string> parse_string_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace pmi
