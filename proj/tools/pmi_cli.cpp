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

// pmi_cli: experiment driver and dataset utilities.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "pmi/config.hpp"
#include "pmi/dataset.hpp"
#include "pmi/experiments.hpp"
#include "pmi/types.hpp"

namespace {

struct Overrides {
  std::string config;
  std::string experiment;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<double> tau;
  std::string rounds;
  std::optional<long> trials;
  std::optional<long> samples;
  std::optional<long> threads;
  std::string dataset;
  std::string scheme;
  std::optional<long> r;
  std::string methods;
  std::string tau_grid;
  std::string inits;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON config file")->check(CLI::ExistingFile);
  cmd->add_option("--experiment", o.experiment, "experiment kind (overrides the subcommand default)");
  cmd->add_option("--seed", o.seed, "base random seed");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--tau", o.tau, "softmax temperature");
  cmd->add_option("--rounds", o.rounds, "comma-separated T values, e.g. 1,5,10,20");
  cmd->add_option("--trials", o.trials, "Monte-Carlo trials");
  cmd->add_option("--samples", o.samples, "channel samples (FDD experiments)");
  cmd->add_option("--threads", o.threads, "worker threads (0 = all cores)");
  cmd->add_option("--dataset", o.dataset, "channel dataset file");
  cmd->add_option("--scheme", o.scheme, "design scheme: structured or random");
  cmd->add_option("--streams", o.r, "streams per codeword (r)");
  cmd->add_option("--methods", o.methods, "comma-separated method list");
  cmd->add_option("--tau-grid", o.tau_grid, "comma-separated temperature grid (ablate-tau)");
  cmd->add_option("--inits", o.inits, "comma-separated initializations (ablate-init)");
}

pmi::ExperimentConfig build_config(const std::string& kind, const Overrides& o) {
  pmi::ExperimentConfig cfg = pmi::default_config(o.experiment.empty() ? kind : o.experiment);
  if (!o.config.empty()) pmi::apply_json_file(cfg, o.config);
  if (!o.experiment.empty() && cfg.experiment != o.experiment) {
    const auto out = cfg.out;
    cfg = pmi::default_config(o.experiment);
    if (!o.config.empty()) pmi::apply_json_file(cfg, o.config);
    cfg.experiment = o.experiment;
    cfg.out = out;
  }
  if (o.seed) cfg.seed = *o.seed;
  if (!o.out.empty()) cfg.out = o.out;
  if (o.tau) cfg.tau = *o.tau;
  if (!o.rounds.empty()) cfg.rounds = pmi::parse_long_list(o.rounds);
  if (o.trials) cfg.trials = *o.trials;
  if (o.samples) cfg.samples = *o.samples;
  if (o.threads) cfg.threads = *o.threads;
  if (!o.dataset.empty()) cfg.dataset = o.dataset;
  if (!o.scheme.empty()) cfg.scheme = o.scheme;
  if (o.r) cfg.r = *o.r;
  if (!o.methods.empty()) cfg.methods = pmi::parse_string_list(o.methods);
  if (!o.tau_grid.empty()) cfg.tau_grid = pmi::parse_double_list(o.tau_grid);
  if (!o.inits.empty()) cfg.inits = pmi::parse_string_list(o.inits);
  pmi::validate(cfg);
  return cfg;
}

void report(const pmi::ExperimentOutput& out, const pmi::ExperimentConfig& cfg) {
  for (const auto& w : out.warnings) std::cerr << "warning: " << w << "\n";
  pmi::write_outputs(out, cfg.out);
  {
    std::ofstream f(std::filesystem::path(cfg.out) / "config.json");
    f << pmi::to_json(cfg) << "\n";
  }
  std::cout << out.summary.str();
  if (!out.fit.empty()) std::cout << out.fit;
  std::cout << "wrote " << cfg.out << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Channel estimation from PMI feedback"};
  app.require_subcommand(1);

  struct Sub {
    std::string name;
    std::string kind;
    std::string help;
  };
  const std::vector<Sub> experiments = {
      {"crb-experiment", "crb", "MLE phase-aligned MSE against the Cramer-Rao bound"},
      {"fdd-experiment", "fdd", "beam precision of all methods against feedback rounds"},
      {"ablate-tau", "ablate-tau", "temperature ablation of the subspace MLE"},
      {"ablate-init", "ablate-init", "initialization ablation of the subspace MLE"},
      {"verify-theory", "verify-theory", "numerical checks of identities, bounds and rates"},
  };
  std::vector<Overrides> overrides(experiments.size());
  std::vector<CLI::App*> cmds;
  for (std::size_t i = 0; i < experiments.size(); ++i) {
    auto* cmd = app.add_subcommand(experiments[i].name, experiments[i].help);
    add_common(cmd, overrides[i]);
    cmds.push_back(cmd);
  }

  std::string make_out;
  long make_d = 32, make_nr = 4, make_paths = 4, make_m = 100;
  std::uint64_t make_seed = 1;
  auto* make = app.add_subcommand("dataset-make", "write a synthetic ray-model dataset");
  make->add_option("--out", make_out, "output file")->required();
  make->add_option("--d", make_d, "transmit antennas");
  make->add_option("--nr", make_nr, "receive antennas");
  make->add_option("--paths", make_paths, "rays per channel");
  make->add_option("--samples", make_m, "number of channels");
  make->add_option("--seed", make_seed, "random seed");

  std::string inspect_path;
  auto* inspect = app.add_subcommand("dataset-inspect", "print a dataset header and basic statistics");
  inspect->add_option("--dataset,path", inspect_path, "dataset file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    for (std::size_t i = 0; i < experiments.size(); ++i) {
      if (!cmds[i]->parsed()) continue;
      const auto cfg = build_config(experiments[i].kind, overrides[i]);
      if (cfg.experiment == "crb") {
        report(pmi::run_crb_experiment(cfg), cfg);
      } else if (cfg.experiment == "fdd") {
        report(pmi::run_fdd_experiment(cfg), cfg);
      } else if (cfg.experiment == "ablate-tau" || cfg.experiment == "ablate-init") {
        report(pmi::run_ablation(cfg), cfg);
      } else {
        const auto rep = pmi::run_theory_verification(cfg);
        report(pmi::theory_output(rep), cfg);
        for (const auto& c : rep.checks) std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << "\n";
        return rep.all_pass() ? 0 : 1;
      }
      return 0;
    }
    if (make->parsed()) {
      const auto ds = pmi::make_synthetic_dataset(make_d, make_nr, make_paths, make_m, make_seed);
      pmi::write_dataset(make_out, ds);
      std::cout << "wrote " << ds.size() << " channels (d=" << ds.d << ", N_r=" << ds.n_r << ") to " << make_out << "\n";
      return 0;
    }
    if (inspect->parsed()) {
      const auto ds = pmi::read_dataset(inspect_path);
      double min_norm = 0.0, max_norm = 0.0;
      for (std::size_t s = 0; s < ds.size(); ++s) {
        const double n = ds.channels[s].norm();
        min_norm = s == 0 ? n : std::min(min_norm, n);
        max_norm = s == 0 ? n : std::max(max_norm, n);
      }
      std::cout << "version " << pmi::kDatasetVersion << "\n"
                << "d " << ds.d << "\n"
                << "N_r " << ds.n_r << "\n"
                << "samples " << ds.size() << "\n"
                << "has_covariance " << (ds.has_covariance() ? 1 : 0) << "\n"
                << "channel_norm_min " << min_norm << "\n"
                << "channel_norm_max " << max_norm << "\n";
      return 0;
    }
  } catch (const pmi::FormatError& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
