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

// Monte-Carlo drivers and result emission.

#ifndef PMI_EXPERIMENTS_HPP
#define PMI_EXPERIMENTS_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "pmi/config.hpp"
#include "pmi/csv.hpp"
#include "pmi/dataset.hpp"
#include "pmi/types.hpp"

namespace pmi {

struct ResultRow {
  std::string method;
  std::string setting;  // ablation parameter, empty otherwise
  long rounds = 0;
  long trial = 0;
  std::uint64_t seed = 0;
  std::string metric;
  double value = 0.0;
  std::string flag;  // empty, "degenerate", "singular", "skipped"
};

struct ExperimentOutput {
  std::vector<ResultRow> rows;
  CsvTable summary{{"empty"}};
  std::string fit;                    // contents of fit.txt; empty = not written
  std::vector<std::string> warnings;
  std::vector<double> task_seconds;   // wall time per task, written to timing.csv
};

CsvTable results_table(const std::vector<ResultRow>& rows);

/// mean and standard error per (method, setting, T, metric), in first-seen order.
CsvTable summary_table(const std::vector<ResultRow>& rows);

/// results.csv, summary.csv, timing.csv and (if non-empty) fit.txt.
void write_outputs(const ExperimentOutput& out, const std::string& dir);

/// Runs fn(i) for i in [0, n) on up to `threads` workers (0 = hardware
/// concurrency). The first exception thrown is rethrown after all workers stop.
template <typename Fn>
void parallel_for(std::size_t n, long threads, Fn&& fn) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads) : std::thread::hardware_concurrency();
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n || failed.load()) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          failed.store(true);
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Least-squares c in y ~ c / x.
double fit_inverse(const std::vector<double>& x, const std::vector<double>& y);

ExperimentOutput run_crb_experiment(const ExperimentConfig& cfg);
ExperimentOutput run_fdd_experiment(const ExperimentConfig& cfg);
ExperimentOutput run_ablation(const ExperimentConfig& cfg);

struct ExcessRiskCurve {
  std::vector<long> rounds;
  std::vector<double> mean_risk;
  std::vector<double> stderr_risk;
  double slope = 0.0;
};

/// Mean population excess risk of the real-valued MLE against T on Haar
/// designs with an identity codebook (d, p, N, tau, radius from cfg).
ExcessRiskCurve run_excess_risk(const ExperimentConfig& cfg);

struct TheoryCheck {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  std::string relation;  // "<=" or ">=" or "in"
  double upper = 0.0;    // used with "in"
  bool pass = false;
};

struct TheoryReport {
  std::vector<TheoryCheck> checks;
  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const TheoryCheck& c) { return c.pass; });
  }
};

TheoryReport run_theory_verification(const ExperimentConfig& cfg);
ExperimentOutput theory_output(const TheoryReport& report);

/// Synthetic dataset of `samples` ray-model channels with covariances.
ChannelDataset make_synthetic_dataset(long d, long n_r, long paths, long samples, std::uint64_t seed);

}  // namespace pmi

#endif  // PMI_EXPERIMENTS_HPP
