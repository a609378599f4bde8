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

#include "pmi/experiments.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

#include "pmi/baselines.hpp"
#include "pmi/crb.hpp"
#include "pmi/designs.hpp"
#include "pmi/likelihood.hpp"
#include "pmi/metrics.hpp"

namespace pmi {

// ---------------------------------------------------------------------------
// Tables and fitting

CsvTable results_table(const std::vector<ResultRow>& rows) {
  CsvTable t({"method", "setting", "T", "trial", "seed", "metric", "value", "flag"});
  for (const auto& r : rows)
    t.add_row({r.method, r.setting, std::to_string(r.rounds), std::to_string(r.trial), std::to_string(r.seed), r.metric,
               format_double(r.value), r.flag});
  return t;
}

CsvTable summary_table(const std::vector<ResultRow>& rows) {
  using Key = std::tuple<std::string, std::string, long, std::string>;
  std::vector<Key> order;
  std::map<Key, std::vector<double>> groups;
  for (const auto& r : rows) {
    if (r.flag == "skipped" || !std::isfinite(r.value)) continue;
    Key k{r.method, r.setting, r.rounds, r.metric};
    auto [it, inserted] = groups.try_emplace(k);
    if (inserted) order.push_back(k);
    it->second.push_back(r.value);
  }
  CsvTable t({"method", "setting", "T", "metric", "mean", "stderr", "count"});
  for (const auto& k : order) {
    const auto& v = groups[k];
    const double n = static_cast<double>(v.size());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double se = v.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
    t.add_row({std::get<0>(k), std::get<1>(k), std::to_string(std::get<2>(k)), std::get<3>(k), format_double(mean),
               format_double(se), std::to_string(v.size())});
  }
  return t;
}

void write_outputs(const ExperimentOutput& out, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  results_table(out.rows).write((base / "results.csv").string());
  out.summary.write((base / "summary.csv").string());
  CsvTable timing({"task", "seconds"});
  for (std::size_t i = 0; i < out.task_seconds.size(); ++i)
    timing.add_row({std::to_string(i), format_double(out.task_seconds[i])});
  timing.write((base / "timing.csv").string());
  if (!out.fit.empty()) {
    std::ofstream f(base / "fit.txt", std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write fit.txt in '" + dir + "'");
    f << out.fit;
  }
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, "loglog_slope: need at least two points");
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    require(x[i] > 0.0 && y[i] > 0.0, "loglog_slope: values must be positive");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  require(sxx > 0.0, "loglog_slope: x values must not all coincide");
  return sxy / sxx;
}

double fit_inverse(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && !x.empty(), "fit_inverse: need at least one point");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += y[i] / x[i];
    den += 1.0 / (x[i] * x[i]);
  }
  return num / den;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// FNV-1a, used to derive stable per-method random streams.
std::uint64_t name_hash(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::vector<ResultRow> flatten(std::vector<std::vector<ResultRow>>& parts) {
  std::vector<ResultRow> rows;
  for (auto& p : parts) std::move(p.begin(), p.end(), std::back_inserter(rows));
  return rows;
}

// ---------------------------------------------------------------------------
// CRB experiment

struct CrbTask {
  double mse = 0.0;
  double crb = 0.0;
  int iterations = 0;
  bool deficit = false;
  std::uint64_t seed = 0;
  double seconds = 0.0;
};

}  // namespace

ExperimentOutput run_crb_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  ExperimentOutput out;
  if (!cfg.dataset.empty()) out.warnings.push_back("crb experiment is synthetic; dataset path ignored");
  require(cfg.r == 1, "crb experiment: single-stream only");
  const Codebook<cd> codebook = dft_codebook(cfg.p);
  require(cfg.n == 0 || cfg.n == codebook.size(), "crb experiment: N must equal p for the DFT codebook");
  const double radius = cfg.radius.value_or(10.0);
  const std::size_t n_t = cfg.rounds.size();
  const std::size_t n_tasks = static_cast<std::size_t>(cfg.trials) * n_t;
  std::vector<CrbTask> tasks(n_tasks);

  MleConfig<cd> mc;
  mc.max_iters = static_cast<int>(cfg.max_iters);
  mc.rel_tol = cfg.rel_tol;
  mc.init = parse_mle_init(cfg.mle_init);

  parallel_for(n_tasks, cfg.threads, [&](std::size_t idx) {
    const auto t0 = Clock::now();
    const std::size_t trial = idx / n_t, ti = idx % n_t;
    Rng h_rng(stream_seed(cfg.seed, trial));
    CVec h = gaussian_matrix<cd>(cfg.d, 1, h_rng).col(0);
    h /= h.norm();
    const std::uint64_t seed = stream_seed(cfg.seed ^ 0x5eedc4b0ull, idx);
    Rng rng(seed);
    const long t_count = cfg.rounds[ti];
    std::vector<CMat> qs;
    qs.reserve(static_cast<std::size_t>(t_count));
    for (long t = 0; t < t_count; ++t) qs.push_back(haar_stiefel<cd>(cfg.d, cfg.p, rng));
    MeasurementDesign<cd> design(codebook, std::move(qs));
    auto pmis = simulate_softmax_feedback(design, h, cfg.tau, rng);
    const EstimationProblem<cd> problem(design, std::move(pmis), cfg.tau, radius);
    MleConfig<cd> local = mc;
    local.seed = stream_seed(seed, 1);
    const auto res = solve_mle(problem, local);
    const auto crb = crb_trace(fisher(design, h, cfg.tau));
    CrbTask& task = tasks[idx];
    task.mse = phase_aligned_mse<cd>(res.x.col(0), h);
    task.crb = crb.trace;
    task.deficit = crb.identifiability_deficit;
    task.iterations = res.iterations;
    task.seed = seed;
    task.seconds = seconds_since(t0);
  });

  std::vector<double> ts, mse_mean, mse_se, crb_mean;
  for (std::size_t ti = 0; ti < n_t; ++ti) {
    double sm = 0.0, sm2 = 0.0, sc = 0.0;
    for (long trial = 0; trial < cfg.trials; ++trial) {
      const auto& task = tasks[static_cast<std::size_t>(trial) * n_t + ti];
      sm += task.mse;
      sm2 += task.mse * task.mse;
      sc += task.crb;
    }
    const double n = static_cast<double>(cfg.trials);
    const double m = sm / n;
    ts.push_back(static_cast<double>(cfg.rounds[ti]));
    mse_mean.push_back(m);
    mse_se.push_back(cfg.trials > 1 ? std::sqrt(std::max(0.0, (sm2 / n - m * m) * n / (n - 1.0)) / n) : 0.0);
    crb_mean.push_back(sc / n);
  }

  for (long trial = 0; trial < cfg.trials; ++trial)
    for (std::size_t ti = 0; ti < n_t; ++ti) {
      const std::size_t idx = static_cast<std::size_t>(trial) * n_t + ti;
      const auto& task = tasks[idx];
      const std::string flag = task.deficit ? "degenerate" : "";
      out.rows.push_back({"mle", "", cfg.rounds[ti], trial, task.seed, "mse", task.mse, ""});
      out.rows.push_back({"mle", "", cfg.rounds[ti], trial, task.seed, "iterations",
                          static_cast<double>(task.iterations), ""});
      out.rows.push_back({"crb", "", cfg.rounds[ti], trial, task.seed, "crb", task.crb, flag});
      out.task_seconds.push_back(task.seconds);
    }

  CsvTable summary({"T", "mse", "mse_stderr", "crb", "mse_over_crb"});
  for (std::size_t ti = 0; ti < n_t; ++ti)
    summary.add_row({std::to_string(cfg.rounds[ti]), format_double(mse_mean[ti]), format_double(mse_se[ti]),
                     format_double(crb_mean[ti]), format_double(mse_mean[ti] / crb_mean[ti])});
  out.summary = std::move(summary);

  std::ostringstream fit;
  fit << "c " << format_double(fit_inverse(ts, crb_mean)) << "\n";
  if (n_t >= 2) fit << "mse_slope " << format_double(loglog_slope(ts, mse_mean)) << "\n";
  fit << "mse_over_crb_at_max_T " << format_double(mse_mean.back() / crb_mean.back()) << "\n";
  out.fit = fit.str();
  return out;
}

// ---------------------------------------------------------------------------
// FDD-style experiments

namespace {

struct FddSample {
  CMat h;
  CMat sigma;
  CMat basis;  // top-k uplink eigenvectors
  std::vector<CMat> qs;
  std::uint64_t seed = 0;
  std::vector<std::size_t> pmis;
  std::vector<std::optional<float>> cqis;
};

struct FddSetup {
  Codebook<cd> codebook;
  const ChannelDataset* dataset = nullptr;
  long d = 0, n_r = 0, samples = 0, t_max = 0;
};

Codebook<cd> fdd_codebook(const ExperimentConfig& cfg) {
  Codebook<cd> cb;
  if (cfg.r == 1) cb = dft_codebook(cfg.p);
  else if (cfg.r == 2) cb = dft_pair_codebook(cfg.p);
  else throw ArgumentError("fdd experiment: r must be 1 or 2");
  require(cfg.n == 0 || cfg.n == cb.size(), "fdd experiment: N does not match the codebook for this p and r");
  return cb;
}

FddSetup fdd_setup(const ExperimentConfig& cfg, const ChannelDataset* ds, ExperimentOutput& out) {
  FddSetup s;
  s.codebook = fdd_codebook(cfg);
  s.dataset = ds;
  s.d = cfg.d;
  s.n_r = cfg.n_r;
  s.samples = cfg.samples;
  if (ds) {
    if (ds->d != cfg.d || ds->n_r != cfg.n_r)
      out.warnings.push_back("dataset dimensions override configured d and N_r");
    s.d = ds->d;
    s.n_r = ds->n_r;
    require(ds->size() >= 1, "dataset has no samples");
    if (static_cast<long>(ds->size()) < cfg.samples) {
      out.warnings.push_back("dataset has fewer samples than requested; using all " + std::to_string(ds->size()));
      s.samples = static_cast<long>(ds->size());
    }
    if (!ds->has_covariance())
      out.warnings.push_back("dataset has no uplink covariance; using the downlink Gram matrix plus a noise floor");
  }
  require(cfg.p <= s.d && cfg.k <= s.d, "fdd experiment: p and k must not exceed d");
  s.t_max = *std::max_element(cfg.rounds.begin(), cfg.rounds.end());
  return s;
}

FddSample make_sample(const ExperimentConfig& cfg, const FddSetup& setup, long index) {
  FddSample smp;
  smp.seed = stream_seed(cfg.seed, static_cast<std::uint64_t>(index));
  Rng rng(smp.seed);
  if (setup.dataset) {
    smp.h = setup.dataset->channels[static_cast<std::size_t>(index)];
    if (setup.dataset->has_covariance()) {
      smp.sigma = setup.dataset->covariances[static_cast<std::size_t>(index)];
    } else {
      smp.sigma = smp.h * smp.h.adjoint();
      const double floor = 1e-3 * smp.sigma.trace().real() / static_cast<double>(setup.d);
      smp.sigma += floor * CMat::Identity(setup.d, setup.d);
    }
    require(smp.h.norm() > 0.0, "dataset channel " + std::to_string(index) + " is zero");
  } else {
    auto ch = synthetic_channel(setup.d, setup.n_r, static_cast<int>(cfg.paths), rng);
    smp.h = std::move(ch.h);
    smp.sigma = std::move(ch.sigma_ul);
  }
  smp.basis = top_eigvecs(smp.sigma, cfg.k);
  if (cfg.p == 8) smp.qs.push_back(type1_q1(smp.sigma));
  else smp.qs.push_back(top_eigvecs(smp.sigma, cfg.p));
  for (long t = 1; t < setup.t_max; ++t) {
    if (cfg.scheme == "structured") smp.qs.push_back(structured_q(smp.sigma, cfg.p, rng));
    else smp.qs.push_back(haar_stiefel<cd>(setup.d, cfg.p, rng));
  }
  const MeasurementDesign<cd> full(setup.codebook, smp.qs);
  auto fb = simulate_hard_feedback(full, smp.h);
  smp.pmis = std::move(fb.pmis);
  smp.cqis = std::move(fb.cqis);
  return smp;
}

struct MethodSpec {
  std::string method;   // name in the method list
  std::string setting;  // ablation label
  std::string init;     // for mle / subspace-mle
  double tau = 1.0;
};

EstimationProblem<cd> prefix_problem(const FddSample& smp, const Codebook<cd>& cb, long t, double tau,
                                     double radius) {
  const std::size_t n = static_cast<std::size_t>(t);
  MeasurementDesign<cd> design(cb, std::vector<CMat>(smp.qs.begin(), smp.qs.begin() + t));
  return EstimationProblem<cd>(std::move(design), std::vector<std::size_t>(smp.pmis.begin(), smp.pmis.begin() + n), tau,
                               radius, std::vector<std::optional<float>>(smp.cqis.begin(), smp.cqis.begin() + n));
}

struct MethodOutcome {
  CMat x;
  std::string flag;
  int iterations = -1;
  bool hit_max = false;
};

MethodOutcome run_method(const ExperimentConfig& cfg, const MethodSpec& spec, const FddSample& smp,
                         const Codebook<cd>& cb, long t) {
  const double radius = cfg.radius.value_or(10.0 * std::sqrt(static_cast<double>(cfg.r)));
  const auto problem = prefix_problem(smp, cb, t, spec.tau, radius);
  const std::uint64_t method_seed = stream_seed(smp.seed ^ name_hash(spec.method + "/" + spec.init), static_cast<std::uint64_t>(t));
  MethodOutcome o;
  if (spec.method == "two-stage") {
    o.x = problem.design().block(0, static_cast<Eigen::Index>(problem.pmi(0)));
  } else if (spec.method == "spectral") {
    const auto s = spectral_estimate(problem, cfg.r);
    o.x = s.x;
    if (s.degenerate) o.flag = "degenerate";
  } else if (spec.method == "am") {
    BaselineConfig bc;
    bc.max_iters = static_cast<int>(cfg.max_iters);
    bc.rel_tol = cfg.rel_tol;
    bc.lambda_am = cfg.lambda_am.value_or(cfg.r == 1 ? 1.0 : 100.0);
    Rng rng(method_seed);
    AmResult res;
    if (cfg.r == 1) {
      bc.init = BaselineInit::kSpectral;
      res = am_estimate_single(problem, bc, rng);
    } else {
      bc.init = BaselineInit::kRandom;
      res = am_estimate_multi(problem, cfg.r, bc, rng);
    }
    o.x = res.x;
    o.iterations = res.iterations;
    if (res.singular) o.flag = "singular";
  } else if (spec.method == "subspace-pr") {
    BaselineConfig bc;
    bc.max_iters = static_cast<int>(cfg.max_iters);
    bc.rel_tol = cfg.rel_tol;
    bc.pr_variant = PrVariant::kBestOfBoth;
    const auto res = subspace_pr_estimate(problem, smp.basis, cfg.r, bc);
    o.x = res.x;
    o.iterations = res.iterations;
    if (res.degenerate) o.flag = "degenerate";
  } else if (spec.method == "mle" || spec.method == "subspace-mle") {
    MleConfig<cd> mc;
    mc.max_iters = static_cast<int>(cfg.max_iters);
    mc.rel_tol = cfg.rel_tol;
    mc.init = parse_mle_init(spec.init);
    mc.seed = method_seed;
    std::optional<SubspacePrior<cd>> prior;
    if (spec.method == "subspace-mle") prior = SubspacePrior<cd>{smp.basis};
    const auto res = solve_mle(problem, mc, prior);
    o.x = res.x;
    o.iterations = res.iterations;
    o.hit_max = res.stop == StopReason::kMaxIters;
  } else {
    throw ArgumentError("unknown method '" + spec.method + "'");
  }
  return o;
}

std::vector<MethodSpec> fdd_specs(const ExperimentConfig& cfg) {
  std::vector<MethodSpec> specs;
  for (const auto& m : cfg.methods) {
    MethodSpec s{m, "", "", cfg.tau};
    if (m == "mle") s.init = cfg.mle_init;
    if (m == "subspace-mle") s.init = cfg.subspace_init;
    specs.push_back(s);
  }
  return specs;
}

/// Evaluates every method spec at every T for one sample. With `baseline`, an extra
/// "improvement" metric relative to that method is emitted.
std::vector<ResultRow> evaluate_sample(const ExperimentConfig& cfg, const FddSetup& setup, long index,
                                       const std::vector<MethodSpec>& specs, const std::string& baseline,
                                       bool record_iterations) {
  const FddSample smp = make_sample(cfg, setup, index);
  std::vector<ResultRow> rows;
  for (long t : cfg.rounds) {
    double base_bp = std::numeric_limits<double>::quiet_NaN();
    for (const auto& spec : specs) {
      if (spec.method == "two-stage" && t != 1) continue;
      const MethodOutcome o = run_method(cfg, spec, smp, setup.codebook, t);
      const auto bp = beam_precision<cd>(o.x, smp.h);
      std::string flag = o.flag;
      if (bp.degenerate && flag.empty()) flag = "degenerate";
      rows.push_back({spec.method, spec.setting, t, index, smp.seed, "beam_precision", bp.value, flag});
      if (spec.method == baseline) base_bp = bp.value;
      else if (!baseline.empty())
        rows.push_back({spec.method, spec.setting, t, index, smp.seed, "improvement", bp.value - base_bp, flag});
      if (record_iterations && o.iterations >= 0) {
        rows.push_back({spec.method, spec.setting, t, index, smp.seed, "iterations", static_cast<double>(o.iterations), ""});
        rows.push_back({spec.method, spec.setting, t, index, smp.seed, "hit_max_iters", o.hit_max ? 1.0 : 0.0, ""});
      }
    }
  }
  return rows;
}

ExperimentOutput run_fdd_like(const ExperimentConfig& cfg, const std::vector<MethodSpec>& specs,
                              const std::string& baseline, bool record_iterations) {
  ExperimentOutput out;
  std::optional<ChannelDataset> ds;
  if (!cfg.dataset.empty()) ds = read_dataset(cfg.dataset);
  const FddSetup setup = fdd_setup(cfg, ds ? &*ds : nullptr, out);
  std::vector<std::vector<ResultRow>> parts(static_cast<std::size_t>(setup.samples));
  out.task_seconds.assign(parts.size(), 0.0);
  parallel_for(parts.size(), cfg.threads, [&](std::size_t i) {
    const auto t0 = Clock::now();
    parts[i] = evaluate_sample(cfg, setup, static_cast<long>(i), specs, baseline, record_iterations);
    out.task_seconds[i] = seconds_since(t0);
  });
  out.rows = flatten(parts);
  out.summary = summary_table(out.rows);
  return out;
}

}  // namespace

ExperimentOutput run_fdd_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  require(!cfg.methods.empty(), "fdd experiment: method list is empty");
  return run_fdd_like(cfg, fdd_specs(cfg), "", false);
}

ExperimentOutput run_ablation(const ExperimentConfig& cfg) {
  validate(cfg);
  std::vector<MethodSpec> specs{{"spectral", "", "", cfg.tau}};
  if (cfg.experiment == "ablate-tau") {
    for (double tau : cfg.tau_grid)
      specs.push_back({"subspace-mle", "tau=" + format_double(tau), cfg.subspace_init, tau});
  } else if (cfg.experiment == "ablate-init") {
    for (const auto& init : cfg.inits) specs.push_back({"subspace-mle", "init=" + init, init, cfg.tau});
  } else {
    throw ArgumentError("run_ablation: experiment must be ablate-tau or ablate-init");
  }
  return run_fdd_like(cfg, specs, "spectral", true);
}

// ---------------------------------------------------------------------------
// Excess-risk rate

ExcessRiskCurve run_excess_risk(const ExperimentConfig& cfg) {
  require(cfg.r == 1, "excess risk: single-stream only");
  require(cfg.n == 0 || cfg.n == cfg.p, "excess risk: identity codebook has N = p");
  const Codebook<double> codebook = identity_codebook(cfg.p);
  const double radius = cfg.radius.value_or(3.0);
  Rng h_rng(stream_seed(cfg.seed, 0x4a11ull));
  RVec h = gaussian_matrix<double>(cfg.d, 1, h_rng).col(0);
  h /= h.norm();
  const std::size_t n_t = cfg.rounds.size();
  const std::size_t n_tasks = static_cast<std::size_t>(cfg.trials) * n_t;
  std::vector<double> risk(n_tasks);
  MleConfig<double> mc;
  mc.max_iters = static_cast<int>(cfg.max_iters);
  mc.rel_tol = cfg.rel_tol;
  mc.init = parse_mle_init(cfg.mle_init);
  parallel_for(n_tasks, cfg.threads, [&](std::size_t idx) {
    Rng rng(stream_seed(cfg.seed ^ 0x7215c0deull, idx));
    const long t_count = cfg.rounds[idx % n_t];
    std::vector<RMat> qs;
    for (long t = 0; t < t_count; ++t) qs.push_back(haar_stiefel<double>(cfg.d, cfg.p, rng));
    MeasurementDesign<double> design(codebook, std::move(qs));
    auto pmis = simulate_softmax_feedback(design, h, cfg.tau, rng);
    const EstimationProblem<double> problem(design, std::move(pmis), cfg.tau, radius);
    MleConfig<double> local = mc;
    local.seed = stream_seed(cfg.seed, idx + 1);
    const auto res = solve_mle(problem, local);
    risk[idx] = population_excess_risk(design, h, res.x, cfg.tau);
  });
  ExcessRiskCurve curve;
  std::vector<double> ts;
  for (std::size_t ti = 0; ti < n_t; ++ti) {
    double s = 0.0, s2 = 0.0;
    for (long trial = 0; trial < cfg.trials; ++trial) {
      const double v = risk[static_cast<std::size_t>(trial) * n_t + ti];
      s += v;
      s2 += v * v;
    }
    const double n = static_cast<double>(cfg.trials);
    const double m = s / n;
    curve.rounds.push_back(cfg.rounds[ti]);
    curve.mean_risk.push_back(m);
    curve.stderr_risk.push_back(cfg.trials > 1 ? std::sqrt(std::max(0.0, (s2 / n - m * m) * n / (n - 1.0)) / n) : 0.0);
    ts.push_back(static_cast<double>(cfg.rounds[ti]));
  }
  if (n_t >= 2) curve.slope = loglog_slope(ts, curve.mean_risk);
  return curve;
}

ChannelDataset make_synthetic_dataset(long d, long n_r, long paths, long samples, std::uint64_t seed) {
  require(samples >= 1, "make_synthetic_dataset: samples must be >= 1");
  ChannelDataset ds;
  ds.d = d;
  ds.n_r = n_r;
  for (long s = 0; s < samples; ++s) {
    Rng rng(stream_seed(seed, static_cast<std::uint64_t>(s)));
    auto ch = synthetic_channel(d, n_r, static_cast<int>(paths), rng);
    ds.channels.push_back(std::move(ch.h));
    ds.covariances.push_back(std::move(ch.sigma_ul));
  }
  return ds;
}

}  // namespace pmi
