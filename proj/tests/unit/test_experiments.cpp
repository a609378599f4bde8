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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <atomic>
#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "pmi/config.hpp"
#include "pmi/csv.hpp"
#include "pmi/dataset.hpp"
#include "pmi/experiments.hpp"

using namespace pmi;
namespace fs = std::filesystem;

namespace {

template <typename T>
void put(std::vector<std::uint8_t>& out, T v) {
  static_assert(std::endian::native == std::endian::little, "fixture assumes a little-endian host");
  const auto* p = reinterpret_cast<const std::uint8_t*>(&v);
  out.insert(out.end(), p, p + sizeof(T));
}

std::vector<std::uint8_t> header(std::uint32_t d, std::uint32_t n_r, std::uint32_t m, std::uint8_t has_cov) {
  std::vector<std::uint8_t> b(kDatasetMagic, kDatasetMagic + 8);
  put<std::uint32_t>(b, 1);
  put(b, d);
  put(b, n_r);
  put(b, m);
  put(b, has_cov);
  return b;
}

std::uint64_t error_offset(const std::vector<std::uint8_t>& bytes) {
  try {
    decode_dataset(bytes);
  } catch (const FormatError& e) {
    return e.offset();
  }
  throw std::logic_error("decode unexpectedly succeeded");
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("pmi_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

/// mean beam precision per (method, T) from a result set.
std::map<std::pair<std::string, long>, std::vector<double>> by_method(const std::vector<ResultRow>& rows) {
  std::map<std::pair<std::string, long>, std::vector<double>> out;
  for (const auto& r : rows)
    if (r.metric == "beam_precision") out[{r.method, r.rounds}].push_back(r.value);
  return out;
}

ExperimentConfig small_fdd() {
  auto cfg = default_config("fdd");
  cfg.d = 16;
  cfg.k = 4;
  cfg.samples = 4;
  cfg.rounds = {1, 3};
  cfg.max_iters = 30;
  cfg.threads = 1;
  return cfg;
}

}  // namespace

TEST_CASE("hand-encoded dataset decodes to the stated entries") {
  auto b = header(2, 1, 1, 0);
  for (double v : {1.5, -2.0, 0.25, 3.0}) put(b, v);
  const auto ds = decode_dataset(b);
  REQUIRE(ds.size() == 1);
  CHECK(ds.d == 2);
  CHECK(ds.n_r == 1);
  CHECK_FALSE(ds.has_covariance());
  CHECK(ds.channels[0](0, 0) == cd(1.5, -2.0));
  CHECK(ds.channels[0](1, 0) == cd(0.25, 3.0));
  CHECK(encode_dataset(ds) == b);
}

TEST_CASE("dataset round trip with covariances is bit exact") {
  const auto ds = make_synthetic_dataset(6, 2, 3, 5, 42);
  const auto bytes = encode_dataset(ds);
  CHECK(bytes.size() == 25 + 5 * (6 * 2 + 6 * 6) * 16);
  const auto back = decode_dataset(bytes);
  REQUIRE(back.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK((back.channels[i] - ds.channels[i]).norm() == 0.0);
    CHECK((back.covariances[i] - ds.covariances[i]).norm() == 0.0);
  }
  const fs::path dir = scratch("dataset");
  write_dataset((dir / "d.bin").string(), ds);
  CHECK(encode_dataset(read_dataset((dir / "d.bin").string())) == bytes);
  CHECK_THROWS(read_dataset((dir / "missing.bin").string()));
}

TEST_CASE("malformed datasets report byte offsets") {
  auto good = header(1, 1, 1, 0);
  put(good, 1.0);
  put(good, 0.0);

  auto bad_magic = good;
  bad_magic[3] = 'X';
  CHECK(error_offset(bad_magic) == 0);

  auto bad_version = good;
  bad_version[8] = 2;
  CHECK(error_offset(bad_version) == 8);

  auto truncated = good;
  truncated.resize(truncated.size() - 3);
  CHECK(error_offset(truncated) == truncated.size());

  CHECK(error_offset(std::vector<std::uint8_t>(good.begin(), good.begin() + 12)) == 12);

  auto trailing = good;
  trailing.push_back(0);
  CHECK(error_offset(trailing) == good.size());

  auto nonfinite = header(1, 1, 1, 0);
  put(nonfinite, std::nan(""));
  put(nonfinite, 0.0);
  CHECK(error_offset(nonfinite) == 25);

  auto bad_flag = good;
  bad_flag[24] = 2;
  CHECK(error_offset(bad_flag) == 24);

  auto bad_cov = header(2, 1, 1, 1);
  for (int k = 0; k < 4; ++k) put(bad_cov, 1.0);
  for (double v : {1.0, 0.0, 5.0, 0.0, 0.0, 0.0, 1.0, 0.0}) put(bad_cov, v);
  CHECK_THROWS_AS(decode_dataset(bad_cov), FormatError);
}

TEST_CASE("doubles format in shortest round-trip form") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 123456789.0}) CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(format_double(-INFINITY) == "-inf");
}

TEST_CASE("CSV tables") {
  CsvTable t({"a", "b"});
  t.add_row({"1", "x"});
  t.add_row({"2", ""});
  CHECK(t.str() == "a,b\n1,x\n2,\n");
  CHECK_THROWS_AS(t.add_row({"1"}), ArgumentError);
  CHECK_THROWS_AS(t.add_row({"1", "a,b"}), ArgumentError);
  CHECK(split_csv_line("1,,x,") == std::vector<std::string>{"1", "", "x", ""});
}

TEST_CASE("config JSON overrides and validation") {
  auto cfg = default_config("crb");
  apply_json(cfg, R"({"d": 8, "tau": 0.1, "rounds": [10, 20], "seed": 7})");
  CHECK(cfg.d == 8);
  CHECK(cfg.tau == 0.1);
  CHECK(cfg.rounds == std::vector<long>{10, 20});
  CHECK(cfg.seed == 7);
  CHECK_THROWS_AS(apply_json(cfg, R"({"colour": 1})"), ArgumentError);
  CHECK_THROWS_AS(apply_json(cfg, R"({"d": "eight"})"), ArgumentError);
  CHECK_THROWS_AS(apply_json(cfg, "{"), ArgumentError);

  auto copy = default_config("fdd");
  apply_json(copy, to_json(cfg));
  CHECK(to_json(copy) == to_json(cfg));

  auto bad = default_config("fdd");
  bad.k = 64;
  CHECK_THROWS_AS(validate(bad), ArgumentError);
  bad = default_config("fdd");
  bad.methods = {"mle", "oracle"};
  CHECK_THROWS_AS(validate(bad), ArgumentError);
  bad = default_config("crb");
  bad.tau = 0.0;
  CHECK_THROWS_AS(validate(bad), ArgumentError);
  CHECK_THROWS_AS(default_config("bogus"), ArgumentError);

  CHECK(parse_long_list("1,5,10") == std::vector<long>{1, 5, 10});
  CHECK(parse_double_list("0.1,3") == std::vector<double>{0.1, 3.0});
  CHECK_THROWS_AS(parse_long_list("1,x"), ArgumentError);
  CHECK_THROWS_AS(parse_long_list(""), ArgumentError);
}

TEST_CASE("fit helpers are exact on noiseless data") {
  const std::vector<double> t{100, 200, 400, 800};
  std::vector<double> y, c;
  for (double v : t) {
    y.push_back(3.0 * std::pow(v, -1.3));
    c.push_back(7.0 / v);
  }
  CHECK(loglog_slope(t, y) == doctest::Approx(-1.3).epsilon(1e-12));
  CHECK(fit_inverse(t, c) == doctest::Approx(7.0).epsilon(1e-12));
  CHECK_THROWS_AS(loglog_slope({1.0}, {1.0}), ArgumentError);
}

TEST_CASE("parallel_for visits each index once and propagates errors") {
  std::vector<std::atomic<int>> hits(100);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
  for (auto& h : hits) CHECK(h.load() == 1);
  CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) {
                    if (i == 7) throw NumericalError("boom");
                  }),
                  NumericalError);
}

TEST_CASE("summary statistics") {
  std::vector<ResultRow> rows{{"m", "", 5, 0, 1, "x", 1.0, ""}, {"m", "", 5, 1, 2, "x", 3.0, ""}};
  const auto s = summary_table(rows);
  REQUIRE(s.rows().size() == 1);
  CHECK(s.rows()[0][4] == "2");
  CHECK(std::stod(s.rows()[0][5]) == doctest::Approx(1.0));
  CHECK(s.rows()[0][6] == "2");
}

TEST_CASE("small CRB experiment") {
  auto cfg = default_config("crb");
  cfg.d = 4;
  cfg.p = 2;
  cfg.n = 2;
  cfg.tau = 0.5;
  cfg.radius = 5.0;
  cfg.rounds = {50, 100};
  cfg.trials = 3;
  cfg.threads = 2;
  const auto out = run_crb_experiment(cfg);
  CHECK(out.summary.header() == std::vector<std::string>{"T", "mse", "mse_stderr", "crb", "mse_over_crb"});
  REQUIRE(out.summary.rows().size() == 2);
  const double crb50 = std::stod(out.summary.rows()[0][3]), crb100 = std::stod(out.summary.rows()[1][3]);
  CHECK(crb50 > crb100);
  CHECK(out.fit.find("c ") == 0);
  CHECK(out.task_seconds.size() == 6);
  cfg.threads = 1;
  CHECK(results_table(run_crb_experiment(cfg).rows).str() == results_table(out.rows).str());

  const fs::path dir = scratch("crb");
  write_outputs(out, dir.string());
  for (const char* f : {"results.csv", "summary.csv", "fit.txt", "timing.csv"}) CHECK(fs::exists(dir / f));
  std::ifstream in(dir / "results.csv");
  std::string first;
  std::getline(in, first);
  CHECK(first == "method,setting,T,trial,seed,metric,value,flag");
}

TEST_CASE("FDD experiment at one round reproduces the two-stage baseline") {
  auto cfg = small_fdd();
  const auto out = run_fdd_experiment(cfg);
  const auto bp = by_method(out.rows);
  const auto& two = bp.at({"two-stage", 1});
  CHECK(bp.count({"two-stage", 3}) == 0);
  for (const char* m : {"spectral", "mle"}) {
    const auto& v = bp.at({m, 1});
    REQUIRE(v.size() == two.size());
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(v[i] - two[i]) < 1e-6);
  }
  for (const auto& [key, vals] : bp)
    for (double v : vals) CHECK((v >= 0.0 && v <= 1.0 + 1e-12));
  cfg.threads = 3;
  CHECK(results_table(run_fdd_experiment(cfg).rows).str() == results_table(out.rows).str());
}

TEST_CASE("FDD experiment reads channels from a dataset file") {
  const fs::path dir = scratch("fdd_dataset");
  write_dataset((dir / "ch.bin").string(), make_synthetic_dataset(16, 2, 4, 3, 9));
  auto cfg = small_fdd();
  cfg.samples = 3;
  cfg.dataset = (dir / "ch.bin").string();
  cfg.methods = {"spectral", "am"};
  const auto out = run_fdd_experiment(cfg);
  CHECK(by_method(out.rows).at({"am", 3}).size() == 3);
}

TEST_CASE("single-point tau ablation matches the plain experiment") {
  auto cfg = small_fdd();
  cfg.experiment = "ablate-tau";
  cfg.tau_grid = {cfg.tau};
  const auto abl = run_ablation(cfg);
  auto plain = small_fdd();
  plain.methods = {"subspace-mle"};
  const auto ref = by_method(run_fdd_experiment(plain).rows);
  std::vector<double> got;
  bool has_improvement = false, has_iterations = false;
  for (const auto& r : abl.rows) {
    if (r.method == "subspace-mle" && r.metric == "beam_precision" && r.rounds == 3) got.push_back(r.value);
    has_improvement |= r.metric == "improvement" && r.setting == "tau=" + format_double(cfg.tau);
    has_iterations |= r.metric == "hit_max_iters";
  }
  CHECK(got == ref.at({"subspace-mle", 3}));
  CHECK(has_improvement);
  CHECK(has_iterations);
}

TEST_CASE("init ablation emits one setting per initialization") {
  auto cfg = small_fdd();
  cfg.experiment = "ablate-init";
  cfg.inits = {"identity", "random", "spectral"};
  const auto out = run_ablation(cfg);
  std::map<std::string, int> seen;
  for (const auto& r : out.rows)
    if (r.metric == "improvement") seen[r.setting]++;
  CHECK(seen.size() == 3);
  CHECK(seen["init=random"] == 8);
  cfg.experiment = "fdd";
  CHECK_THROWS_AS(run_ablation(cfg), ArgumentError);
}
