// Copyright 2026 The eigentomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "cli.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "eigentomo/json_io.hpp"
#include "eigentomo/measurement.hpp"

namespace eigentomo::cli {
namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("eigentomo_cli_" + std::string(info->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string sub(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, kExitUsage);
  const CliResult missing = run({"reconstruct"});
  EXPECT_EQ(missing.code, kExitUsage);
  EXPECT_NE(missing.err.find("--data"), std::string::npos);
  EXPECT_EQ(run({"synth", "--w", "3", "--spectrum", "0.8,0.5", "--out-dir", sub("a")}).code, kExitUsage);
  EXPECT_EQ(run({"synth", "--preset", "ghz", "--out-dir", sub("a")}).code, kExitUsage);
  EXPECT_EQ(run({"synth", "--out-dir", sub("a")}).code, kExitUsage);
  EXPECT_EQ(run({"reconstruct", "--data", sub("a/dataset.jsonl"), "--cost", "l7"}).code, kExitUsage);
  EXPECT_EQ(run({"verify", "--dims", "1"}).code, kExitUsage);
  EXPECT_EQ(run({"--threads", "0", "verify", "--dims", "2"}).code, kExitUsage);
  EXPECT_EQ(run({"figdata", "fig5", "--out-dir", sub("f")}).code, kExitUsage);
  EXPECT_EQ(run({"--help"}).code, kExitOk);
}

TEST_F(CliTest, MissingDatasetFileIsRuntimeError) {
  const CliResult r = run({"reconstruct", "--data", sub("nope.jsonl"), "--out-dir", sub("r")});
  EXPECT_EQ(r.code, kExitRuntime);
  EXPECT_NE(r.err.find("nope.jsonl"), std::string::npos);
}

TEST_F(CliTest, SynthPresetBellMixture) {
  ASSERT_EQ(run({"synth", "--preset", "bell-mixture", "--out-dir", sub("bell")}).code, kExitOk);
  const MeasurementDataset d = read_dataset_file(sub("bell/dataset.jsonl"));
  EXPECT_EQ(d.n_qubits(), 2);
  EXPECT_EQ(d.size(), 36U);
  EXPECT_EQ(d.groups().size(), 9U);
  const DensityMatrix rho = io::density_matrix_from_json(io::read_json_file(sub("bell/state.json")));
  const Spectrum s = eigendecompose(rho);
  EXPECT_NEAR(s.eigenvalues[0], 0.9, 1e-12);
  EXPECT_NEAR(s.eigenvalues[3], 0.001, 1e-12);
  const io::Json m = io::read_json_file(sub("bell/manifest.json"));
  EXPECT_EQ(m.at("command"), "synth");
  EXPECT_EQ(m.at("outputs").size(), 3U);
  EXPECT_EQ(m.at("seed").get<std::uint64_t>(), 0U);
}

TEST_F(CliTest, SynthCompressedWMixture) {
  ASSERT_EQ(run({"synth", "--w", "4", "--spectrum", "0.860,0.063,0.037", "--bases", "compressed", "--seed", "7",
                 "--out-dir", sub("w")})
                .code,
            kExitOk);
  const MeasurementDataset d = read_dataset_file(sub("w/dataset.jsonl"));
  EXPECT_EQ(d.groups().size(), 61U);
  EXPECT_EQ(d.size(), 61U * 16U);
}

TEST_F(CliTest, SynthSingleQubitW) {
  ASSERT_EQ(run({"synth", "--w", "1", "--spectrum", "1.0", "--perturbation", "0", "--out-dir", sub("w1")}).code, kExitOk);
  const MeasurementDataset d = read_dataset_file(sub("w1/dataset.jsonl"));
  EXPECT_EQ(d.size(), 6U);
  for (const auto& r : d.records()) {
    if (r.basis.str() == "z") { EXPECT_NEAR(r.probability, r.outcome.str() == "-" ? 1.0 : 0.0, 1e-12); }
  }
}

TEST_F(CliTest, SynthSampledRecordsShots) {
  ASSERT_EQ(run({"synth", "--preset", "bell-mixture", "--shots", "1000", "--seed", "3", "--out-dir", sub("s")}).code,
            kExitOk);
  const MeasurementDataset d = read_dataset_file(sub("s/dataset.jsonl"));
  EXPECT_EQ(d.mode(), DatasetMode::kSampled);
  EXPECT_TRUE(d.has_shots());
}

TEST_F(CliTest, ReconstructBellAndReplay) {
  ASSERT_EQ(run({"synth", "--preset", "bell-mixture", "--out-dir", sub("bell")}).code, kExitOk);
  const std::vector<std::string> args{"reconstruct",         "--data",   sub("bell/dataset.jsonl"),
                                      "--truth",             sub("bell/state.json"),
                                      "--target",            sub("bell/target.json"),
                                      "--out-dir",           sub("r1")};
  const CliResult r = run(args);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const std::string report = slurp(sub("r1/report.csv"));
  EXPECT_EQ(report.substr(0, report.find('\n')), "N,p1,p2,kappa2,p3,ov1,p1b,ov2,p2b,F,RF,F_rho_W,ov1_W,rank");
  std::istringstream rows(report);
  std::string header, row;
  std::getline(rows, header);
  std::getline(rows, row);
  std::vector<std::string> cells;
  std::stringstream cs(row);
  for (std::string c; std::getline(cs, c, ',');) cells.push_back(c);
  ASSERT_EQ(cells.size(), 14U);
  for (const auto& c : cells) EXPECT_NE(c, "nan");
  EXPECT_GE(std::stod(cells[9]), 0.95);
  EXPECT_TRUE(fs::exists(sub("r1/training_step1.csv")));
  EXPECT_TRUE(fs::exists(sub("r1/result.json")));

  ASSERT_EQ(run({"replay", "--manifest", sub("r1/manifest.json"), "--out-dir", sub("r2")}).code, kExitOk);
  for (const char* f : {"report.csv", "result.json", "training_step1.csv", "training_step2.csv"}) {
    EXPECT_EQ(slurp(sub(std::string("r1/") + f)), slurp(sub(std::string("r2/") + f))) << f;
  }
}

TEST_F(CliTest, ThreadsFlagDoesNotChangeOutput) {
  ASSERT_EQ(run({"synth", "--preset", "bell-mixture", "--out-dir", sub("bell")}).code, kExitOk);
  const std::vector<std::string> base{"reconstruct", "--data", sub("bell/dataset.jsonl"), "--restarts", "2",
                                      "--epochs", "500"};
  auto with = [&](std::vector<std::string> extra) {
    std::vector<std::string> a = extra;
    a.insert(a.end(), base.begin(), base.end());
    return a;
  };
  ASSERT_EQ(run(with({"--threads", "1", "--out-dir", sub("t1")})).code, kExitOk);
  ASSERT_EQ(run(with({"--threads", "2", "--out-dir", sub("t2")})).code, kExitOk);
  EXPECT_EQ(slurp(sub("t1/result.json")), slurp(sub("t2/result.json")));
  EXPECT_EQ(io::read_json_file(sub("t2/manifest.json")).at("threads"), 2);
}

TEST_F(CliTest, VerifySmokeAndInjectedFault) {
  const auto start = std::chrono::steady_clock::now();
  const CliResult ok = run({"verify", "--dims", "2", "--trials", "10", "--out-dir", sub("v")});
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_EQ(ok.code, kExitOk) << ok.out;
  EXPECT_LT(seconds, 5.0);
  const io::Json report = io::read_json_file(sub("v/oracle_report.json"));
  EXPECT_EQ(report.at("propositions").size(), 4U);

  const CliResult bad = run({"verify", "--dims", "2", "--trials", "10", "--inject-fault", "--out-dir", sub("vf")});
  EXPECT_EQ(bad.code, kExitVerification);
  EXPECT_NE(bad.out.find("FAIL"), std::string::npos);
}

TEST_F(CliTest, FigdataOutputs) {
  ASSERT_EQ(run({"figdata", "fig4", "--out-dir", sub("f4")}).code, kExitOk);
  const std::string ent = slurp(sub("f4/fig4_entropy.csv"));
  const std::string prob = slurp(sub("f4/fig4_probabilities.csv"));
  EXPECT_EQ(std::count(ent.begin(), ent.end(), '\n'), 82);
  EXPECT_EQ(std::count(prob.begin(), prob.end(), '\n'), 1297);

  ASSERT_EQ(run({"figdata", "fig3", "--perturbations", "10", "--out-dir", sub("f3")}).code, kExitOk);
  const std::string csv = slurp(sub("f3/fig3.csv"));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 12);
  EXPECT_TRUE(fs::exists(sub("f3/fig3_summary.csv")));
  ASSERT_EQ(run({"figdata", "fig3", "--perturbations", "10", "--out-dir", sub("f3b")}).code, kExitOk);
  EXPECT_EQ(csv, slurp(sub("f3b/fig3.csv")));
}

}  // namespace
}  // namespace eigentomo::cli
