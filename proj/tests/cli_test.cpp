//
// Project esiaug - Copyright 2026 The esiaug Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "esiaug/cli.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "esiaug/io.h"
#include "esiaug/model.h"

namespace esiaug {
namespace {

namespace fs = std::filesystem;

class CliTest: public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path()
           / ("esiaug_cli_" + std::string(::testing::UnitTest::GetInstance()
                                              ->current_test_info()
                                              ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    write_text_file(path("run.cfg"),
                    "synth.families = 6\nsynth.members = 10\nepochs = 4\n"
                    "test_fraction = 0.17\nval_fraction = 0.17\n"
                    "thresholds = 0.4, 0.6\n");
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string &name) const { return (dir_ / name).string(); }

  int run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int rc = run_cli(args, out, err);
    out_ = out.str();
    err_ = err.str();
    return rc;
  }

  void make_data() {
    ASSERT_EQ(run({ "synth", "--config", path("run.cfg"), "--seed", "4", "--out",
                    path("data.tsv") }),
              0)
        << err_;
    ASSERT_EQ(run({ "split", "--config", path("run.cfg"), "--seed", "4", "--in",
                    path("data.tsv"), "--out-dir", path("splits") }),
              0)
        << err_;
    ASSERT_EQ(run({ "train", "--config", path("run.cfg"), "--seed", "4", "--data",
                    path("data.tsv"), "--split", path("splits/split_0.6.tsv"),
                    "--checkpoint-out", path("m.ckpt"), "--log-out",
                    path("m.log") }),
              0)
        << err_;
  }

  fs::path dir_;
  std::string out_, err_;
};

TEST_F(CliTest, PipelineWritesEveryArtifact) {
  make_data();
  for (const char *f: { "data.tsv", "data.tsv.truth.json", "splits/split_0.4.tsv",
                        "splits/split_0.6.tsv", "m.ckpt", "m.log" })
    EXPECT_TRUE(fs::exists(dir_ / f)) << f;
  EXPECT_NE(out_.find("config_hash="), std::string::npos);
  const std::string log = read_text_file(path("m.log"));
  EXPECT_NE(log.find("# seed=4"), std::string::npos);
  EXPECT_NE(log.find("epoch\ttrain_loss"), std::string::npos);
}

TEST_F(CliTest, PerfectPredictionsScoreOne) {
  make_data();
  std::ifstream in(path("m.ckpt"));
  const Checkpoint ckpt = read_checkpoint(in);
  std::vector<EsiRecord> ds = read_dataset(path("data.tsv"));
  const std::vector<double> preds = predict(ckpt.params, prepare(ds));
  for (std::size_t i = 0; i < ds.size(); ++i)
    ds[i].value = preds[i];
  write_dataset(path("memorized.tsv"), ds);

  ASSERT_EQ(run({ "eval", "--checkpoint", path("m.ckpt"), "--data",
                  path("memorized.tsv"), "--splits", path("splits/split_0.4.tsv"),
                  path("splits/split_0.6.tsv"), "--report-out", path("r.json"),
                  "--curve-out", path("c.tsv") }),
            0)
      << err_;
  const auto report = nlohmann::json::parse(read_text_file(path("r.json")));
  ASSERT_EQ(report["splits"].size(), 2u);
  for (const auto &s: report["splits"]) {
    EXPECT_EQ(s["r2"].get<double>(), 1.0);
    EXPECT_EQ(s["mae"].get<double>(), 0.0);
  }
  EXPECT_EQ(report["good_curves"][0]["au_good"].get<double>(), 1.0);
  EXPECT_EQ(report["good_curves"][0]["direction"], "higher_is_better");
  EXPECT_EQ(report["seed"].get<int>(), 4);
  EXPECT_EQ(report["config_hash"], ckpt.config_hash);
  EXPECT_EQ(read_text_file(path("c.tsv")).substr(0, 29),
            "threshold\tmetric\trisk\tweight\n");
}

TEST_F(CliTest, LambdaAblationHasFiveRows) {
  make_data();
  ASSERT_EQ(run({ "ablate-lambda", "--config", path("run.cfg"), "--seed", "4",
                  "--in", path("data.tsv"), "--report-out", path("l.json"),
                  "--table-out", path("l.tsv") }),
            0)
      << err_;
  const auto report = nlohmann::json::parse(read_text_file(path("l.json")));
  ASSERT_EQ(report["rows"].size(), 5u);
  const double grid[] = { 0.005, 0.05, 0.5, 5, 50 };
  for (int i = 0; i < 5; ++i)
    EXPECT_EQ(report["rows"][i]["value"].get<double>(), grid[i]);
  EXPECT_EQ(report["best_by_validation_r2"].size(), 1u);
}

TEST_F(CliTest, MaskAblationSweepsBothRatios) {
  make_data();
  write_text_file(path("fast.cfg"),
                  "synth.families = 6\nsynth.members = 10\nepochs = 1\n"
                  "test_fraction = 0.17\nval_fraction = 0.17\n");
  ASSERT_EQ(run({ "ablate-mask", "--config", path("fast.cfg"), "--in",
                  path("data.tsv"), "--report-out", path("m.json") }),
            0)
      << err_;
  const auto report = nlohmann::json::parse(read_text_file(path("m.json")));
  ASSERT_EQ(report["rows"].size(), 12u);
  EXPECT_EQ(report["rows"][0]["parameter"], "p_s");
  EXPECT_EQ(report["rows"][6]["parameter"], "p_g");
  EXPECT_EQ(report["rows"][11]["value"].get<double>(), 0.30);
}

TEST_F(CliTest, ExitCodesAndOneLineErrors) {
  EXPECT_EQ(run({ "train", "-x" }), kExitConfig);
  EXPECT_EQ(err_.rfind("error code=USAGE message=", 0), 0u);
  EXPECT_EQ(run({}), kExitConfig);

  EXPECT_EQ(run({ "augment", "--in", path("missing.tsv"), "--out", path("o.tsv") }),
            kExitData);
  EXPECT_EQ(err_.rfind("error code=IO_ERROR", 0), 0u);
  EXPECT_EQ(std::count(err_.begin(), err_.end(), '\n'), 1);

  write_text_file(path("bad.cfg"), "p_g = 0.35\nnonsense = 1\n");
  EXPECT_EQ(run({ "synth", "--config", path("bad.cfg"), "--out", path("x.tsv") }),
            kExitConfig);
  EXPECT_EQ(err_.rfind("error code=CONFIG_ERROR", 0), 0u);

  write_text_file(path("broken.tsv"), "id\ttask\n1\n");
  EXPECT_EQ(run({ "augment", "--in", path("broken.tsv"), "--out", path("o.tsv") }),
            kExitData);

  make_data();
  std::vector<EsiRecord> ds = read_dataset(path("data.tsv"));
  for (EsiRecord &r: ds)
    r.value = 1.5;
  write_dataset(path("flat.tsv"), ds);
  EXPECT_EQ(run({ "eval", "--checkpoint", path("m.ckpt"), "--data", path("flat.tsv"),
                  "--splits", path("splits/split_0.6.tsv"), "--report-out",
                  path("r.json") }),
            kExitNumeric)
      << err_;
  EXPECT_EQ(err_.rfind("error code=DEGENERATE_TARGETS", 0), 0u);
}

TEST_F(CliTest, AblationNeedsValidationData) {
  write_text_file(path("noval.cfg"), "synth.families = 6\nsynth.members = 10\n");
  ASSERT_EQ(run({ "synth", "--config", path("noval.cfg"), "--out", path("d.tsv") }),
            0);
  EXPECT_EQ(run({ "ablate-lambda", "--config", path("noval.cfg"), "--in",
                  path("d.tsv"), "--report-out", path("l.json") }),
            kExitConfig);
}

TEST_F(CliTest, RepeatedRunsAreByteIdentical) {
  make_data();
  const std::string ckpt = read_text_file(path("m.ckpt"));
  const std::string log = read_text_file(path("m.log"));
  const std::string split = read_text_file(path("splits/split_0.6.tsv"));
  make_data();
  EXPECT_EQ(read_text_file(path("m.ckpt")), ckpt);
  EXPECT_EQ(read_text_file(path("m.log")), log);
  EXPECT_EQ(read_text_file(path("splits/split_0.6.tsv")), split);
}

TEST_F(CliTest, HashIgnoresSeed) {
  ASSERT_EQ(run({ "synth", "--config", path("run.cfg"), "--seed", "1", "--out",
                  path("a.tsv") }),
            0);
  const std::string first = out_.substr(0, out_.find('\n'));
  ASSERT_EQ(run({ "synth", "--config", path("run.cfg"), "--seed", "2", "--out",
                  path("b.tsv") }),
            0);
  EXPECT_EQ(out_.substr(0, out_.find('\n')), first);
  EXPECT_NE(read_text_file(path("a.tsv")), read_text_file(path("b.tsv")));
}

}  // namespace
}  // namespace esiaug
