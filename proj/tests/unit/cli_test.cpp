// Copyright 2026 The avsync Authors.
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

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "avsync/cube_file.hpp"
#include "cli.hpp"
#include "fixtures.hpp"

namespace avsync {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

void write_text(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

// One small corpus shared by the tests in this file.
class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new testing::TempDir("cli");
    const Result r = run({"synth", "--out", (*dir_ / "corpus").string(), "--subjects", "4", "--clips", "1",
                          "--duration", "1.0", "--seed", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  static void TearDownTestSuite() {
    delete dir_;
    dir_ = nullptr;
  }
  static fs::path path(const std::string& name) { return *dir_ / name; }
  static fs::path manifest() { return *dir_ / "corpus" / "manifest.csv"; }
  static std::vector<std::string> small_model() {
    return {"--width-scale", "0.1", "--stride", "12", "--batch", "8", "--epochs", "1"};
  }
  static testing::TempDir* dir_;
};
testing::TempDir* Cli::dir_ = nullptr;

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kExitUsage);
  EXPECT_EQ(run({"dance"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"train", "--manifest", manifest().string()}).code, cli::kExitUsage);
  EXPECT_EQ(run({"--help"}).code, cli::kExitOk);
  EXPECT_EQ(run({"train", "--manifest", manifest().string(), "--out", path("x.ckpt").string(), "--optimizer", "rmsprop"}).code,
            cli::kExitUsage);
  EXPECT_EQ(run({"train", "--manifest", manifest().string(), "--out", path("x.ckpt").string(), "--rho", "1.5"}).code,
            cli::kExitUsage);
}

TEST_F(Cli, SynthWritesTheCorpus) {
  EXPECT_TRUE(fs::exists(manifest()));
  std::size_t wavs = 0;
  for (const auto& e : fs::directory_iterator(*dir_ / "corpus" / "audio")) wavs += e.path().extension() == ".wav";
  EXPECT_EQ(wavs, 4u);
  const Result again = run({"synth", "--out", path("corpus2").string(), "--subjects", "4", "--clips", "1",
                            "--duration", "1.0", "--seed", "2"});
  ASSERT_EQ(again.code, 0);
  EXPECT_EQ(testing::read_bytes(*dir_ / "corpus" / "audio" / "S01_c0.wav"),
            testing::read_bytes(path("corpus2") / "audio" / "S01_c0.wav"));
  EXPECT_EQ(testing::read_bytes(*dir_ / "corpus" / "frames" / "S01_c0" / "0007.pgm"),
            testing::read_bytes(path("corpus2") / "frames" / "S01_c0" / "0007.pgm"));
}

TEST_F(Cli, FeaturesAreShapedAndBitwiseStable) {
  const std::string wav = (*dir_ / "corpus" / "audio" / "S00_c0.wav").string();
  const std::string frames = (*dir_ / "corpus" / "frames" / "S00_c0").string();
  ASSERT_EQ(run({"features", "audio", "--in", wav, "--out", path("a1.avcb").string()}).code, 0);
  ASSERT_EQ(run({"features", "audio", "--in", wav, "--out", path("a2.avcb").string()}).code, 0);
  EXPECT_EQ(read_cube(path("a1.avcb")).shape(), (Shape{15, 40, 3}));
  EXPECT_EQ(testing::read_bytes(path("a1.avcb")), testing::read_bytes(path("a2.avcb")));
  ASSERT_EQ(run({"features", "audio", "--in", wav, "--start", "0.5", "--mfcc", "--out", path("m.avcb").string()}).code, 0);
  EXPECT_EQ(read_cube(path("m.avcb")).shape(), (Shape{15, 13, 3}));

  ASSERT_EQ(run({"features", "video", "--frames", frames, "--start", "3", "--out", path("v1.avcb").string()}).code, 0);
  ASSERT_EQ(run({"features", "video", "--frames", frames, "--start", "3", "--out", path("v2.avcb").string()}).code, 0);
  EXPECT_EQ(read_cube(path("v1.avcb")).shape(), (Shape{9, 60, 100, 1}));
  EXPECT_EQ(testing::read_bytes(path("v1.avcb")), testing::read_bytes(path("v2.avcb")));

  const Result batch = run({"features", "batch", "--manifest", manifest().string(), "--out-dir", path("cubes").string()});
  ASSERT_EQ(batch.code, 0) << batch.err;
  EXPECT_TRUE(fs::exists(path("cubes") / "S03_c0.audio.avcb"));
  EXPECT_TRUE(fs::exists(path("cubes") / "S03_c0.video.avcb"));
}

TEST_F(Cli, DataErrorsExitWithTwo) {
  EXPECT_EQ(run({"features", "audio", "--in", path("none.wav").string(), "--out", path("n.avcb").string()}).code,
            cli::kExitData);
  EXPECT_EQ(run({"features", "video", "--frames", path("nowhere").string(), "--out", path("n.avcb").string()}).code,
            cli::kExitData);
  std::string text;
  {
    std::ifstream is(manifest());
    std::stringstream ss;
    ss << is.rdbuf();
    text = ss.str();
  }
  const auto pos = text.find(",30,");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 4, ",25,");
  write_text(*dir_ / "corpus" / "fps25.csv", text);
  const auto train25 = concat({"train", "--manifest", (*dir_ / "corpus" / "fps25.csv").string(), "--out",
                               path("f.ckpt").string()},
                              small_model());
  const Result r = run(train25);
  EXPECT_EQ(r.code, cli::kExitData);
  EXPECT_NE(r.err.find("--allow-fps"), std::string::npos);
}

TEST_F(Cli, TrainIsDeterministicAndEvalWritesReports) {
  const auto base = concat({"train", "--manifest", manifest().string(), "--seed", "5"}, small_model());
  const Result a = run(concat(base, {"--out", path("a.ckpt").string()}));
  ASSERT_EQ(a.code, 0) << a.err;
  const Result b = run(concat(base, {"--out", path("b.ckpt").string()}));
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(testing::read_bytes(path("a.ckpt")), testing::read_bytes(path("b.ckpt")));
  EXPECT_TRUE(fs::exists(path("a.ckpt.stats.csv")));
  const Result c = run(concat({"train", "--manifest", manifest().string(), "--seed", "6", "--out", path("c.ckpt").string()},
                              small_model()));
  ASSERT_EQ(c.code, 0);
  EXPECT_NE(testing::read_bytes(path("a.ckpt")), testing::read_bytes(path("c.ckpt")));

  const Result e = run({"eval", "--ckpt", path("a.ckpt").string(), "--manifest", manifest().string(), "--out-dir",
                        path("eval").string(), "--shift", "0.5", "--stride", "3"});
  ASSERT_EQ(e.code, 0) << e.err;
  std::ifstream is(path("eval") / "metrics.json");
  const auto j = nlohmann::json::parse(is);
  for (const char* key : {"eer", "auc", "ap", "n_gen", "n_imp", "folds"}) EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j.at("shift_s").get<double>(), 0.5);
  for (const char* f : {"roc.csv", "pr.csv", "roc.svg", "pr.svg"}) EXPECT_TRUE(fs::exists(path("eval") / f)) << f;
}

TEST_F(Cli, ConfigFilesMergeAndConflictsAreRejected) {
  write_text(path("good.cfg"), "# quick run\nwidth-scale = 0.1\nstride=12\nbatch=8\nepochs=1\nno-early-stop=true\n");
  const std::vector<std::string> base{"train", "--manifest", manifest().string(), "--out", path("cfg.ckpt").string()};
  const Result ok = run(concat(base, {"--config", path("good.cfg").string(), "--epochs", "1"}));
  EXPECT_EQ(ok.code, 0) << ok.err;
  const Result conflict = run(concat(base, {"--config", path("good.cfg").string(), "--epochs", "3"}));
  EXPECT_EQ(conflict.code, cli::kExitUsage);
  EXPECT_NE(conflict.err.find("conflicts"), std::string::npos);
  write_text(path("unknown.cfg"), "colour=blue\n");
  EXPECT_EQ(run(concat(base, {"--config", path("unknown.cfg").string()})).code, cli::kExitUsage);
  write_text(path("repeat.cfg"), "epochs=1\nepochs=2\n");
  EXPECT_EQ(run(concat(base, {"--config", path("repeat.cfg").string()})).code, cli::kExitUsage);
  EXPECT_EQ(run(concat(base, {"--config", path("absent.cfg").string()})).code, cli::kExitUsage);
}

TEST_F(Cli, CrossValidationReportsEveryGridPoint) {
  const Result r = run(concat({"crossval", "--manifest", manifest().string(), "--out", path("cv.json").string(),
                               "--folds", "2", "--mu-grid", "0.5,1.0"},
                              small_model()));
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream is(path("cv.json"));
  const auto j = nlohmann::json::parse(is);
  ASSERT_EQ(j.at("grid").size(), 2u);
  EXPECT_EQ(j.at("grid")[0].at("fold_eer").size(), 2u);
  const std::size_t best = j.at("best").at("index").get<std::size_t>();
  for (const auto& g : j.at("grid")) EXPECT_LE(j.at("grid")[best].at("mean_eer").get<double>(), g.at("mean_eer").get<double>());
  EXPECT_EQ(run(concat({"crossval", "--manifest", manifest().string(), "--out", path("cv.json").string(), "--folds",
                        "5"},
                       small_model()))
                .code,
            cli::kExitUsage);
}

}  // namespace
}  // namespace avsync
