/*
 * SPDX-FileCopyrightText: <text>Copyright 2026 The hsca authors</text>
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 * This file is part of hsca, a horizontal side-channel analysis toolkit.
 */

#include "hsca/cli.hpp"

#include "gtest/gtest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

using namespace hsca;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
  protected:
    void SetUp() override {
        dir = fs::temp_directory_path() /
              ("hsca_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }

    /// Runs the hsca binary with `args`; returns its exit code.
    int hsca(const std::string &args, const std::string &env = "") {
        const std::string cmd = env + " " + HSCA_CLI_PATH + " " + args + " > " +
                                (dir / "stdout.txt").string() + " 2> " +
                                (dir / "stderr.txt").string();
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    std::string read(const fs::path &p) { return io::read_file(p); }

    fs::path dir;
};

std::size_t line_count(const std::string &text) { return io::split_lines(text).size(); }

} // namespace

TEST_F(CliTest, synthWritesKeyTraceAndManifest) {
    ASSERT_EQ(hsca("synth --hw 115 --seed 7 --profile moderate --out " + dir.string()), 0);
    auto key = read_key_file(dir / "key.txt", 230);
    EXPECT_EQ(key.hamming_weight(), 115u);
    auto trace = load_trace(dir / "trace.csv");
    EXPECT_EQ(trace.slots(), 230u);
    EXPECT_EQ(trace.cycles(), 54u);
    auto manifest = nlohmann::json::parse(read(dir / "synth_manifest.json"));
    EXPECT_EQ(manifest["schema_version"], 1);
    EXPECT_EQ(manifest["command"], "synth");
    EXPECT_EQ(manifest["config"]["seed"], 7);
    EXPECT_EQ(manifest["config"]["hw"], 115);
    EXPECT_FALSE(fs::exists(dir / "trace.hsca"));
}

TEST_F(CliTest, synthRejectsOverweightKey) {
    EXPECT_EQ(hsca("synth --hw 231 --out " + dir.string()), 1);
    EXPECT_NE(read(dir / "stderr.txt").find("exceeds"), std::string::npos);
    EXPECT_EQ(hsca("synth --hw 5 --profile loud --out " + dir.string()), 1);
    EXPECT_EQ(hsca("frobnicate"), 1);
    EXPECT_EQ(hsca("synth"), 1);
}

TEST_F(CliTest, rawTraceRecompressesToCsv) {
    ASSERT_EQ(hsca("synth --hw 60 --seed 3 --raw --out " + dir.string()), 0);
    auto raw = read_raw_trace(dir / "trace.hsca");
    EXPECT_EQ(raw.params().samples_per_cycle, 300u);
    EXPECT_EQ(encode_compressed_csv(compress_trace(raw)), read(dir / "trace.csv"));
}

TEST_F(CliTest, attackWithAndWithoutKey) {
    ASSERT_EQ(hsca("synth --hw 115 --seed 7 --out " + dir.string()), 0);
    auto out1 = dir / "a1", out2 = dir / "a2", out3 = dir / "a3";
    const auto trace = (dir / "trace.csv").string(), key = (dir / "key.txt").string();
    ASSERT_EQ(hsca("attack --trace " + trace + " --key " + key + " --seed 7 --out " +
                   out1.string()),
              0);
    for (auto name : {"candidates_mean_comparison.csv", "candidates_kmeans.csv"})
        EXPECT_EQ(line_count(read(out1 / name)), 55u) << name;
    EXPECT_TRUE(fs::exists(out1 / "report_kmeans.csv"));
    EXPECT_EQ(line_count(read(out1 / "report_mean_comparison.csv")), 55u);

    ASSERT_EQ(hsca("attack --trace " + trace + " --key " + key + " --seed 7 --out " +
                   out2.string()),
              0);
    for (auto name : {"candidates_mean_comparison.csv", "candidates_kmeans.csv",
                      "report_kmeans.csv", "report_mean_comparison.csv"})
        EXPECT_EQ(read(out1 / name), read(out2 / name)) << name;

    ASSERT_EQ(hsca("attack --trace " + trace + " --methods kmeans --out " + out3.string()), 0);
    EXPECT_TRUE(fs::exists(out3 / "candidates_kmeans.csv"));
    EXPECT_FALSE(fs::exists(out3 / "candidates_mean_comparison.csv"));
    EXPECT_FALSE(fs::exists(out3 / "report_kmeans.csv"));
}

TEST_F(CliTest, attackRejectsMalformedTrace) {
    io::write_file_atomic(dir / "bad.hsca", "HSCX not a trace");
    EXPECT_EQ(hsca("attack --trace " + (dir / "bad.hsca").string() + " --out " + dir.string()),
              2);
    io::write_file_atomic(dir / "short.hsca", std::string("HSCA\x01\x00", 6));
    EXPECT_EQ(hsca("attack --trace " + (dir / "short.hsca").string() + " --out " + dir.string()),
              2);
    EXPECT_EQ(hsca("attack --trace " + (dir / "missing.csv").string() + " --out " + dir.string()),
              2);
}

TEST_F(CliTest, attackKeyLengthMismatchIsUsageError) {
    ASSERT_EQ(hsca("synth --hw 10 --slots 20 --cycles 3 --out " + dir.string()), 0);
    io::write_file_atomic(dir / "long.txt", std::string(21, '1'));
    EXPECT_EQ(hsca("attack --trace " + (dir / "trace.csv").string() + " --key " +
                   (dir / "long.txt").string() + " --out " + dir.string()),
              1);
}

TEST_F(CliTest, sweepSingleWeightAndTable1) {
    auto one = dir / "one", all = dir / "all";
    ASSERT_EQ(hsca("sweep --weights 115 --seed 1 --out " + one.string()), 0);
    EXPECT_EQ(line_count(read(one / "sweep.csv")), 1u + 2u);
    ASSERT_EQ(hsca("--seed 1 --format svg-data sweep --weights table1 --out " + all.string()), 0);
    auto text = read(all / "sweep.csv");
    EXPECT_EQ(line_count(text), 1u + 27u * 2u);
    EXPECT_TRUE(fs::exists(all / "plot_kmeans_best.dat"));
    EXPECT_TRUE(fs::exists(all / "plot_mean_comparison_c41.dat"));
    EXPECT_EQ(line_count(read(all / "plot_kmeans_best.dat")), 1u + 27u);
    EXPECT_EQ(hsca("sweep --weights 1,x --out " + one.string()), 1);
    EXPECT_EQ(hsca("sweep --weights 300 --out " + one.string()), 1);
}

TEST_F(CliTest, sweepReplaysByteIdentically) {
    auto first = dir / "first", second = dir / "second";
    ASSERT_EQ(hsca("sweep --weights 4,115,207 --seed 5 --profile strong --out " + first.string()),
              0);
    ASSERT_EQ(hsca("replay " + (first / "sweep_manifest.json").string() + " --out " +
                   second.string()),
              0);
    for (auto name : {"sweep.csv", "sweep_manifest.json", "plot_kmeans_best.csv",
                      "plot_mean_comparison_c22.csv"})
        EXPECT_EQ(read(first / name), read(second / name)) << name;
}

TEST_F(CliTest, synthReplaysByteIdentically) {
    auto first = dir / "first", second = dir / "second";
    ASSERT_EQ(hsca("synth --hw 33 --seed 9 --raw --out " + first.string()), 0);
    ASSERT_EQ(hsca("replay " + (first / "synth_manifest.json").string() + " --out " +
                   second.string()),
              0);
    for (auto name : {"key.txt", "trace.csv", "trace.hsca", "model.json", "synth_manifest.json"})
        EXPECT_EQ(read(first / name), read(second / name)) << name;
}

TEST_F(CliTest, reportRegeneratesPlots) {
    auto sw = dir / "sw", rep = dir / "rep";
    ASSERT_EQ(hsca("sweep --weights 0,115,230 --seed 2 --out " + sw.string()), 0);
    ASSERT_EQ(hsca("report --sweep " + (sw / "sweep.csv").string() + " --out " + rep.string()),
              0);
    for (auto name : {"plot_kmeans_best.csv", "plot_mean_comparison_best.csv",
                      "plot_kmeans_c49.csv"})
        EXPECT_EQ(read(sw / name), read(rep / name)) << name;
    EXPECT_TRUE(fs::exists(rep / "report_manifest.json"));
    io::write_file_atomic(dir / "junk.csv", "what,is,this\n");
    EXPECT_EQ(hsca("report --sweep " + (dir / "junk.csv").string() + " --out " + rep.string()),
              2);
}

TEST_F(CliTest, outputDirectoryFromEnvironment) {
    auto target = dir / "from_env";
    ASSERT_EQ(hsca("synth --hw 2 --slots 8 --cycles 2", "HSCA_OUT_DIR=" + target.string()), 0);
    EXPECT_TRUE(fs::exists(target / "key.txt"));
}

TEST_F(CliTest, modelFileOverridesProfile) {
    LeakageModel model{{10.0, 20.0}, {1.0, 0.0}, {0.0, 0.0}, 0};
    write_model_file(dir / "m.json", model);
    ASSERT_EQ(hsca("synth --hw 4 --slots 10 --cycles 2 --model " + (dir / "m.json").string() +
                   " --out " + dir.string()),
              0);
    EXPECT_EQ(read_model_file(dir / "model.json"), model);
    auto trace = load_trace(dir / "trace.csv");
    auto key = read_key_file(dir / "key.txt");
    for (std::size_t j = 0; j < 10; ++j)
        EXPECT_EQ(trace(j, 0), 10.0 + key[j]);
    EXPECT_EQ(hsca("synth --hw 4 --model " + (dir / "m.json").string() + " --out " + dir.string()),
              1);
}
