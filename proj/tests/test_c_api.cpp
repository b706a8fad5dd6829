// Copyright 2026 The lambdarc Authors
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


// Exercises the shared library strictly through its C interface.

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lambdarc/lambdarc.h"

namespace {

namespace fs = std::filesystem;

class CApi : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("lambdarc_capi_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    ASSERT_EQ(lrc_config_create(&cfg_), LRC_OK);
    ASSERT_EQ(lrc_config_set(cfg_, "seed", "3"), LRC_OK);
    ASSERT_EQ(lrc_config_set(cfg_, "n_frames", "16"), LRC_OK);
    ASSERT_EQ(lrc_config_set(cfg_, "n_scenes", "2"), LRC_OK);
    ASSERT_EQ(lrc_config_set(cfg_, "targets", "0.1,0.2"), LRC_OK);
    ASSERT_EQ(lrc_config_set(cfg_, "width", "64"), LRC_OK);
    ASSERT_EQ(lrc_config_set(cfg_, "height", "48"), LRC_OK);
    ASSERT_EQ(lrc_config_set(cfg_, "training_frames", "16"), LRC_OK);
  }
  void TearDown() override {
    lrc_config_destroy(cfg_);
    fs::remove_all(dir_);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
  lrc_config* cfg_ = nullptr;
};

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST_F(CApi, VersionAndStatusNames) {
  EXPECT_STREQ(lrc_version(), "0.1.0");
  EXPECT_STREQ(lrc_status_name(LRC_OK), "ok");
  EXPECT_NE(std::string(lrc_status_name(LRC_ERR_INFEASIBLE_BRACKET)), "");
}

TEST_F(CApi, NullHandlesAreArgumentErrors) {
  EXPECT_EQ(lrc_config_create(nullptr), LRC_ERR_ARGUMENT);
  EXPECT_EQ(lrc_config_set(nullptr, "seed", "1"), LRC_ERR_ARGUMENT);
  EXPECT_NE(std::string(lrc_last_error()), "");
  EXPECT_EQ(lrc_script_length(nullptr), 0u);
  lrc_config_destroy(nullptr);
  lrc_script_destroy(nullptr);
  lrc_sequence_destroy(nullptr);
}

TEST_F(CApi, ConfigErrors) {
  EXPECT_EQ(lrc_config_set(cfg_, "m", "one"), LRC_ERR_CONFIG);
  EXPECT_EQ(lrc_config_set(cfg_, "unknown_key", "1"), LRC_ERR_CONFIG);
  EXPECT_EQ(lrc_config_load(cfg_, path("missing.json").c_str()), LRC_ERR_CONFIG);
  lrc_config* fresh = nullptr;
  ASSERT_EQ(lrc_config_create(&fresh), LRC_OK);
  lrc_script* s = nullptr;
  EXPECT_EQ(lrc_script_generate(fresh, &s), LRC_ERR_CONFIG);  // no seed
  lrc_config_destroy(fresh);
}

TEST_F(CApi, ConfigJsonRoundTrip) {
  size_t needed = 0;
  ASSERT_EQ(lrc_config_to_json(cfg_, nullptr, 0, &needed), LRC_OK);
  std::vector<char> buf(needed);
  char small[4];
  EXPECT_EQ(lrc_config_to_json(cfg_, small, sizeof small, &needed), LRC_ERR_ARGUMENT);
  ASSERT_EQ(lrc_config_to_json(cfg_, buf.data(), buf.size(), &needed), LRC_OK);
  {
    std::ofstream out(path("c.json"));
    out << buf.data();
  }
  lrc_config* other = nullptr;
  ASSERT_EQ(lrc_config_create(&other), LRC_OK);
  ASSERT_EQ(lrc_config_load(other, path("c.json").c_str()), LRC_OK);
  std::vector<char> buf2(needed);
  ASSERT_EQ(lrc_config_to_json(other, buf2.data(), buf2.size(), nullptr), LRC_OK);
  EXPECT_STREQ(buf.data(), buf2.data());
  lrc_config_destroy(other);
}

TEST_F(CApi, ScriptAndSequenceIo) {
  lrc_script* s = nullptr;
  ASSERT_EQ(lrc_script_generate(cfg_, &s), LRC_OK);
  EXPECT_EQ(lrc_script_length(s), 16u);
  ASSERT_EQ(lrc_script_save(s, path("s.json").c_str()), LRC_OK);
  lrc_script* back = nullptr;
  ASSERT_EQ(lrc_script_load(path("s.json").c_str(), &back), LRC_OK);
  EXPECT_EQ(lrc_script_length(back), 16u);
  ASSERT_EQ(lrc_script_render_y4m(s, 64, 48, 30.0, path("s.y4m").c_str()), LRC_OK);
  lrc_sequence* seq = nullptr;
  ASSERT_EQ(lrc_sequence_load_y4m(path("s.y4m").c_str(), &seq), LRC_OK);
  EXPECT_EQ(lrc_sequence_length(seq), 16u);
  EXPECT_EQ(lrc_sequence_width(seq), 64);
  EXPECT_EQ(lrc_sequence_height(seq), 48);
  lrc_sequence_destroy(seq);

  {
    std::ofstream out(path("bad.y4m"));
    out << "YUV4MPEG2 W4 H4 Cxyz\n";
  }
  EXPECT_EQ(lrc_sequence_load_y4m(path("bad.y4m").c_str(), &seq), LRC_ERR_PARSE);
  EXPECT_NE(std::string(lrc_last_error()).find("Cxyz"), std::string::npos);
  {
    std::ofstream out(path("raw.yuv"), std::ios::binary);
    out << std::string(7, '\x10');
  }
  EXPECT_EQ(lrc_sequence_load_raw(path("raw.yuv").c_str(), 2, 2, 30.0, &seq), LRC_ERR_TRUNCATED);
  lrc_script_destroy(back);
  lrc_script_destroy(s);
}

TEST_F(CApi, ControlRunsEveryMethod) {
  lrc_script* s = nullptr;
  ASSERT_EQ(lrc_script_generate(cfg_, &s), LRC_OK);
  for (const char* m : {"ours", "uniform", "multipass", "onepass", "fixed"}) {
    lrc_run_summary out{};
    ASSERT_EQ(lrc_control(cfg_, s, nullptr, m, 0.2, path(std::string(m) + ".csv").c_str(), &out), LRC_OK)
        << lrc_last_error();
    EXPECT_EQ(out.minigops, 4u);
    EXPECT_EQ(out.encode_invocations, 16u);
    EXPECT_EQ(out.control_invocations, std::string(m) == "multipass" ? 128u : 0u);
    EXPECT_GT(slurp(path(std::string(m) + ".csv")).size(), 0u);
  }
  lrc_run_summary out{};
  EXPECT_EQ(lrc_control(cfg_, s, nullptr, "magic", 0.2, nullptr, &out), LRC_ERR_CONFIG);
  EXPECT_EQ(lrc_control(cfg_, s, nullptr, "ours", -1.0, nullptr, &out), LRC_ERR_ARGUMENT);
  lrc_script_destroy(s);
}

TEST_F(CApi, FeatureControlNeedsPixels) {
  ASSERT_EQ(lrc_config_set(cfg_, "predictor", "feature"), LRC_OK);
  lrc_script* s = nullptr;
  ASSERT_EQ(lrc_script_generate(cfg_, &s), LRC_OK);
  lrc_run_summary out{};
  EXPECT_NE(lrc_control(cfg_, s, nullptr, "ours", 0.2, nullptr, &out), LRC_OK);
  ASSERT_EQ(lrc_script_render_y4m(s, 64, 48, 30.0, path("s.y4m").c_str()), LRC_OK);
  lrc_sequence* seq = nullptr;
  ASSERT_EQ(lrc_sequence_load_y4m(path("s.y4m").c_str(), &seq), LRC_OK);
  EXPECT_EQ(lrc_control(cfg_, s, seq, "ours", 0.2, nullptr, &out), LRC_OK) << lrc_last_error();
  EXPECT_EQ(out.minigops, 4u);
  ASSERT_EQ(lrc_calibrate(cfg_, path("p.json").c_str()), LRC_OK);
  ASSERT_EQ(lrc_config_set(cfg_, "predictor_params", path("p.json").c_str()), LRC_OK);
  EXPECT_EQ(lrc_control(cfg_, s, seq, "ours", 0.2, nullptr, &out), LRC_OK) << lrc_last_error();
  lrc_sequence_destroy(seq);
  lrc_script_destroy(s);
}

TEST_F(CApi, FitPowerLaw) {
  const double l[] = {1, 4, 16};
  const double v[] = {2, 4, 8};
  double a = 0, b = 0;
  ASSERT_EQ(lrc_fit_power_law(l, v, 3, &a, &b), LRC_OK);
  EXPECT_NEAR(a, 2.0, 1e-12);
  EXPECT_NEAR(b, 0.5, 1e-12);
  const double same[] = {2, 2};
  EXPECT_EQ(lrc_fit_power_law(same, v, 2, &a, &b), LRC_ERR_FIT);
}

TEST_F(CApi, FitSamplesCsv) {
  {
    std::ofstream out(path("samples.csv"));
    out << "frame,lambda,bpp,mse\n";
    for (double l : {1.0, 2.0, 4.0}) out << "0," << l << ',' << l << ',' << 1.0 / l << '\n';
    for (double l : {1.0, 4.0}) out << "1," << l << ',' << 2 * std::sqrt(l) << ',' << 8.0 / l << '\n';
  }
  ASSERT_EQ(lrc_fit_samples_csv(path("samples.csv").c_str(), path("models.csv").c_str()), LRC_OK)
      << lrc_last_error();
  const std::string text = slurp(path("models.csv"));
  EXPECT_EQ(text.substr(0, text.find('\n')), "frame,alpha1,beta1,alpha2,beta2,c,k");
  std::istringstream rows(text);
  std::string line;
  std::getline(rows, line);
  std::getline(rows, line);
  std::getline(rows, line);
  std::vector<double> cells;
  std::istringstream cols(line);
  for (std::string cell; std::getline(cols, cell, ',');) cells.push_back(std::stod(cell));
  const std::vector<double> expected = {1, 2, 0.5, 8, -1, 32, 2};
  ASSERT_EQ(cells.size(), expected.size()) << text;
  for (std::size_t i = 0; i < cells.size(); ++i) EXPECT_NEAR(cells[i], expected[i], 1e-9 * 32) << i;
  {
    std::ofstream out(path("bad.csv"));
    out << "frame,lambda\n0,1\n";
  }
  EXPECT_NE(lrc_fit_samples_csv(path("bad.csv").c_str(), path("m2.csv").c_str()), LRC_OK);
}

TEST_F(CApi, CompareAndPlotAreDeterministic) {
  ASSERT_EQ(lrc_compare(cfg_, path("a").c_str()), LRC_OK) << lrc_last_error();
  ASSERT_EQ(lrc_compare(cfg_, path("b").c_str()), LRC_OK);
  for (const char* f : {"frames.csv", "minigops.csv", "summary.csv"}) {
    EXPECT_EQ(slurp(path(std::string("a/") + f)), slurp(path(std::string("b/") + f)));
  }
  ASSERT_EQ(lrc_plot(path("a").c_str(), path("plots").c_str()), LRC_OK);
  EXPECT_EQ(slurp(path("a/rate_t0.svg")), slurp(path("plots/rate_t0.svg")));
  EXPECT_EQ(lrc_plot(path("nowhere").c_str(), path("plots").c_str()), LRC_ERR_IO);
}

TEST_F(CApi, InfeasibleBracketMapsToItsStatus) {
  // Two frames whose distortion ranges over [1, 2] are disjoint:
  // [0.0005, 0.001] and [5, 10]. Rates overlap, so a target of 3 is in range.
  {
    std::ofstream out(path("disjoint.json"));
    out << R"({"format": "lambdarc-script", "version": 1, "seed": 1, "coupling_gamma": 0,
              "noise_sigma": 0, "frames": [
      {"alpha1": 1, "beta1": 1, "alpha2": 0.001, "beta2": -1, "scene_change": false},
      {"alpha1": 1, "beta1": 1, "alpha2": 10, "beta2": -1, "scene_change": false}]})";
  }
  lrc_script* s = nullptr;
  ASSERT_EQ(lrc_script_load(path("disjoint.json").c_str(), &s), LRC_OK) << lrc_last_error();
  ASSERT_EQ(lrc_config_set(cfg_, "lambda_min", "1"), LRC_OK);
  ASSERT_EQ(lrc_config_set(cfg_, "lambda_max", "2"), LRC_OK);
  ASSERT_EQ(lrc_config_set(cfg_, "minigop_size", "2"), LRC_OK);
  lrc_run_summary out{};
  EXPECT_EQ(lrc_control(cfg_, s, nullptr, "ours", 1.5, nullptr, &out), LRC_ERR_INFEASIBLE_BRACKET);
  // Below the summed minimum the plan clamps instead of searching.
  EXPECT_EQ(lrc_control(cfg_, s, nullptr, "ours", 0.5, nullptr, &out), LRC_OK);
  lrc_script_destroy(s);
}

}  // namespace
