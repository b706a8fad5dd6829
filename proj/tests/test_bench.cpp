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


#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lambdarc/bench.hpp"
#include "lambdarc/config.hpp"
#include "lambdarc/error.hpp"
#include "lambdarc/metrics.hpp"
#include "lambdarc/report_io.hpp"
#include "lambdarc/svg.hpp"
#include "test_util.hpp"

namespace lambdarc {
namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ExperimentConfig small_config(std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.seed = seed;
  cfg.n_frames = 24;
  cfg.n_scenes = 2;
  cfg.targets = {0.1, 0.3};
  cfg.width = 64;
  cfg.height = 48;
  cfg.training_frames = 24;
  return cfg;
}

TEST(Multipass, InvocationCountsPerMinigop) {
  VirtualCodec codec(generate_script(1, 8, 1, 0.1), 0.1, 409.6);
  const LambdaGrid grid(0.1, 409.6, 8);
  const auto reports = run_multipass_sequence(codec, grid, 0.2, AllocatorConfig{});
  ASSERT_EQ(reports.size(), 2u);
  for (const EncodeReport& r : reports) {
    EXPECT_EQ(r.control_invocations, 32u);
    EXPECT_EQ(r.encode_invocations, 4u);
  }
  EXPECT_EQ(codec.invocation_count(), 2u * 36u);
}

TEST(Multipass, NoiselessPlanEqualsOracle) {
  ContentScript s = generate_script(2, 4, 1, 0.2);
  s.coupling_gamma = 0.0;
  const LambdaGrid grid(0.1, 409.6, 8);
  VirtualCodec mp_codec(s, 0.1, 409.6);
  BufferState buffer;
  const EncodeReport mp = run_multipass(mp_codec, grid, 0, 4, 0.8, AllocatorConfig{}, buffer, 0.0);

  VirtualCodec codec(s, 0.1, 409.6);
  std::vector<FrameModelSet> models;
  for (std::size_t i = 0; i < 4; ++i) models.push_back(fit_frame_models(oracle_predict(codec, i, 0.0, grid)));
  const EncodeReport ours = run_minigop(models, 0.8, codec, 0, 0.0, AllocatorConfig{});
  EXPECT_NEAR(mp.plan.d_tar, ours.plan.d_tar, 1e-12);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(mp.frames[i].lambda, ours.frames[i].lambda, 1e-9);
}

TEST(Multipass, NoisyFitRecoversAlpha) {
  ContentScript s = test::uniform_script({0.2, 0.6, 0.05, -0.9, false}, 400, 0.0, 0.05, 3);
  VirtualCodec codec(s, 0.1, 409.6);
  const LambdaGrid grid(0.1, 409.6, 8);
  int within = 0;
  for (std::size_t f = 0; f < s.size(); ++f) {
    std::vector<double> bpp, mse;
    for (double l : grid.values()) {
      const EncodeResult r = codec.encode_frame(f, l, 0.0);
      bpp.push_back(r.bpp);
      mse.push_back(r.mse);
    }
    const FrameModelSet m = fit_frame_models(RDSampleSet(grid, bpp, mse));
    within += std::abs(m.r_lambda.alpha / 0.2 - 1.0) < 0.05 ? 1 : 0;
  }
  // One-sigma-ish band: the OLS intercept sd at M = 8 and sigma = 0.05 is about 0.03.
  EXPECT_GT(within, 360);
}

TEST(OnePass, FixedPointOnMatchingContent) {
  ContentScript s = test::uniform_script({0.2, 0.6, 0.05, -0.9, false}, 16);
  s.coupling_gamma = 0.0;
  VirtualCodec codec(s, 0.1, 409.6);
  OnePassState state;
  const auto reports = run_onepass_sequence(codec, 0.3, AllocatorConfig{}, state);
  EXPECT_NEAR(state.alpha(), 0.2, 1e-12);
  EXPECT_NEAR(state.beta(), 0.6, 1e-12);
  for (const EncodeReport& r : reports) {
    EXPECT_LT(rate_error(r.total_bpp(), r.target_total), 1e-9);
    EXPECT_EQ(r.control_invocations, 0u);
  }
}

TEST(OnePass, ParametersStayClipped) {
  OnePassState state;
  Rng rng(4);
  for (int i = 0; i < 2000; ++i) {
    state.update(std::exp(rng.uniform(-2.3, 6.0)), std::exp(rng.uniform(-12, 8)));
    EXPECT_GE(state.alpha(), state.params().alpha_lo);
    EXPECT_LE(state.alpha(), state.params().alpha_hi);
    EXPECT_GE(state.beta(), state.params().beta_lo);
    EXPECT_LE(state.beta(), state.params().beta_hi);
  }
}

TEST(OnePass, SceneChangeHurtsOnePassMoreThanOurs) {
  int wins = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    ExperimentConfig cfg = small_config(seed);
    cfg.n_frames = 32;
    cfg.n_scenes = 4;
    const ContentScript script = make_script(cfg, 32);
    const RunSummary ours = summarize(run_method(cfg, script, nullptr, nullptr, "ours", 0.2).reports);
    const RunSummary one = summarize(run_method(cfg, script, nullptr, nullptr, "onepass", 0.2).reports);
    wins += one.mean_delta_r > ours.mean_delta_r ? 1 : 0;
  }
  EXPECT_GE(wins, 9);
}

TEST(FixedLambda, NoiselessStationaryFramesIdentical) {
  ContentScript s = test::uniform_script({0.2, 0.6, 0.05, -0.9, false}, 8);
  s.coupling_gamma = 0.0;
  VirtualCodec codec(s, 0.1, 409.6);
  const auto reports = run_fixed_lambda(codec, 5.0, 8, 4);
  ASSERT_EQ(reports.size(), 2u);
  for (const auto& r : reports) {
    for (const auto& f : r.frames) {
      EXPECT_EQ(f.actual_bpp, reports[0].frames[0].actual_bpp);
      EXPECT_EQ(f.actual_mse, reports[0].frames[0].actual_mse);
    }
  }
}

TEST(FixedLambda, TotalReusedAsTargetClosesLoop) {
  ContentScript s = generate_script(6, 8, 2, 0.2);
  s.coupling_gamma = 0.0;
  VirtualCodec fixed_codec(s, 0.1, 409.6);
  const auto fixed = run_fixed_lambda(fixed_codec, 3.0, 4, 4);
  EXPECT_GT(quality_fluctuation(fixed[0].mses()), 0.0);

  VirtualCodec codec(s, 0.1, 409.6);
  const LambdaGrid grid(0.1, 409.6, 8);
  std::vector<FrameModelSet> models;
  for (std::size_t i = 0; i < 4; ++i) models.push_back(fit_frame_models(oracle_predict(codec, i, 0.0, grid)));
  const EncodeReport ours = run_minigop(models, fixed[0].total_bpp(), codec, 0, 0.0, AllocatorConfig{});
  EXPECT_LT(rate_error(ours.total_bpp(), ours.target_total), 0.01);
}

TEST(FixedLambda, MatchedLambdaHitsTarget) {
  ContentScript s = generate_script(8, 8, 1, 0.1);
  s.noise_sigma = 0.05;
  const double l = matched_fixed_lambda(s, 0.1, 409.6, 4, 0.8);
  VirtualCodec codec(s, 0.1, 409.6);
  EXPECT_NEAR(run_fixed_lambda(codec, l, 4, 4)[0].total_bpp(), 0.8, 1e-9);
  EXPECT_EQ(matched_fixed_lambda(s, 0.1, 409.6, 4, 1e6), 409.6);
}

TEST(Compare, SchemaAndDeterminism) {
  ExperimentConfig cfg = small_config(11);
  const CompareResult a = run_compare(cfg);
  EXPECT_EQ(a.summary.rows.size(), cfg.methods.size() * cfg.targets.size());
  EXPECT_EQ(a.frames.rows.size(), cfg.methods.size() * cfg.targets.size() * 24u);
  EXPECT_EQ(a.minigops.rows.size(), cfg.methods.size() * cfg.targets.size() * 6u);
  for (std::size_t r = 0; r < a.summary.rows.size(); ++r) {
    const std::string m = a.summary.cell(r, "method");
    const double per = a.summary.number(r, "control_invocations_per_minigop");
    EXPECT_EQ(per, m == "multipass" ? 32.0 : 0.0);
  }

  test::TempDir dir;
  write_compare(a, dir.path() / "one");
  write_compare(run_compare(cfg), dir.path() / "two");
  for (const char* f : {"frames.csv", "minigops.csv", "summary.csv", "rate_t0.svg", "mse_t1.svg"}) {
    EXPECT_EQ(slurp(dir.path() / "one" / f), slurp(dir.path() / "two" / f)) << f;
  }
  render_plots(dir.path() / "one", dir.path() / "three");
  EXPECT_EQ(slurp(dir.path() / "one" / "rate_t1.svg"), slurp(dir.path() / "three" / "rate_t1.svg"));
}

TEST(Compare, OracleNoiselessOursHitsTolerance) {
  ExperimentConfig cfg = small_config(12);
  cfg.noise_sigma = 0.0;
  cfg.coupling_gamma = 0.0;
  cfg.methods = {"ours"};
  const CompareResult r = run_compare(cfg);
  std::size_t in_range = 0;
  for (std::size_t i = 0; i < r.minigops.rows.size(); ++i) {
    if (r.minigops.cell(i, "clamp") != "in_range") continue;
    ++in_range;
    EXPECT_LT(r.minigops.number(i, "delta_r"), 0.01);
  }
  EXPECT_GE(in_range, 4u);
}

TEST(Compare, FeaturePredictorRuns) {
  ExperimentConfig cfg = small_config(13);
  cfg.predictor = "feature";
  cfg.methods = {"ours"};
  const CompareResult r = run_compare(cfg);
  EXPECT_EQ(r.summary.rows.size(), 2u);
}

TEST(Compare, UnwritableOutputIsIoError) {
  test::TempDir dir;
  std::ofstream(dir.path() / "file") << "x";
  const CompareResult r = run_compare([] {
    ExperimentConfig c = small_config(1);
    c.methods = {"fixed"};
    c.targets = {0.1};
    return c;
  }());
  try {
    write_compare(r, dir.path() / "file" / "sub");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kIo);
  }
}

TEST(Config, DefaultsAndValidation) {
  ExperimentConfig cfg;
  EXPECT_EQ(cfg.minigop_size, 4);
  EXPECT_EQ(cfg.m, 8);
  EXPECT_EQ(cfg.max_iters, 100);
  EXPECT_DOUBLE_EQ(cfg.tolerance, 0.01);
  EXPECT_EQ(cfg.targets.size(), 3u);
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_THROW(cfg.require_seed(), Error);
  cfg.set("seed", "9");
  EXPECT_EQ(cfg.require_seed(), 9u);
  try {
    cfg.set("m", "1.5");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConfig);
  }
  EXPECT_THROW(cfg.set("nonsense", "1"), Error);
  cfg.set("methods", "ours, uniform");
  EXPECT_EQ(cfg.methods, (std::vector<std::string>{"ours", "uniform"}));
  cfg.set("methods", "bogus");
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(Config, JsonRoundTrip) {
  test::TempDir dir;
  ExperimentConfig cfg = small_config(5);
  cfg.set("targets", "0.05,0.15");
  cfg.set("buffer_policy", "reset");
  cfg.set("onepass_delta_beta", "0.02");
  {
    std::ofstream out(dir.path() / "c.json");
    out << cfg.to_json();
  }
  const ExperimentConfig back = ExperimentConfig::load(dir.path() / "c.json");
  EXPECT_EQ(back.to_json(), cfg.to_json());
  EXPECT_EQ(back.allocator().buffer_policy, BufferPolicy::kResetPerMinigop);
  EXPECT_DOUBLE_EQ(back.onepass.delta_beta, 0.02);
  EXPECT_THROW(ExperimentConfig::from_json("{\"m\": \"x\"}"), Error);
}

TEST(ReportIo, FormatAndCsv) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(parse_double(format_double(1.0 / 3.0)), 1.0 / 3.0);
  EXPECT_THROW(parse_double("1.2x"), Error);
  CsvTable t{{"a", "b"}, {{"1", "x"}, {"2.5", "y"}}};
  const CsvTable back = parse_csv(to_csv(t));
  EXPECT_EQ(back.header, t.header);
  EXPECT_EQ(back.rows, t.rows);
  EXPECT_DOUBLE_EQ(back.number(1, "a"), 2.5);
  EXPECT_EQ(back.cell(0, "b"), "x");
  EXPECT_THROW(back.column("c"), Error);
}

TEST(ReportIo, FrameRowsAndClampFlags) {
  VirtualCodec codec(test::uniform_script({1, 1, 1, -1, false}, 4), 1.0, 4.0);
  const std::vector<FrameModelSet> models(4, FrameModelSet::build({1, 1}, {1, -1}, 1.0, 4.0));
  const EncodeReport high = run_minigop(models, 100.0, codec, 0, 0.0, AllocatorConfig{});
  CsvTable t;
  t.header = kFrameCsvHeader;
  append_frame_rows(t, "seq", {high});
  ASSERT_EQ(t.rows.size(), 4u);
  EXPECT_EQ(t.cell(0, "clamp_flag"), "minigop_high");
  EXPECT_EQ(t.cell(3, "frame_index"), "3");
  EXPECT_EQ(t.number(2, "lambda"), 4.0);
}

TEST(Svg, SelfContained) {
  LinePlot plot{"t<1>", "x", "y", {{"a&b", {0, 1, 2}, {1, 2, 1.5}, false}, {"t", {0, 2}, {1, 1}, true}}};
  const std::string svg = render_svg(plot);
  EXPECT_EQ(svg.rfind("<svg", 0) == 0 || svg.rfind("<?xml", 0) == 0, true);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NE(svg.find("t&lt;1&gt;"), std::string::npos);
  EXPECT_NE(svg.find("a&amp;b"), std::string::npos);
  EXPECT_NE(svg.find("stroke-dasharray"), std::string::npos);
  EXPECT_EQ(svg.find("href"), std::string::npos);
  EXPECT_EQ(svg, render_svg(plot));
}

}  // namespace
}  // namespace lambdarc
