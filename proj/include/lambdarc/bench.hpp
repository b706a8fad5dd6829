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

#ifndef LAMBDARC_BENCH_HPP
#define LAMBDARC_BENCH_HPP

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "lambdarc/allocator.hpp"
#include "lambdarc/codec_sim.hpp"
#include "lambdarc/config.hpp"
#include "lambdarc/predictor.hpp"
#include "lambdarc/report_io.hpp"

namespace lambdarc {

// Pre-encodes every frame of the mini-GOP at all grid lambdas, fits the
// measured points, then allocates and encodes exactly like run_minigop.
// Costs count * grid.size() control-path encodes.
EncodeReport run_multipass(VirtualCodec& codec, const LambdaGrid& grid, std::size_t start_index,
                           std::size_t count, double r_tar, const AllocatorConfig& cfg,
                           BufferState& buffer, double ref_mse);

std::vector<EncodeReport> run_multipass_sequence(VirtualCodec& codec, const LambdaGrid& grid,
                                                 double target_bpp, const AllocatorConfig& cfg);

// Empirical R-lambda controller with online log-domain updates. A stand-in
// for classic one-pass schemes; constants come from OnePassParams.
class OnePassState {
 public:
  explicit OnePassState(const OnePassParams& params = {});

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  const OnePassParams& params() const { return params_; }

  double lambda_for(double budget, double lambda_min, double lambda_max, LambdaClamp& clamp) const;
  // Moves (ln alpha, beta) toward the observed point, then clips.
  void update(double lambda, double observed_bpp);

 private:
  OnePassParams params_;
  double alpha_;
  double beta_;
};

EncodeReport run_onepass(VirtualCodec& codec, std::size_t start_index, std::size_t count,
                         double r_tar, OnePassState& state, BufferState& buffer, double ref_mse);

std::vector<EncodeReport> run_onepass_sequence(VirtualCodec& codec, double target_bpp,
                                               const AllocatorConfig& cfg, OnePassState& state);

// Constant lambda for every frame, grouped into mini-GOP-sized reports.
// target_bpp only fills report targets for error bookkeeping.
std::vector<EncodeReport> run_fixed_lambda(VirtualCodec& codec, double lambda,
                                           std::size_t n_frames, int minigop_size,
                                           double target_bpp = 0.0);

// Lambda at which fixed-lambda coding of the first `frames` frames (fresh
// codec, same noise stream) spends target_total; clamped to the range.
double matched_fixed_lambda(const ContentScript& script, double lambda_min, double lambda_max,
                            std::size_t frames, double target_total);

// Fits a feature predictor on a training script derived from `seed`.
FeaturePredictor calibrate_from_simulation(const ExperimentConfig& cfg, std::uint64_t seed);

ContentScript make_script(const ExperimentConfig& cfg, std::size_t n_frames);

struct MethodRun {
  std::string method;
  double target_bpp = 0.0;
  double fixed_lambda = 0.0;  // set for "fixed"
  std::vector<EncodeReport> reports;
};

// Runs one method over a script. `frames` is needed by the feature
// predictor; `feature` may be null for other predictors.
MethodRun run_method(const ExperimentConfig& cfg, const ContentScript& script,
                     const Sequence* frames, const FeaturePredictor* feature,
                     const std::string& method, double target_bpp, double fixed_lambda = 0.0);

struct RunSummary {
  std::size_t minigops = 0;
  double target_total = 0.0;
  double actual_total = 0.0;
  double mean_delta_r = 0.0;
  double max_delta_r = 0.0;
  double cumulative_delta_r = 0.0;
  std::uint64_t encode_invocations = 0;
  std::uint64_t control_invocations = 0;
  double control_seconds = 0.0;
  double encode_seconds = 0.0;
};

RunSummary summarize(const std::vector<EncodeReport>& reports);

struct CompareResult {
  CsvTable frames;
  CsvTable minigops;
  CsvTable summary;
  CsvTable timing;  // wall-clock; not reproducible
  std::vector<MethodRun> runs;
};

CompareResult run_compare(const ExperimentConfig& cfg);

// frames.csv, minigops.csv, summary.csv, timing.csv and SVG plots.
void write_compare(const CompareResult& result, const std::filesystem::path& out_dir);

// Re-renders the SVGs from minigops.csv and frames.csv in in_dir.
void render_plots(const std::filesystem::path& in_dir, const std::filesystem::path& out_dir);

}  // namespace lambdarc

#endif  // LAMBDARC_BENCH_HPP
