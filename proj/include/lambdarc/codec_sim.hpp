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

#ifndef LAMBDARC_CODEC_SIM_HPP
#define LAMBDARC_CODEC_SIM_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lambdarc/frameio.hpp"
#include "lambdarc/lambda_grid.hpp"
#include "lambdarc/random.hpp"

namespace lambdarc {

// Ground-truth R-lambda / D-lambda parameters of one simulated frame.
struct FrameTruth {
  double alpha1 = 0.1;
  double beta1 = 0.5;
  double alpha2 = 0.05;
  double beta2 = -0.8;
  bool is_scene_change = false;

  void validate() const;
  bool operator==(const FrameTruth&) const = default;
};

struct ContentScript {
  std::vector<FrameTruth> truths;
  std::uint64_t seed = 0;
  double coupling_gamma = 0.3;
  double noise_sigma = 0.0;

  std::size_t size() const noexcept { return truths.size(); }
  void validate() const;
  bool operator==(const ContentScript&) const = default;
};

// Log-uniform sampling ranges for per-scene base parameters. beta2 is drawn
// by magnitude.
struct ScriptRanges {
  double alpha1_lo = 0.05, alpha1_hi = 0.5;
  double beta1_lo = 0.3, beta1_hi = 0.8;
  double alpha2_lo = 0.01, alpha2_hi = 0.2;
  double beta2_mag_lo = 0.4, beta2_mag_hi = 1.2;
};

ContentScript generate_script(std::uint64_t seed, int n_frames, int n_scenes, double drift,
                              const ScriptRanges& ranges = {});

// Scripts round-trip through JSON with full double precision.
void save_script(const ContentScript& script, const std::filesystem::path& path);
ContentScript load_script(const std::filesystem::path& path);
std::string script_to_json(const ContentScript& script);
ContentScript script_from_json(const std::string& text);

// Pixel frames whose texture energy tracks alpha1, for the feature path.
Sequence render_script_frames(const ContentScript& script, int width, int height,
                              double frame_rate = 30.0);

struct EncodeResult {
  double bpp;
  double mse;
};

// Parametric stand-in for a variable-rate learned codec. Each encode call
// draws one lognormal factor for rate and one for distortion from a stream
// seeded by (script seed, stream id); prediction-side queries do not touch
// the stream or the invocation counter.
class VirtualCodec {
 public:
  VirtualCodec(ContentScript script, double lambda_min, double lambda_max,
               std::uint64_t stream = 0);

  EncodeResult encode_frame(std::size_t frame_index, double lambda, double ref_mse);

  // Noiseless (bpp*, mse*) at every grid lambda.
  RDSampleSet ground_truth_samples(std::size_t frame_index, double ref_mse,
                                   const LambdaGrid& grid) const;
  EncodeResult expected(std::size_t frame_index, double lambda, double ref_mse) const;

  const ContentScript& script() const noexcept { return script_; }
  std::size_t size() const noexcept { return script_.size(); }
  double lambda_min() const noexcept { return lambda_min_; }
  double lambda_max() const noexcept { return lambda_max_; }
  std::uint64_t invocation_count() const noexcept { return invocations_; }

 private:
  void check_index(std::size_t frame_index) const;

  ContentScript script_;
  double lambda_min_;
  double lambda_max_;
  std::uint64_t invocations_ = 0;
  Rng rng_;
};

}  // namespace lambdarc

#endif  // LAMBDARC_CODEC_SIM_HPP
