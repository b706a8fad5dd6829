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

#ifndef LAMBDARC_CONFIG_HPP
#define LAMBDARC_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lambdarc/allocator.hpp"

namespace lambdarc {

struct OnePassParams {
  double alpha = 0.2;
  double beta = 0.6;
  double delta_alpha = 0.1;
  double delta_beta = 0.05;
  double alpha_lo = 1e-4, alpha_hi = 10.0;
  double beta_lo = 0.05, beta_hi = 3.0;
};

struct ExperimentConfig {
  std::optional<std::uint64_t> seed;
  int n_frames = 400;
  int n_scenes = 4;
  double drift = 0.05;
  double noise_sigma = 0.05;
  double coupling_gamma = 0.3;
  double lambda_min = 0.1;
  double lambda_max = 409.6;
  int m = 8;
  int minigop_size = 4;
  int max_iters = 100;
  double tolerance = 0.01;
  std::vector<double> targets = {0.1, 0.2, 0.4};  // average bpp per frame
  std::string predictor = "oracle";               // oracle | feature
  std::vector<std::string> methods = {"ours", "multipass", "onepass", "fixed"};
  std::string buffer_policy = "persist";          // persist | reset
  bool fluctuation_all_minigops = false;
  int width = 416;
  int height = 240;
  double frame_rate = 30.0;
  int training_frames = 64;
  std::string predictor_params;  // optional calibrated feature predictor file
  OnePassParams onepass;

  // Throws ErrorKind::kConfig on any out-of-range field.
  void validate() const;
  std::uint64_t require_seed() const;

  AllocatorConfig allocator() const;
  LambdaGrid grid() const;

  // key uses the JSON field name; list values are comma separated.
  void set(const std::string& key, const std::string& value);

  std::string to_json() const;
  static ExperimentConfig from_json(const std::string& text);
  static ExperimentConfig load(const std::filesystem::path& path);
};

inline const std::vector<std::string> kKnownMethods = {"ours", "multipass", "onepass", "fixed",
                                                        "uniform"};

}  // namespace lambdarc

#endif  // LAMBDARC_CONFIG_HPP
