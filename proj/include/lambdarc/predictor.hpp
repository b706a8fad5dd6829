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

#ifndef LAMBDARC_PREDICTOR_HPP
#define LAMBDARC_PREDICTOR_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lambdarc/codec_sim.hpp"
#include "lambdarc/frameio.hpp"
#include "lambdarc/lambda_grid.hpp"
#include "lambdarc/rdmodel.hpp"

namespace lambdarc {

// Area-average resample to 240 lines; width follows the aspect ratio and is
// forced even. Frames at or below 240 lines pass through.
Frame downsample_240p(const Frame& frame);

// Standard deviation of the Gaussian field injected into an uncompressed
// reference, from the extremes of the previous pair's predicted distortion.
double distortion_addition_scale(double prev_d_max, double prev_d_min);

// reference + N(0,1) * scale per pixel, clamped to [0, 1].
Frame distortion_addition(const Frame& reference, double prev_d_max, double prev_d_min,
                          std::uint64_t seed);

struct FeatureVector {
  double temporal_mad = 0.0;
  double spatial_grad = 0.0;
  double log_downsample_ratio = 0.0;

  std::array<double, 3> as_array() const { return {temporal_mad, spatial_grad, log_downsample_ratio}; }
};

FeatureVector extract_features(const FramePair& pair);

// Everything a predictor may look at for one frame. Oracle predictors read
// the index and reference-quality estimate; content predictors read the
// (already distortion-added) pair.
struct PredictionRequest {
  std::size_t frame_index = 0;
  double ref_quality = 0.0;
  const FramePair* pair = nullptr;
};

class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual RDSampleSet predict(const PredictionRequest& request, const LambdaGrid& grid) const = 0;
  virtual std::string name() const = 0;
  virtual bool needs_frames() const { return false; }
};

RDSampleSet oracle_predict(const VirtualCodec& codec, std::size_t frame_index, double ref_quality,
                           const LambdaGrid& grid);

// Ground truth read straight from the simulator; never encodes.
class OraclePredictor final : public Predictor {
 public:
  explicit OraclePredictor(const VirtualCodec& codec) : codec_(&codec) {}

  RDSampleSet predict(const PredictionRequest& request, const LambdaGrid& grid) const override;
  std::string name() const override { return "oracle"; }

 private:
  const VirtualCodec* codec_;
};

// Log-domain parameter vector (ln a1, b1, ln a2, b2).
using LogParams = std::array<double, 4>;

LogParams to_log_params(const FrameModelSet& models);

struct TrainingExample {
  FeatureVector features;
  FrameModelSet models;
};

// Linear map from features to log-domain power-law parameters.
class FeaturePredictor final : public Predictor {
 public:
  static constexpr std::size_t kFeatures = 3;
  static constexpr std::size_t kTargets = 4;

  FeaturePredictor(std::array<double, kTargets> intercept,
                   std::array<std::array<double, kFeatures>, kTargets> coefficients);

  LogParams map(const FeatureVector& features) const;
  RDSampleSet predict_from_features(const FeatureVector& features, const LambdaGrid& grid) const;

  RDSampleSet predict(const PredictionRequest& request, const LambdaGrid& grid) const override;
  std::string name() const override { return "feature"; }
  bool needs_frames() const override { return true; }

  const std::array<double, kTargets>& intercept() const { return intercept_; }
  const std::array<std::array<double, kFeatures>, kTargets>& coefficients() const {
    return coefficients_;
  }

  std::string to_json() const;
  static FeaturePredictor from_json(const std::string& text);
  void save(const std::filesystem::path& path) const;
  static FeaturePredictor load(const std::filesystem::path& path);

 private:
  std::array<double, kTargets> intercept_;
  std::array<std::array<double, kFeatures>, kTargets> coefficients_;
};

// OLS per target. Feature columns with zero variance over the training set
// are dropped (coefficient 0); an all-constant or rank-deficient design is a
// calibration error.
FeaturePredictor calibrate_feature_predictor(std::span<const TrainingExample> training);

struct PredictionError {
  double l_r;  // mean |bpp_pred - bpp_real|
  double l_d;  // mean |mse_pred - mse_real|
};

PredictionError prediction_mae(const RDSampleSet& predicted, const RDSampleSet& actual);

// Least-squares R-lambda and D-lambda fits over a (repaired) sample set.
FrameModelSet fit_frame_models(const RDSampleSet& samples);

}  // namespace lambdarc

#endif  // LAMBDARC_PREDICTOR_HPP
