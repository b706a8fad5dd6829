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

#include "lambdarc/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <Eigen/Dense>
#include <json.hpp>

#include "lambdarc/error.hpp"
#include "lambdarc/random.hpp"

namespace lambdarc {

namespace {

constexpr int kTargetHeight = 240;

struct Tap {
  int index;
  double weight;
};

// For each output cell, the source cells it overlaps and their normalized
// overlap weights.
std::vector<std::vector<Tap>> area_taps(int n_in, int n_out) {
  std::vector<std::vector<Tap>> taps(static_cast<std::size_t>(n_out));
  const double scale = static_cast<double>(n_in) / static_cast<double>(n_out);
  for (int o = 0; o < n_out; ++o) {
    const double lo = o * scale;
    const double hi = (o + 1) * scale;
    const int first = static_cast<int>(std::floor(lo));
    const int last = std::min(n_in - 1, static_cast<int>(std::ceil(hi)) - 1);
    for (int i = first; i <= last; ++i) {
      const double overlap = std::min(hi, i + 1.0) - std::max(lo, static_cast<double>(i));
      if (overlap > 0.0) taps[static_cast<std::size_t>(o)].push_back({i, overlap / scale});
    }
  }
  return taps;
}

}  // namespace

Frame downsample_240p(const Frame& frame) {
  if (frame.height() <= kTargetHeight) return frame;

  int out_w = static_cast<int>(std::lround(static_cast<double>(frame.width()) * kTargetHeight /
                                           frame.height()));
  if (out_w % 2 != 0) --out_w;
  out_w = std::max(out_w, 2);
  const int out_h = kTargetHeight;

  const auto col_taps = area_taps(frame.width(), out_w);
  const auto row_taps = area_taps(frame.height(), out_h);

  // Horizontal pass, then vertical.
  std::vector<double> horiz(static_cast<std::size_t>(out_w) * frame.height());
  for (int y = 0; y < frame.height(); ++y) {
    for (int x = 0; x < out_w; ++x) {
      double acc = 0.0;
      for (const Tap& t : col_taps[static_cast<std::size_t>(x)]) acc += t.weight * frame.at(t.index, y);
      horiz[static_cast<std::size_t>(y) * out_w + x] = acc;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(out_w) * out_h);
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      double acc = 0.0;
      for (const Tap& t : row_taps[static_cast<std::size_t>(y)]) {
        acc += t.weight * horiz[static_cast<std::size_t>(t.index) * out_w + x];
      }
      out[static_cast<std::size_t>(y) * out_w + x] = std::clamp(acc, 0.0, 1.0);
    }
  }
  return Frame(out_w, out_h, std::move(out));
}

double distortion_addition_scale(double prev_d_max, double prev_d_min) {
  require(prev_d_min > 0.0 && prev_d_min <= prev_d_max && prev_d_max <= 1.0, ErrorKind::kArgument,
          "distortion addition needs 0 < d_min <= d_max <= 1 (normalized MSE)");
  return std::sqrt(std::log((std::exp(prev_d_max) + std::exp(prev_d_min)) / 2.0));
}

Frame distortion_addition(const Frame& reference, double prev_d_max, double prev_d_min,
                          std::uint64_t seed) {
  const double scale = distortion_addition_scale(prev_d_max, prev_d_min);
  Rng rng(seed);
  std::vector<double> out(reference.samples().begin(), reference.samples().end());
  for (double& s : out) s = std::clamp(s + scale * rng.normal(), 0.0, 1.0);
  return Frame(reference.width(), reference.height(), std::move(out));
}

FeatureVector extract_features(const FramePair& pair) {
  const Frame ref = downsample_240p(pair.reference);
  const Frame cur = downsample_240p(pair.current);
  FeatureVector f;
  double mad = 0.0;
  const auto r = ref.samples();
  const auto c = cur.samples();
  for (std::size_t i = 0; i < c.size(); ++i) mad += std::abs(c[i] - r[i]);
  f.temporal_mad = mad / static_cast<double>(c.size());
  f.spatial_grad = mean_abs_gradient(cur);
  f.log_downsample_ratio =
      std::log(static_cast<double>(pair.current.area()) / static_cast<double>(cur.area()));
  return f;
}

RDSampleSet oracle_predict(const VirtualCodec& codec, std::size_t frame_index, double ref_quality,
                           const LambdaGrid& grid) {
  return codec.ground_truth_samples(frame_index, ref_quality, grid);
}

RDSampleSet OraclePredictor::predict(const PredictionRequest& request,
                                     const LambdaGrid& grid) const {
  return oracle_predict(*codec_, request.frame_index, request.ref_quality, grid);
}

LogParams to_log_params(const FrameModelSet& models) {
  return {std::log(models.r_lambda.alpha), models.r_lambda.beta, std::log(models.d_lambda.alpha),
          models.d_lambda.beta};
}

FeaturePredictor::FeaturePredictor(std::array<double, kTargets> intercept,
                                   std::array<std::array<double, kFeatures>, kTargets> coefficients)
    : intercept_(intercept), coefficients_(coefficients) {
  for (std::size_t t = 0; t < kTargets; ++t) {
    require(std::isfinite(intercept_[t]), ErrorKind::kCalibration, "non-finite intercept");
    for (double c : coefficients_[t]) {
      require(std::isfinite(c), ErrorKind::kCalibration, "non-finite coefficient");
    }
  }
}

LogParams FeaturePredictor::map(const FeatureVector& features) const {
  const auto x = features.as_array();
  LogParams p{};
  for (std::size_t t = 0; t < kTargets; ++t) {
    p[t] = intercept_[t];
    for (std::size_t j = 0; j < kFeatures; ++j) p[t] += coefficients_[t][j] * x[j];
  }
  return p;
}

RDSampleSet FeaturePredictor::predict_from_features(const FeatureVector& features,
                                                    const LambdaGrid& grid) const {
  // Keep extrapolated parameters inside a physically sensible envelope so the
  // sample set stays monotone and finite.
  const LogParams p = map(features);
  const PowerLawModel rate(std::exp(std::clamp(p[0], -30.0, 30.0)), std::clamp(p[1], 0.05, 3.0));
  const PowerLawModel dist(std::exp(std::clamp(p[2], -30.0, 30.0)), std::clamp(p[3], -3.0, -0.05));
  std::vector<double> bpp(grid.size());
  std::vector<double> mse(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    bpp[i] = rate.eval(grid[i]);
    mse[i] = dist.eval(grid[i]);
  }
  return RDSampleSet(grid, std::move(bpp), std::move(mse));
}

RDSampleSet FeaturePredictor::predict(const PredictionRequest& request,
                                      const LambdaGrid& grid) const {
  require(request.pair != nullptr, ErrorKind::kArgument, "feature predictor needs a frame pair");
  return predict_from_features(extract_features(*request.pair), grid);
}

std::string FeaturePredictor::to_json() const {
  nlohmann::ordered_json doc;
  doc["format"] = "lambdarc-feature-predictor";
  doc["version"] = 1;
  doc["features"] = {"temporal_mad", "spatial_grad", "log_downsample_ratio"};
  doc["targets"] = {"ln_alpha1", "beta1", "ln_alpha2", "beta2"};
  doc["intercept"] = intercept_;
  doc["coefficients"] = coefficients_;
  return doc.dump(2) + "\n";
}

FeaturePredictor FeaturePredictor::from_json(const std::string& text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    if (doc.at("format").get<std::string>() != "lambdarc-feature-predictor") {
      fail(ErrorKind::kParse, "not a lambdarc feature predictor file");
    }
    return FeaturePredictor(doc.at("intercept").get<std::array<double, kTargets>>(),
                            doc.at("coefficients")
                                .get<std::array<std::array<double, kFeatures>, kTargets>>());
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kParse, std::string("malformed predictor parameters: ") + e.what());
  }
}

void FeaturePredictor::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::kIo, "cannot write " + path.string());
  out << to_json();
}

FeaturePredictor FeaturePredictor::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::kIo, "cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return from_json(text.str());
}

FeaturePredictor calibrate_feature_predictor(std::span<const TrainingExample> training) {
  constexpr std::size_t kMinRows = 8;
  require(training.size() >= kMinRows, ErrorKind::kCalibration,
          "calibration needs at least 8 training pairs, got " + std::to_string(training.size()));

  const auto rows = static_cast<Eigen::Index>(training.size());
  std::vector<std::size_t> active;
  for (std::size_t j = 0; j < FeaturePredictor::kFeatures; ++j) {
    double lo = training.front().features.as_array()[j];
    double hi = lo;
    for (const TrainingExample& ex : training) {
      const double v = ex.features.as_array()[j];
      require(std::isfinite(v), ErrorKind::kCalibration, "non-finite training feature");
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > 1e-12 * std::max(1.0, std::abs(hi))) active.push_back(j);
  }
  require(!active.empty(), ErrorKind::kCalibration,
          "rank-deficient feature matrix: every feature is constant");

  const auto cols = static_cast<Eigen::Index>(active.size() + 1);
  Eigen::MatrixXd design(rows, cols);
  Eigen::MatrixXd targets(rows, static_cast<Eigen::Index>(FeaturePredictor::kTargets));
  for (Eigen::Index r = 0; r < rows; ++r) {
    const TrainingExample& ex = training[static_cast<std::size_t>(r)];
    const auto x = ex.features.as_array();
    design(r, 0) = 1.0;
    for (std::size_t a = 0; a < active.size(); ++a) {
      design(r, static_cast<Eigen::Index>(a + 1)) = x[active[a]];
    }
    const LogParams p = to_log_params(ex.models);
    for (std::size_t t = 0; t < FeaturePredictor::kTargets; ++t) {
      targets(r, static_cast<Eigen::Index>(t)) = p[t];
    }
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  require(qr.rank() == cols, ErrorKind::kCalibration, "rank-deficient feature matrix");
  const Eigen::MatrixXd solution = qr.solve(targets);

  std::array<double, FeaturePredictor::kTargets> intercept{};
  std::array<std::array<double, FeaturePredictor::kFeatures>, FeaturePredictor::kTargets> coef{};
  for (std::size_t t = 0; t < FeaturePredictor::kTargets; ++t) {
    intercept[t] = solution(0, static_cast<Eigen::Index>(t));
    for (std::size_t a = 0; a < active.size(); ++a) {
      coef[t][active[a]] = solution(static_cast<Eigen::Index>(a + 1), static_cast<Eigen::Index>(t));
    }
  }
  return FeaturePredictor(intercept, coef);
}

PredictionError prediction_mae(const RDSampleSet& predicted, const RDSampleSet& actual) {
  require(predicted.grid == actual.grid, ErrorKind::kArgument,
          "prediction_mae needs identical lambda grids");
  PredictionError err{0.0, 0.0};
  const std::size_t m = predicted.grid.size();
  for (std::size_t i = 0; i < m; ++i) {
    err.l_r += std::abs(predicted.bpp[i] - actual.bpp[i]);
    err.l_d += std::abs(predicted.mse[i] - actual.mse[i]);
  }
  err.l_r /= static_cast<double>(m);
  err.l_d /= static_cast<double>(m);
  return err;
}

FrameModelSet fit_frame_models(const RDSampleSet& raw) {
  const RDSampleSet samples = repair_monotone(raw);
  std::vector<LambdaSample> rate;
  std::vector<LambdaSample> dist;
  for (std::size_t i = 0; i < samples.grid.size(); ++i) {
    rate.push_back({samples.grid[i], samples.bpp[i]});
    dist.push_back({samples.grid[i], samples.mse[i]});
  }
  return FrameModelSet::build(fit_power_law(rate), fit_power_law(dist),
                              samples.grid.lambda_min(), samples.grid.lambda_max());
}

}  // namespace lambdarc
