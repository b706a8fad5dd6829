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

#include "lambdarc/codec_sim.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lambdarc/error.hpp"

namespace lambdarc {

void FrameTruth::validate() const {
  require(alpha1 > 0.0 && beta1 > 0.0 && alpha2 > 0.0 && beta2 < 0.0 && std::isfinite(alpha1) &&
              std::isfinite(beta1) && std::isfinite(alpha2) && std::isfinite(beta2),
          ErrorKind::kArgument, "frame truth needs alpha1, beta1, alpha2 > 0 and beta2 < 0");
}

void ContentScript::validate() const {
  require(!truths.empty(), ErrorKind::kArgument, "content script must hold at least one frame");
  require(coupling_gamma >= 0.0 && noise_sigma >= 0.0, ErrorKind::kArgument,
          "coupling gamma and noise sigma must be non-negative");
  for (const FrameTruth& t : truths) t.validate();
}

namespace {

double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(rng.uniform(std::log(lo), std::log(hi)));
}

}  // namespace

ContentScript generate_script(std::uint64_t seed, int n_frames, int n_scenes, double drift,
                              const ScriptRanges& ranges) {
  require(n_scenes >= 1 && n_frames >= n_scenes, ErrorKind::kArgument,
          "generate_script needs n_frames >= n_scenes >= 1");
  require(drift >= 0.0 && std::isfinite(drift), ErrorKind::kArgument,
          "drift must be finite and non-negative");

  ContentScript script;
  script.seed = seed;
  script.truths.reserve(static_cast<std::size_t>(n_frames));
  Rng walk(derive_seed(seed, 0xD21F7));

  for (int scene = 0; scene < n_scenes; ++scene) {
    const int begin = static_cast<int>(static_cast<long long>(scene) * n_frames / n_scenes);
    const int end = static_cast<int>(static_cast<long long>(scene + 1) * n_frames / n_scenes);
    Rng base(derive_seed(seed, 0x5CE7E000ULL + static_cast<std::uint64_t>(scene)));
    double ln_a1 = std::log(log_uniform(base, ranges.alpha1_lo, ranges.alpha1_hi));
    double ln_b1 = std::log(log_uniform(base, ranges.beta1_lo, ranges.beta1_hi));
    double ln_a2 = std::log(log_uniform(base, ranges.alpha2_lo, ranges.alpha2_hi));
    double ln_b2 = std::log(log_uniform(base, ranges.beta2_mag_lo, ranges.beta2_mag_hi));

    for (int f = begin; f < end; ++f) {
      if (f > begin) {
        ln_a1 += drift * walk.normal();
        ln_b1 += drift * walk.normal();
        ln_a2 += drift * walk.normal();
        ln_b2 += drift * walk.normal();
      }
      FrameTruth t;
      t.alpha1 = std::exp(ln_a1);
      t.beta1 = std::exp(ln_b1);
      t.alpha2 = std::exp(ln_a2);
      t.beta2 = -std::exp(ln_b2);
      t.is_scene_change = (f == begin && scene > 0);
      script.truths.push_back(t);
    }
  }
  return script;
}

std::string script_to_json(const ContentScript& script) {
  nlohmann::ordered_json doc;
  doc["format"] = "lambdarc-script";
  doc["version"] = 1;
  doc["seed"] = script.seed;
  doc["coupling_gamma"] = script.coupling_gamma;
  doc["noise_sigma"] = script.noise_sigma;
  auto& frames = doc["frames"] = nlohmann::ordered_json::array();
  for (const FrameTruth& t : script.truths) {
    frames.push_back({{"alpha1", t.alpha1},
                      {"beta1", t.beta1},
                      {"alpha2", t.alpha2},
                      {"beta2", t.beta2},
                      {"scene_change", t.is_scene_change}});
  }
  return doc.dump(2) + "\n";
}

ContentScript script_from_json(const std::string& text) {
  ContentScript script;
  try {
    const auto doc = nlohmann::json::parse(text);
    if (doc.at("format").get<std::string>() != "lambdarc-script") {
      fail(ErrorKind::kParse, "not a lambdarc script file");
    }
    script.seed = doc.at("seed").get<std::uint64_t>();
    script.coupling_gamma = doc.at("coupling_gamma").get<double>();
    script.noise_sigma = doc.at("noise_sigma").get<double>();
    for (const auto& f : doc.at("frames")) {
      FrameTruth t;
      t.alpha1 = f.at("alpha1").get<double>();
      t.beta1 = f.at("beta1").get<double>();
      t.alpha2 = f.at("alpha2").get<double>();
      t.beta2 = f.at("beta2").get<double>();
      t.is_scene_change = f.value("scene_change", false);
      script.truths.push_back(t);
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kParse, std::string("malformed script: ") + e.what());
  }
  script.validate();
  return script;
}

void save_script(const ContentScript& script, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::kIo, "cannot write " + path.string());
  out << script_to_json(script);
  require(static_cast<bool>(out), ErrorKind::kIo, "write failed for " + path.string());
}

ContentScript load_script(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::kIo, "cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return script_from_json(text.str());
}

Sequence render_script_frames(const ContentScript& script, int width, int height,
                              double frame_rate) {
  script.validate();
  constexpr double kAlpha1Floor = 0.05;
  constexpr double kPhaseStep = 0.5;

  std::vector<Frame> frames;
  frames.reserve(script.size());
  std::uint64_t scene = 0;
  double phase = 0.0;
  for (std::size_t i = 0; i < script.size(); ++i) {
    const FrameTruth& t = script.truths[i];
    if (t.is_scene_change) {
      ++scene;
      phase = 0.0;
    } else if (i > 0) {
      phase += kPhaseStep;
    }
    const double energy = std::max(0.0, std::log(t.alpha1 / kAlpha1Floor));
    frames.push_back(synth_frame(width, height, energy, phase,
                                 derive_seed(script.seed, 0xF4A3E000ULL + scene)));
  }
  return Sequence(std::move(frames), frame_rate);
}

VirtualCodec::VirtualCodec(ContentScript script, double lambda_min, double lambda_max,
                           std::uint64_t stream)
    : script_(std::move(script)),
      lambda_min_(lambda_min),
      lambda_max_(lambda_max),
      rng_(derive_seed(script_.seed, 0xC0DEC000ULL + stream)) {
  script_.validate();
  require(lambda_min > 0.0 && lambda_min < lambda_max, ErrorKind::kArgument,
          "codec lambda range needs 0 < lambda_min < lambda_max");
}

void VirtualCodec::check_index(std::size_t frame_index) const {
  require(frame_index < script_.size(), ErrorKind::kArgument,
          "frame index " + std::to_string(frame_index) + " outside script of length " +
              std::to_string(script_.size()));
}

EncodeResult VirtualCodec::expected(std::size_t frame_index, double lambda, double ref_mse) const {
  check_index(frame_index);
  require(lambda > 0.0, ErrorKind::kArgument, "lambda must be positive");
  require(ref_mse >= 0.0 && std::isfinite(ref_mse), ErrorKind::kArgument,
          "reference MSE must be finite and non-negative");
  const FrameTruth& t = script_.truths[frame_index];
  const double coupling = 1.0 + script_.coupling_gamma * ref_mse;
  return {t.alpha1 * std::pow(lambda, t.beta1) * coupling,
          t.alpha2 * std::pow(lambda, t.beta2) * coupling};
}

EncodeResult VirtualCodec::encode_frame(std::size_t frame_index, double lambda, double ref_mse) {
  if (!(lambda >= lambda_min_ && lambda <= lambda_max_)) {
    fail(ErrorKind::kRange, "lambda " + std::to_string(lambda) + " outside codec range [" +
                                std::to_string(lambda_min_) + ", " + std::to_string(lambda_max_) +
                                "]");
  }
  EncodeResult r = expected(frame_index, lambda, ref_mse);
  // Both draws happen unconditionally so the stream position depends only
  // on the number of calls.
  const double rate_noise = rng_.normal();
  const double dist_noise = rng_.normal();
  r.bpp *= std::exp(script_.noise_sigma * rate_noise);
  r.mse *= std::exp(script_.noise_sigma * dist_noise);
  ++invocations_;
  return r;
}

RDSampleSet VirtualCodec::ground_truth_samples(std::size_t frame_index, double ref_mse,
                                               const LambdaGrid& grid) const {
  std::vector<double> bpp(grid.size());
  std::vector<double> mse(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const EncodeResult r = expected(frame_index, grid[i], ref_mse);
    bpp[i] = r.bpp;
    mse[i] = r.mse;
  }
  return RDSampleSet(grid, std::move(bpp), std::move(mse));
}

}  // namespace lambdarc
