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

#include "lambdarc/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lambdarc/error.hpp"
#include "lambdarc/report_io.hpp"

namespace lambdarc {

namespace {

using Json = nlohmann::ordered_json;

void check(bool cond, const std::string& what) { require(cond, ErrorKind::kConfig, what); }

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_number(const std::string& key, const std::string& value) {
  try {
    return parse_double(value);
  } catch (const Error&) {
    fail(ErrorKind::kConfig, "config field '" + key + "' expects a number, got '" + value + "'");
  }
}

int to_int(const std::string& key, const std::string& value) {
  const double v = to_number(key, value);
  check(std::floor(v) == v && std::abs(v) < 1e9,
        "config field '" + key + "' expects an integer, got '" + value + "'");
  return static_cast<int>(v);
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  fail(ErrorKind::kConfig, "config field '" + key + "' expects a boolean, got '" + value + "'");
}

}  // namespace

void ExperimentConfig::validate() const {
  check(n_frames >= 1, "n_frames must be at least 1");
  check(n_scenes >= 1 && n_scenes <= n_frames, "n_scenes must lie in [1, n_frames]");
  check(drift >= 0.0 && std::isfinite(drift), "drift must be non-negative");
  check(noise_sigma >= 0.0 && std::isfinite(noise_sigma), "noise_sigma must be non-negative");
  check(coupling_gamma >= 0.0 && std::isfinite(coupling_gamma),
        "coupling_gamma must be non-negative");
  check(lambda_min > 0.0 && lambda_min < lambda_max && std::isfinite(lambda_max),
        "lambda range must satisfy 0 < lambda_min < lambda_max");
  check(m >= 2, "m (grid size) must be at least 2");
  check(minigop_size >= 1, "minigop_size must be at least 1");
  check(n_frames >= minigop_size, "n_frames must cover at least one mini-GOP");
  allocator().validate();
  check(!targets.empty(), "at least one target bpp is required");
  for (double t : targets) check(t > 0.0 && std::isfinite(t), "target bpp must be positive");
  check(predictor == "oracle" || predictor == "feature", "predictor must be oracle or feature");
  check(!methods.empty(), "at least one method is required");
  for (const auto& m : methods) {
    check(std::find(kKnownMethods.begin(), kKnownMethods.end(), m) != kKnownMethods.end(),
          "unknown method '" + m + "'");
  }
  check(buffer_policy == "persist" || buffer_policy == "reset",
        "buffer_policy must be persist or reset");
  check(width >= 16 && height >= 16, "frame width and height must be at least 16");
  check(frame_rate > 0.0, "frame_rate must be positive");
  check(training_frames >= 9, "training_frames must be at least 9");
  check(onepass.alpha_lo > 0.0 && onepass.alpha_lo < onepass.alpha_hi,
        "one-pass alpha clip bounds invalid");
  check(onepass.beta_lo > 0.0 && onepass.beta_lo < onepass.beta_hi,
        "one-pass beta clip bounds invalid");
  check(onepass.alpha >= onepass.alpha_lo && onepass.alpha <= onepass.alpha_hi &&
            onepass.beta >= onepass.beta_lo && onepass.beta <= onepass.beta_hi,
        "one-pass initial parameters outside clip bounds");
  check(onepass.delta_alpha > 0.0 && onepass.delta_beta > 0.0,
        "one-pass learning rates must be positive");
}

std::uint64_t ExperimentConfig::require_seed() const {
  check(seed.has_value(), "a seed is required for reproducibility (--seed)");
  return *seed;
}

AllocatorConfig ExperimentConfig::allocator() const {
  AllocatorConfig cfg;
  cfg.max_iters = max_iters;
  cfg.tolerance = tolerance;
  cfg.minigop_size = minigop_size;
  cfg.buffer_policy =
      buffer_policy == "reset" ? BufferPolicy::kResetPerMinigop : BufferPolicy::kPersist;
  return cfg;
}

LambdaGrid ExperimentConfig::grid() const { return LambdaGrid(lambda_min, lambda_max, m); }

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  if (key == "seed") {
    const double v = to_number(key, value);
    check(v >= 0 && std::floor(v) == v, "seed must be a non-negative integer");
    seed = std::stoull(value);
  } else if (key == "n_frames") {
    n_frames = to_int(key, value);
  } else if (key == "n_scenes") {
    n_scenes = to_int(key, value);
  } else if (key == "drift") {
    drift = to_number(key, value);
  } else if (key == "noise_sigma") {
    noise_sigma = to_number(key, value);
  } else if (key == "coupling_gamma") {
    coupling_gamma = to_number(key, value);
  } else if (key == "lambda_min") {
    lambda_min = to_number(key, value);
  } else if (key == "lambda_max") {
    lambda_max = to_number(key, value);
  } else if (key == "m") {
    m = to_int(key, value);
  } else if (key == "minigop_size") {
    minigop_size = to_int(key, value);
  } else if (key == "max_iters") {
    max_iters = to_int(key, value);
  } else if (key == "tolerance") {
    tolerance = to_number(key, value);
  } else if (key == "targets") {
    targets.clear();
    for (const auto& item : split_list(value)) targets.push_back(to_number(key, item));
  } else if (key == "predictor") {
    predictor = value;
  } else if (key == "methods") {
    methods = split_list(value);
  } else if (key == "buffer_policy") {
    buffer_policy = value;
  } else if (key == "fluctuation_all_minigops") {
    fluctuation_all_minigops = to_bool(key, value);
  } else if (key == "width") {
    width = to_int(key, value);
  } else if (key == "height") {
    height = to_int(key, value);
  } else if (key == "frame_rate") {
    frame_rate = to_number(key, value);
  } else if (key == "training_frames") {
    training_frames = to_int(key, value);
  } else if (key == "predictor_params") {
    predictor_params = value;
  } else if (key == "onepass_alpha") {
    onepass.alpha = to_number(key, value);
  } else if (key == "onepass_beta") {
    onepass.beta = to_number(key, value);
  } else if (key == "onepass_delta_alpha") {
    onepass.delta_alpha = to_number(key, value);
  } else if (key == "onepass_delta_beta") {
    onepass.delta_beta = to_number(key, value);
  } else {
    fail(ErrorKind::kConfig, "unknown config field '" + key + "'");
  }
}

std::string ExperimentConfig::to_json() const {
  Json doc;
  if (seed) doc["seed"] = *seed;
  doc["n_frames"] = n_frames;
  doc["n_scenes"] = n_scenes;
  doc["drift"] = drift;
  doc["noise_sigma"] = noise_sigma;
  doc["coupling_gamma"] = coupling_gamma;
  doc["lambda_min"] = lambda_min;
  doc["lambda_max"] = lambda_max;
  doc["m"] = m;
  doc["minigop_size"] = minigop_size;
  doc["max_iters"] = max_iters;
  doc["tolerance"] = tolerance;
  doc["targets"] = targets;
  doc["predictor"] = predictor;
  doc["methods"] = methods;
  doc["buffer_policy"] = buffer_policy;
  doc["fluctuation_all_minigops"] = fluctuation_all_minigops;
  doc["width"] = width;
  doc["height"] = height;
  doc["frame_rate"] = frame_rate;
  doc["training_frames"] = training_frames;
  doc["predictor_params"] = predictor_params;
  doc["onepass_alpha"] = onepass.alpha;
  doc["onepass_beta"] = onepass.beta;
  doc["onepass_delta_alpha"] = onepass.delta_alpha;
  doc["onepass_delta_beta"] = onepass.delta_beta;
  return doc.dump(2) + "\n";
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  ExperimentConfig cfg;
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kConfig, std::string("malformed config file: ") + e.what());
  }
  check(doc.is_object(), "config file must hold a JSON object");
  for (const auto& [key, value] : doc.items()) {
    std::string text_value;
    if (value.is_array()) {
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (i) text_value += ',';
        text_value += value[i].is_string() ? value[i].get<std::string>()
                                           : format_double(value[i].get<double>());
      }
    } else if (value.is_string()) {
      text_value = value.get<std::string>();
    } else if (value.is_boolean()) {
      text_value = value.get<bool>() ? "true" : "false";
    } else if (value.is_number_unsigned()) {
      text_value = std::to_string(value.get<std::uint64_t>());
    } else if (value.is_number_integer()) {
      text_value = std::to_string(value.get<std::int64_t>());
    } else if (value.is_number()) {
      text_value = format_double(value.get<double>());
    } else {
      fail(ErrorKind::kConfig, "config field '" + key + "' has an unsupported type");
    }
    cfg.set(key, text_value);
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::kConfig, "cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return from_json(text.str());
}

}  // namespace lambdarc
