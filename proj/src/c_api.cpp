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

#include "lambdarc/lambdarc.h"

#include <cstring>
#include <exception>
#include <map>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "lambdarc/bench.hpp"
#include "lambdarc/codec_sim.hpp"
#include "lambdarc/config.hpp"
#include "lambdarc/error.hpp"
#include "lambdarc/frameio.hpp"
#include "lambdarc/metrics.hpp"
#include "lambdarc/random.hpp"
#include "lambdarc/rdmodel.hpp"
#include "lambdarc/report_io.hpp"

struct lrc_config {
  lambdarc::ExperimentConfig cfg;
};

struct lrc_script {
  lambdarc::ContentScript script;
};

struct lrc_sequence {
  lambdarc::Sequence seq;
};

namespace {

thread_local std::string g_last_error;

lrc_status to_status(lambdarc::ErrorKind kind) {
  using lambdarc::ErrorKind;
  switch (kind) {
    case ErrorKind::kArgument: return LRC_ERR_ARGUMENT;
    case ErrorKind::kParse: return LRC_ERR_PARSE;
    case ErrorKind::kTruncation: return LRC_ERR_TRUNCATED;
    case ErrorKind::kIo: return LRC_ERR_IO;
    case ErrorKind::kFit: return LRC_ERR_FIT;
    case ErrorKind::kNonInvertible: return LRC_ERR_NON_INVERTIBLE;
    case ErrorKind::kModelShape: return LRC_ERR_MODEL_SHAPE;
    case ErrorKind::kRange: return LRC_ERR_RANGE;
    case ErrorKind::kInfeasibleBracket: return LRC_ERR_INFEASIBLE_BRACKET;
    case ErrorKind::kCalibration: return LRC_ERR_CALIBRATION;
    case ErrorKind::kConfig: return LRC_ERR_CONFIG;
  }
  return LRC_ERR_INTERNAL;
}

// Runs fn, translating exceptions into status codes at the C boundary.
template <class Fn>
lrc_status guarded(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return LRC_OK;
  } catch (const lambdarc::Error& e) {
    g_last_error = e.what();
    return to_status(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown failure";
  }
  return LRC_ERR_INTERNAL;
}

void need(const void* ptr, const char* what) {
  if (ptr == nullptr) lambdarc::fail(lambdarc::ErrorKind::kArgument, std::string(what) + " is NULL");
}

}  // namespace

extern "C" {

const char* lrc_version(void) { return "0.1.0"; }

const char* lrc_last_error(void) { return g_last_error.c_str(); }

const char* lrc_status_name(lrc_status status) {
  switch (status) {
    case LRC_OK: return "ok";
    case LRC_ERR_ARGUMENT: return "argument error";
    case LRC_ERR_PARSE: return "parse error";
    case LRC_ERR_TRUNCATED: return "truncation error";
    case LRC_ERR_IO: return "I/O error";
    case LRC_ERR_FIT: return "fit error";
    case LRC_ERR_NON_INVERTIBLE: return "non-invertible model";
    case LRC_ERR_MODEL_SHAPE: return "model-shape error";
    case LRC_ERR_RANGE: return "range error";
    case LRC_ERR_INFEASIBLE_BRACKET: return "infeasible bracket";
    case LRC_ERR_CALIBRATION: return "calibration error";
    case LRC_ERR_CONFIG: return "config error";
    case LRC_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

lrc_status lrc_config_create(lrc_config** out) {
  return guarded([&] {
    need(out, "out");
    *out = new lrc_config{};
  });
}

void lrc_config_destroy(lrc_config* config) { delete config; }

lrc_status lrc_config_load(lrc_config* config, const char* path) {
  return guarded([&] {
    need(config, "config");
    need(path, "path");
    config->cfg = lambdarc::ExperimentConfig::load(path);
  });
}

lrc_status lrc_config_set(lrc_config* config, const char* key, const char* value) {
  return guarded([&] {
    need(config, "config");
    need(key, "key");
    need(value, "value");
    config->cfg.set(key, value);
  });
}

lrc_status lrc_config_validate(const lrc_config* config) {
  return guarded([&] {
    need(config, "config");
    config->cfg.validate();
  });
}

lrc_status lrc_config_to_json(const lrc_config* config, char* buf, size_t size, size_t* needed) {
  return guarded([&] {
    need(config, "config");
    const std::string text = config->cfg.to_json();
    if (needed) *needed = text.size() + 1;
    if (buf == nullptr) return;
    if (size < text.size() + 1) {
      lambdarc::fail(lambdarc::ErrorKind::kArgument, "buffer too small for config JSON");
    }
    std::memcpy(buf, text.c_str(), text.size() + 1);
  });
}

lrc_status lrc_script_generate(const lrc_config* config, lrc_script** out) {
  return guarded([&] {
    need(config, "config");
    need(out, "out");
    config->cfg.validate();
    *out = new lrc_script{
        lambdarc::make_script(config->cfg, static_cast<std::size_t>(config->cfg.n_frames))};
  });
}

lrc_status lrc_script_load(const char* path, lrc_script** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new lrc_script{lambdarc::load_script(path)};
  });
}

lrc_status lrc_script_save(const lrc_script* script, const char* path) {
  return guarded([&] {
    need(script, "script");
    need(path, "path");
    lambdarc::save_script(script->script, path);
  });
}

size_t lrc_script_length(const lrc_script* script) { return script ? script->script.size() : 0; }

lrc_status lrc_script_render_y4m(const lrc_script* script, int width, int height,
                                 double frame_rate, const char* path) {
  return guarded([&] {
    need(script, "script");
    need(path, "path");
    lambdarc::write_y4m(path,
                        lambdarc::render_script_frames(script->script, width, height, frame_rate));
  });
}

void lrc_script_destroy(lrc_script* script) { delete script; }

lrc_status lrc_sequence_load_y4m(const char* path, lrc_sequence** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new lrc_sequence{lambdarc::load_y4m(path)};
  });
}

lrc_status lrc_sequence_load_raw(const char* path, int width, int height, double frame_rate,
                                 lrc_sequence** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new lrc_sequence{lambdarc::load_raw_luma(path, width, height, frame_rate)};
  });
}

size_t lrc_sequence_length(const lrc_sequence* seq) { return seq ? seq->seq.size() : 0; }
int lrc_sequence_width(const lrc_sequence* seq) { return seq ? seq->seq.width() : 0; }
int lrc_sequence_height(const lrc_sequence* seq) { return seq ? seq->seq.height() : 0; }
void lrc_sequence_destroy(lrc_sequence* seq) { delete seq; }

lrc_status lrc_control(const lrc_config* config, const lrc_script* script,
                       const lrc_sequence* seq, const char* method, double target_bpp,
                       const char* csv_path, lrc_run_summary* out) {
  return guarded([&] {
    need(config, "config");
    need(script, "script");
    need(method, "method");
    const lambdarc::ExperimentConfig& cfg = config->cfg;
    cfg.validate();
    const std::uint64_t seed = cfg.require_seed();

    std::optional<lambdarc::FeaturePredictor> feature;
    const lambdarc::Sequence* frames = seq ? &seq->seq : nullptr;
    const std::string name = method;
    if (cfg.predictor == "feature" && (name == "ours" || name == "uniform")) {
      need(frames, "sequence (the feature predictor reads pixels)");
      feature = cfg.predictor_params.empty()
                    ? lambdarc::calibrate_from_simulation(cfg, lambdarc::derive_seed(seed, 0x7EA1))
                    : lambdarc::FeaturePredictor::load(cfg.predictor_params);
    }
    const lambdarc::MethodRun run = lambdarc::run_method(
        cfg, script->script, frames, feature ? &*feature : nullptr, name, target_bpp);

    if (csv_path != nullptr) {
      lambdarc::CsvTable table;
      lambdarc::append_frame_rows(table, name, run.reports);
      lambdarc::write_text(csv_path, lambdarc::to_csv(table));
    }
    if (out != nullptr) {
      const lambdarc::RunSummary s = lambdarc::summarize(run.reports);
      out->target_bpp = target_bpp;
      out->minigops = s.minigops;
      out->target_total = s.target_total;
      out->actual_total = s.actual_total;
      out->mean_delta_r = s.mean_delta_r;
      out->max_delta_r = s.max_delta_r;
      out->cumulative_delta_r = s.cumulative_delta_r;
      out->encode_invocations = s.encode_invocations;
      out->control_invocations = s.control_invocations;
      out->q_f_first = lambdarc::quality_fluctuation(run.reports.front().mses());
      out->fixed_lambda = run.fixed_lambda;
    }
  });
}

lrc_status lrc_fit_power_law(const double* lambdas, const double* values, size_t n, double* alpha,
                             double* beta) {
  return guarded([&] {
    need(lambdas, "lambdas");
    need(values, "values");
    need(alpha, "alpha");
    need(beta, "beta");
    std::vector<lambdarc::LambdaSample> samples(n);
    for (size_t i = 0; i < n; ++i) samples[i] = {lambdas[i], values[i]};
    const lambdarc::PowerLawModel model = lambdarc::fit_power_law(samples);
    *alpha = model.alpha;
    *beta = model.beta;
  });
}

lrc_status lrc_fit_samples_csv(const char* in_csv, const char* out_csv) {
  return guarded([&] {
    need(in_csv, "in_csv");
    need(out_csv, "out_csv");
    const lambdarc::CsvTable in = lambdarc::read_csv(in_csv);
    // Frames in order of first appearance.
    std::vector<std::string> order;
    std::map<std::string, std::vector<lambdarc::LambdaSample>> rates;
    std::map<std::string, std::vector<lambdarc::LambdaSample>> dists;
    for (std::size_t r = 0; r < in.rows.size(); ++r) {
      const std::string frame = in.cell(r, "frame");
      if (!rates.count(frame)) order.push_back(frame);
      const double lambda = in.number(r, "lambda");
      rates[frame].push_back({lambda, in.number(r, "bpp")});
      dists[frame].push_back({lambda, in.number(r, "mse")});
    }
    lambdarc::CsvTable out;
    out.header = {"frame", "alpha1", "beta1", "alpha2", "beta2", "c", "k"};
    for (const std::string& frame : order) {
      const lambdarc::PowerLawModel r = lambdarc::fit_power_law(rates[frame]);
      const lambdarc::PowerLawModel d = lambdarc::fit_power_law(dists[frame]);
      const lambdarc::RDCurve curve = lambdarc::derive_rd_curve(r, d);
      out.rows.push_back({frame, lambdarc::format_double(r.alpha), lambdarc::format_double(r.beta),
                          lambdarc::format_double(d.alpha), lambdarc::format_double(d.beta),
                          lambdarc::format_double(curve.c), lambdarc::format_double(curve.k)});
    }
    lambdarc::write_text(out_csv, lambdarc::to_csv(out));
  });
}

lrc_status lrc_calibrate(const lrc_config* config, const char* out_path) {
  return guarded([&] {
    need(config, "config");
    need(out_path, "out_path");
    config->cfg.validate();
    const std::uint64_t seed = config->cfg.require_seed();
    lambdarc::calibrate_from_simulation(config->cfg, lambdarc::derive_seed(seed, 0x7EA1))
        .save(out_path);
  });
}

lrc_status lrc_compare(const lrc_config* config, const char* out_dir) {
  return guarded([&] {
    need(config, "config");
    need(out_dir, "out_dir");
    lambdarc::write_compare(lambdarc::run_compare(config->cfg), out_dir);
  });
}

lrc_status lrc_plot(const char* in_dir, const char* out_dir) {
  return guarded([&] {
    need(in_dir, "in_dir");
    need(out_dir, "out_dir");
    lambdarc::render_plots(in_dir, out_dir);
  });
}

}  // extern "C"
