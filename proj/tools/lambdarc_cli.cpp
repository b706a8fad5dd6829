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

// lambdarc command-line front end. Talks to the library only through the C
// API in lambdarc/lambdarc.h.

#include <cstdio>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lambdarc/lambdarc.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;

struct ConfigDeleter {
  void operator()(lrc_config* c) const { lrc_config_destroy(c); }
};
struct ScriptDeleter {
  void operator()(lrc_script* s) const { lrc_script_destroy(s); }
};
struct SequenceDeleter {
  void operator()(lrc_sequence* s) const { lrc_sequence_destroy(s); }
};
using ConfigPtr = std::unique_ptr<lrc_config, ConfigDeleter>;
using ScriptPtr = std::unique_ptr<lrc_script, ScriptDeleter>;
using SequencePtr = std::unique_ptr<lrc_sequence, SequenceDeleter>;

// Thrown out of subcommand bodies once a library call fails.
struct CallFailed {
  lrc_status status;
};

void check(lrc_status status) {
  if (status != LRC_OK) throw CallFailed{status};
}

int exit_code(lrc_status status) {
  switch (status) {
    case LRC_OK: return kExitOk;
    case LRC_ERR_CONFIG: return kExitConfig;
    case LRC_ERR_INFEASIBLE_BRACKET: return kExitInfeasible;
    default: return kExitFailure;
  }
}

// Config-file field names exposed as --flags (underscores become dashes).
const std::vector<std::pair<std::string, std::string>> kConfigFlags = {
    {"seed", "RNG seed (mandatory)"},
    {"n_frames", "frames in the simulated script"},
    {"n_scenes", "scene count"},
    {"drift", "per-frame log-domain random-walk step"},
    {"noise_sigma", "lognormal codec noise std"},
    {"coupling_gamma", "reference-quality coupling strength"},
    {"lambda_min", "smallest lambda"},
    {"lambda_max", "largest lambda"},
    {"m", "lambda grid size"},
    {"minigop_size", "frames per mini-GOP"},
    {"max_iters", "bisection iteration cap"},
    {"tolerance", "relative rate tolerance of the bisection"},
    {"targets", "comma separated target bpp per frame"},
    {"predictor", "oracle | feature"},
    {"methods", "comma separated subset of ours,multipass,onepass,fixed,uniform"},
    {"buffer_policy", "persist | reset"},
    {"fluctuation_all_minigops", "fluctuation ratio over every mini-GOP"},
    {"width", "rendered frame width"},
    {"height", "rendered frame height"},
    {"frame_rate", "frame rate"},
    {"training_frames", "frames simulated for predictor calibration"},
    {"predictor_params", "calibrated feature predictor file"},
    {"onepass_alpha", "one-pass initial alpha"},
    {"onepass_beta", "one-pass initial beta"},
    {"onepass_delta_alpha", "one-pass alpha learning rate"},
    {"onepass_delta_beta", "one-pass beta learning rate"},
};

std::string dashed(std::string key) {
  for (char& c : key) {
    if (c == '_') c = '-';
  }
  return "--" + key;
}

struct ConfigOptions {
  std::string config_file;
  std::map<std::string, std::string> values;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_file, "JSON config file; flags override its fields");
    for (const auto& [key, help] : kConfigFlags) cmd->add_option(dashed(key), values[key], help);
  }

  ConfigPtr build() const {
    lrc_config* raw = nullptr;
    check(lrc_config_create(&raw));
    ConfigPtr cfg(raw);
    if (!config_file.empty()) check(lrc_config_load(cfg.get(), config_file.c_str()));
    for (const auto& [key, value] : values) {
      if (!value.empty()) check(lrc_config_set(cfg.get(), key.c_str(), value.c_str()));
    }
    check(lrc_config_validate(cfg.get()));
    return cfg;
  }
};

ScriptPtr make_script(const lrc_config* cfg, const std::string& script_path) {
  lrc_script* raw = nullptr;
  if (script_path.empty()) {
    check(lrc_script_generate(cfg, &raw));
  } else {
    check(lrc_script_load(script_path.c_str(), &raw));
  }
  return ScriptPtr(raw);
}

void print_summary(const char* method, const lrc_run_summary& s) {
  std::printf(
      "method=%s target_bpp=%.6g minigops=%zu mean_delta_r=%.6g max_delta_r=%.6g "
      "cumulative_delta_r=%.6g encode_calls=%llu control_calls=%llu q_f_first=%.6g\n",
      method, s.target_bpp, s.minigops, s.mean_delta_r, s.max_delta_r, s.cumulative_delta_r,
      static_cast<unsigned long long>(s.encode_invocations),
      static_cast<unsigned long long>(s.control_invocations), s.q_f_first);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lambdarc: lambda-domain rate control on a virtual variable-rate codec"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(lrc_version()));

  // simulate
  ConfigOptions sim_cfg;
  std::string sim_out = "script.json";
  std::string sim_y4m;
  auto* simulate = app.add_subcommand("simulate", "generate a content script (and optional Y4M)");
  sim_cfg.attach(simulate);
  simulate->add_option("-o,--out", sim_out, "script output path");
  simulate->add_option("--y4m", sim_y4m, "also render the script's frames to this Y4M file");

  // control
  ConfigOptions ctl_cfg;
  std::string ctl_script;
  std::string ctl_y4m;
  std::string ctl_raw;
  int raw_width = 0;
  int raw_height = 0;
  std::string ctl_method = "ours";
  double ctl_target = 0.0;
  std::string ctl_csv;
  auto* control = app.add_subcommand("control", "run one rate-control method");
  ctl_cfg.attach(control);
  control->add_option("--script", ctl_script, "content script (generated from the config if absent)");
  auto* y4m_opt = control->add_option("--y4m", ctl_y4m, "Y4M input for the feature predictor");
  auto* raw_opt = control->add_option("--raw", ctl_raw, "raw 8-bit luma input")->excludes(y4m_opt);
  control->add_option("--raw-width", raw_width, "raw frame width")->needs(raw_opt);
  control->add_option("--raw-height", raw_height, "raw frame height")->needs(raw_opt);
  control->add_option("--method", ctl_method, "ours | uniform | multipass | onepass | fixed");
  control->add_option("--target", ctl_target, "target bpp per frame (default: first config target)");
  control->add_option("--csv", ctl_csv, "per-frame CSV output");

  // fit
  std::string fit_in;
  std::string fit_out = "models.csv";
  auto* fit = app.add_subcommand("fit", "fit per-frame power-law models from a samples CSV");
  fit->add_option("-i,--in", fit_in, "CSV with frame,lambda,bpp,mse columns")->required();
  fit->add_option("-o,--out", fit_out, "output CSV");

  // compare
  ConfigOptions cmp_cfg;
  std::string cmp_out = "results";
  auto* compare = app.add_subcommand("compare", "run every selected method and emit CSV + SVG");
  cmp_cfg.attach(compare);
  compare->add_option("-o,--out", cmp_out, "output directory");

  // plot
  std::string plot_in;
  std::string plot_out;
  auto* plot = app.add_subcommand("plot", "re-render SVG plots from compare CSVs");
  plot->add_option("-i,--in", plot_in, "directory holding minigops.csv and frames.csv")->required();
  plot->add_option("-o,--out", plot_out, "output directory (default: input directory)");

  // calibrate
  ConfigOptions cal_cfg;
  std::string cal_out = "predictor.json";
  auto* calibrate = app.add_subcommand("calibrate", "calibrate the feature predictor");
  cal_cfg.attach(calibrate);
  calibrate->add_option("-o,--out", cal_out, "predictor parameter file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*simulate) {
      const ConfigPtr cfg = sim_cfg.build();
      const ScriptPtr script = make_script(cfg.get(), "");
      check(lrc_script_save(script.get(), sim_out.c_str()));
      std::printf("wrote %zu-frame script to %s\n", lrc_script_length(script.get()), sim_out.c_str());
      if (!sim_y4m.empty()) {
        const int width = sim_cfg.values.at("width").empty() ? 416 : std::stoi(sim_cfg.values.at("width"));
        const int height =
            sim_cfg.values.at("height").empty() ? 240 : std::stoi(sim_cfg.values.at("height"));
        check(lrc_script_render_y4m(script.get(), width, height, 30.0, sim_y4m.c_str()));
        std::printf("wrote frames to %s\n", sim_y4m.c_str());
      }
    } else if (*control) {
      const ConfigPtr cfg = ctl_cfg.build();
      SequencePtr seq;
      if (!ctl_y4m.empty() || !ctl_raw.empty()) {
        lrc_sequence* raw = nullptr;
        if (!ctl_y4m.empty()) {
          check(lrc_sequence_load_y4m(ctl_y4m.c_str(), &raw));
        } else {
          check(lrc_sequence_load_raw(ctl_raw.c_str(), raw_width, raw_height, 30.0, &raw));
        }
        seq.reset(raw);
        // Without an explicit script the simulator follows the clip's length.
        if (ctl_script.empty()) {
          const std::string n = std::to_string(lrc_sequence_length(seq.get()));
          check(lrc_config_set(cfg.get(), "n_frames", n.c_str()));
          if (ctl_cfg.values.at("n_scenes").empty()) check(lrc_config_set(cfg.get(), "n_scenes", "1"));
        }
      }
      const ScriptPtr script = make_script(cfg.get(), ctl_script);
      double target = ctl_target;
      if (target <= 0.0) {
        const std::string t = ctl_cfg.values.at("targets");
        target = t.empty() ? 0.1 : std::stod(t.substr(0, t.find(',')));
      }
      lrc_run_summary summary{};
      check(lrc_control(cfg.get(), script.get(), seq.get(), ctl_method.c_str(), target,
                        ctl_csv.empty() ? nullptr : ctl_csv.c_str(), &summary));
      print_summary(ctl_method.c_str(), summary);
    } else if (*fit) {
      check(lrc_fit_samples_csv(fit_in.c_str(), fit_out.c_str()));
      std::printf("wrote %s\n", fit_out.c_str());
    } else if (*compare) {
      const ConfigPtr cfg = cmp_cfg.build();
      check(lrc_compare(cfg.get(), cmp_out.c_str()));
      std::printf("wrote results to %s\n", cmp_out.c_str());
    } else if (*plot) {
      const std::string out = plot_out.empty() ? plot_in : plot_out;
      check(lrc_plot(plot_in.c_str(), out.c_str()));
      std::printf("wrote plots to %s\n", out.c_str());
    } else if (*calibrate) {
      const ConfigPtr cfg = cal_cfg.build();
      check(lrc_calibrate(cfg.get(), cal_out.c_str()));
      std::printf("wrote %s\n", cal_out.c_str());
    }
  } catch (const CallFailed& failed) {
    std::fprintf(stderr, "lambdarc: %s: %s\n", lrc_status_name(failed.status), lrc_last_error());
    return exit_code(failed.status);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "lambdarc: %s\n", e.what());
    return kExitConfig;
  }
  return kExitOk;
}
