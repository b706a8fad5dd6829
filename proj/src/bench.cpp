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

#include "lambdarc/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "lambdarc/error.hpp"
#include "lambdarc/metrics.hpp"
#include "lambdarc/random.hpp"
#include "lambdarc/svg.hpp"

namespace lambdarc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

EncodeReport run_multipass(VirtualCodec& codec, const LambdaGrid& grid, std::size_t start_index,
                           std::size_t count, double r_tar, const AllocatorConfig& cfg,
                           BufferState& buffer, double ref_mse) {
  const std::uint64_t calls_before = codec.invocation_count();
  const auto pre_start = Clock::now();

  std::vector<FrameModelSet> models;
  models.reserve(count);
  double pre_ref = ref_mse;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> bpp(grid.size());
    std::vector<double> mse(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const EncodeResult r = codec.encode_frame(start_index + i, grid[g], pre_ref);
      bpp[g] = r.bpp;
      mse[g] = r.mse;
    }
    // The next frame is pre-encoded against this frame's mid-grid reconstruction.
    pre_ref = mse[grid.size() / 2];
    models.push_back(fit_frame_models(RDSampleSet(grid, std::move(bpp), std::move(mse))));
  }
  const double pre_seconds = seconds_since(pre_start);

  EncodeReport report = run_minigop(models, r_tar, codec, start_index, ref_mse, cfg, buffer);
  report.control_seconds += pre_seconds;
  report.control_invocations = codec.invocation_count() - calls_before - count;
  return report;
}

std::vector<EncodeReport> run_multipass_sequence(VirtualCodec& codec, const LambdaGrid& grid,
                                                 double target_bpp, const AllocatorConfig& cfg) {
  cfg.validate();
  std::vector<EncodeReport> reports;
  BufferState buffer;
  double ref = 0.0;
  const auto n = static_cast<std::size_t>(cfg.minigop_size);
  for (std::size_t start = 0; start < codec.size(); start += n) {
    const std::size_t count = std::min(n, codec.size() - start);
    if (cfg.buffer_policy == BufferPolicy::kResetPerMinigop) buffer = BufferState{};
    reports.push_back(run_multipass(codec, grid, start, count,
                                    target_bpp * static_cast<double>(count), cfg, buffer, ref));
    ref = reports.back().final_ref_mse;
  }
  return reports;
}

OnePassState::OnePassState(const OnePassParams& params)
    : params_(params), alpha_(params.alpha), beta_(params.beta) {
  require(params.alpha_lo > 0.0 && params.alpha_lo < params.alpha_hi && params.beta_lo > 0.0 &&
              params.beta_lo < params.beta_hi,
          ErrorKind::kArgument, "one-pass clip bounds invalid");
  alpha_ = std::clamp(alpha_, params.alpha_lo, params.alpha_hi);
  beta_ = std::clamp(beta_, params.beta_lo, params.beta_hi);
}

double OnePassState::lambda_for(double budget, double lambda_min, double lambda_max,
                                LambdaClamp& clamp) const {
  clamp = LambdaClamp::kNone;
  if (budget <= 0.0) {
    clamp = LambdaClamp::kLow;
    return lambda_min;
  }
  const double lambda = std::pow(budget / alpha_, 1.0 / beta_);
  if (lambda > lambda_max) {
    clamp = LambdaClamp::kHigh;
    return lambda_max;
  }
  if (!(lambda >= lambda_min)) {
    clamp = LambdaClamp::kLow;
    return lambda_min;
  }
  return lambda;
}

void OnePassState::update(double lambda, double observed_bpp) {
  require(lambda > 0.0 && observed_bpp > 0.0, ErrorKind::kArgument,
          "one-pass update needs positive lambda and rate");
  const double error = std::log(observed_bpp) - std::log(alpha_ * std::pow(lambda, beta_));
  const double ln_alpha = std::log(alpha_) + params_.delta_alpha * error;
  const double beta = beta_ + params_.delta_beta * error * std::log(lambda);
  alpha_ = std::clamp(std::exp(ln_alpha), params_.alpha_lo, params_.alpha_hi);
  beta_ = std::clamp(beta, params_.beta_lo, params_.beta_hi);
}

EncodeReport run_onepass(VirtualCodec& codec, std::size_t start_index, std::size_t count,
                         double r_tar, OnePassState& state, BufferState& buffer, double ref_mse) {
  require(count >= 1 && r_tar > 0.0, ErrorKind::kArgument, "one-pass needs frames and a target");
  const std::uint64_t calls_before = codec.invocation_count();
  EncodeReport report;
  report.target_total = r_tar;
  report.buffer_in = buffer.bits;
  report.plan.ratios.assign(count, 1.0 / static_cast<double>(count));

  double ref = ref_mse;
  const auto start = Clock::now();
  for (std::size_t i = 0; i < count; ++i) {
    FrameRecord rec;
    rec.frame_index = start_index + i;
    rec.budget_bpp = frame_budget(report.plan.ratios[i], 1.0, r_tar, buffer);
    rec.lambda =
        state.lambda_for(rec.budget_bpp, codec.lambda_min(), codec.lambda_max(), rec.lambda_clamp);
    report.plan.lambdas.push_back(rec.lambda);
    const EncodeResult out = codec.encode_frame(rec.frame_index, rec.lambda, ref);
    rec.actual_bpp = out.bpp;
    rec.actual_mse = out.mse;
    buffer.bits = rec.budget_bpp - out.bpp;
    rec.buffer_after = buffer.bits;
    ref = out.mse;
    state.update(rec.lambda, out.bpp);
    report.frames.push_back(rec);
  }
  report.encode_seconds = seconds_since(start);
  report.buffer_out = buffer.bits;
  report.final_ref_mse = ref;
  report.encode_invocations = count;
  report.control_invocations = codec.invocation_count() - calls_before - count;
  return report;
}

std::vector<EncodeReport> run_onepass_sequence(VirtualCodec& codec, double target_bpp,
                                               const AllocatorConfig& cfg, OnePassState& state) {
  cfg.validate();
  std::vector<EncodeReport> reports;
  BufferState buffer;
  double ref = 0.0;
  const auto n = static_cast<std::size_t>(cfg.minigop_size);
  for (std::size_t start = 0; start < codec.size(); start += n) {
    const std::size_t count = std::min(n, codec.size() - start);
    if (cfg.buffer_policy == BufferPolicy::kResetPerMinigop) buffer = BufferState{};
    reports.push_back(
        run_onepass(codec, start, count, target_bpp * static_cast<double>(count), state, buffer, ref));
    ref = reports.back().final_ref_mse;
  }
  return reports;
}

std::vector<EncodeReport> run_fixed_lambda(VirtualCodec& codec, double lambda,
                                           std::size_t n_frames, int minigop_size,
                                           double target_bpp) {
  require(minigop_size >= 1, ErrorKind::kArgument, "minigop_size must be at least 1");
  require(n_frames >= 1 && n_frames <= codec.size(), ErrorKind::kArgument,
          "fixed-lambda run exceeds the script length");
  const auto n = static_cast<std::size_t>(minigop_size);
  std::vector<EncodeReport> reports;
  double ref = 0.0;
  for (std::size_t start = 0; start < n_frames; start += n) {
    const std::size_t count = std::min(n, n_frames - start);
    EncodeReport report;
    report.plan.ratios.assign(count, 1.0 / static_cast<double>(count));
    report.plan.lambdas.assign(count, lambda);
    const auto t0 = Clock::now();
    for (std::size_t i = 0; i < count; ++i) {
      FrameRecord rec;
      rec.frame_index = start + i;
      rec.lambda = lambda;
      const EncodeResult out = codec.encode_frame(rec.frame_index, lambda, ref);
      rec.actual_bpp = out.bpp;
      rec.actual_mse = out.mse;
      rec.budget_bpp = target_bpp > 0.0 ? target_bpp : out.bpp;
      ref = out.mse;
      report.frames.push_back(rec);
    }
    report.encode_seconds = seconds_since(t0);
    report.target_total = target_bpp > 0.0 ? target_bpp * static_cast<double>(count)
                                           : report.total_bpp();
    report.final_ref_mse = ref;
    report.encode_invocations = count;
    reports.push_back(std::move(report));
  }
  return reports;
}

double matched_fixed_lambda(const ContentScript& script, double lambda_min, double lambda_max,
                            std::size_t frames, double target_total) {
  require(target_total > 0.0, ErrorKind::kArgument, "matched target must be positive");
  auto spend = [&](double lambda) {
    VirtualCodec codec(script, lambda_min, lambda_max);
    double total = 0.0;
    for (const EncodeReport& r : run_fixed_lambda(codec, lambda, frames, static_cast<int>(frames))) {
      total += r.total_bpp();
    }
    return total;
  };
  if (spend(lambda_max) <= target_total) return lambda_max;
  if (spend(lambda_min) >= target_total) return lambda_min;
  double lo = std::log(lambda_min);
  double hi = std::log(lambda_max);
  for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (spend(std::exp(mid)) < target_total) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::clamp(std::exp(0.5 * (lo + hi)), lambda_min, lambda_max);
}

ContentScript make_script(const ExperimentConfig& cfg, std::size_t n_frames) {
  const int frames = static_cast<int>(n_frames);
  ContentScript script =
      generate_script(cfg.require_seed(), frames, std::min(cfg.n_scenes, frames), cfg.drift);
  script.coupling_gamma = cfg.coupling_gamma;
  script.noise_sigma = cfg.noise_sigma;
  return script;
}

FeaturePredictor calibrate_from_simulation(const ExperimentConfig& cfg, std::uint64_t seed) {
  const int n = cfg.training_frames;
  ContentScript script = generate_script(seed, n, std::max(1, n / 8), std::max(cfg.drift, 0.05));
  script.coupling_gamma = cfg.coupling_gamma;
  const VirtualCodec truth(script, cfg.lambda_min, cfg.lambda_max);
  const Sequence frames = render_script_frames(script, cfg.width, cfg.height, cfg.frame_rate);
  const LambdaGrid grid = cfg.grid();

  std::vector<TrainingExample> training;
  for (std::size_t f = 1; f < script.size(); ++f) {
    // Reference degraded the same way the runtime path degrades it.
    const ReferenceEstimate est = reference_estimate(truth.ground_truth_samples(f - 1, 0.0, grid));
    const Frame degraded =
        distortion_addition(frames.frames[f - 1], est.d_max, est.d_min, derive_seed(seed, f));
    const FramePair pair(degraded, frames.frames[f]);
    training.push_back({extract_features(pair),
                        fit_frame_models(truth.ground_truth_samples(f, est.variance, grid))});
  }
  return calibrate_feature_predictor(training);
}

MethodRun run_method(const ExperimentConfig& cfg, const ContentScript& script,
                     const Sequence* frames, const FeaturePredictor* feature,
                     const std::string& method, double target_bpp, double fixed_lambda) {
  MethodRun run;
  run.method = method;
  run.target_bpp = target_bpp;
  AllocatorConfig acfg = cfg.allocator();
  const LambdaGrid grid = cfg.grid();
  VirtualCodec codec(script, cfg.lambda_min, cfg.lambda_max);

  if (method == "ours" || method == "uniform") {
    if (method == "uniform") acfg.budget_policy = BudgetPolicy::kUniform;
    const OraclePredictor oracle(codec);
    const Predictor* predictor = &oracle;
    if (cfg.predictor == "feature") {
      require(feature != nullptr, ErrorKind::kConfig, "feature predictor not calibrated");
      predictor = feature;
    }
    SequenceInputs inputs{predictor, frames, grid, target_bpp, cfg.require_seed()};
    run.reports = run_sequence(inputs, codec, acfg);
  } else if (method == "multipass") {
    run.reports = run_multipass_sequence(codec, grid, target_bpp, acfg);
  } else if (method == "onepass") {
    OnePassState state(cfg.onepass);
    run.reports = run_onepass_sequence(codec, target_bpp, acfg, state);
  } else if (method == "fixed") {
    if (!(fixed_lambda > 0.0)) {
      const std::size_t first = std::min<std::size_t>(cfg.minigop_size, script.size());
      fixed_lambda = matched_fixed_lambda(script, cfg.lambda_min, cfg.lambda_max, first,
                                          target_bpp * static_cast<double>(first));
    }
    run.fixed_lambda = fixed_lambda;
    run.reports = run_fixed_lambda(codec, fixed_lambda, script.size(), cfg.minigop_size, target_bpp);
  } else {
    fail(ErrorKind::kConfig, "unknown method '" + method + "'");
  }
  return run;
}

RunSummary summarize(const std::vector<EncodeReport>& reports) {
  RunSummary s;
  s.minigops = reports.size();
  for (const EncodeReport& r : reports) {
    const double dr = rate_error(r.total_bpp(), r.target_total);
    s.mean_delta_r += dr;
    s.max_delta_r = std::max(s.max_delta_r, dr);
    s.target_total += r.target_total;
    s.actual_total += r.total_bpp();
    s.encode_invocations += r.encode_invocations;
    s.control_invocations += r.control_invocations;
    s.control_seconds += r.control_seconds;
    s.encode_seconds += r.encode_seconds;
  }
  if (s.minigops > 0) s.mean_delta_r /= static_cast<double>(s.minigops);
  if (s.target_total > 0.0) s.cumulative_delta_r = rate_error(s.actual_total, s.target_total);
  return s;
}

namespace {

std::string method_label(const std::string& method, const std::string& predictor) {
  if (method == "ours") return "lambda-domain allocation (" + predictor + " prediction)";
  if (method == "uniform") return "equal-bit allocation (" + predictor + " prediction)";
  if (method == "multipass") return "multi-pass pre-encoding";
  if (method == "onepass") return "one-pass empirical update (stand-in)";
  return "fixed lambda anchor";
}

double safe_fluctuation_ratio(std::span<const double> controlled, std::span<const double> fixed) {
  try {
    return fluctuation_ratio(controlled, fixed);
  } catch (const Error&) {
    return kNaN;
  }
}

double mean_quality_fluctuation(const std::vector<EncodeReport>& reports) {
  double acc = 0.0;
  for (const EncodeReport& r : reports) {
    const auto m = r.mses();
    acc += quality_fluctuation(m);
  }
  return acc / static_cast<double>(reports.size());
}

std::string sequence_id(const std::string& method, std::size_t target_index) {
  return method + "_t" + std::to_string(target_index);
}

}  // namespace

CompareResult run_compare(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::uint64_t seed = cfg.require_seed();
  const ContentScript script = make_script(cfg, static_cast<std::size_t>(cfg.n_frames));

  std::optional<Sequence> frames;
  std::optional<FeaturePredictor> feature;
  const bool predicts = std::any_of(cfg.methods.begin(), cfg.methods.end(), [](const auto& m) {
    return m == "ours" || m == "uniform";
  });
  if (cfg.predictor == "feature" && predicts) {
    frames = render_script_frames(script, cfg.width, cfg.height, cfg.frame_rate);
    feature = cfg.predictor_params.empty()
                  ? calibrate_from_simulation(cfg, derive_seed(seed, 0x7EA1))
                  : FeaturePredictor::load(cfg.predictor_params);
  }

  CompareResult result;
  result.frames.header = kFrameCsvHeader;
  result.minigops.header = {"sequence_id", "method",       "target_bpp", "minigop_index",
                            "n_frames",    "target_total", "actual_total", "delta_r",
                            "q_f",         "clamp",        "iterations", "converged",
                            "control_invocations"};
  result.summary.header = {"method",
                           "label",
                           "target_bpp",
                           "minigops",
                           "mean_delta_r",
                           "max_delta_r",
                           "cumulative_delta_r",
                           "control_invocations_per_minigop",
                           "invocation_ratio",
                           "q_f_first",
                           "fluctuation_ratio",
                           "fixed_lambda"};
  result.timing.header = {"method", "target_bpp", "control_seconds", "encode_seconds", "t_rc"};

  const std::size_t first = std::min<std::size_t>(cfg.minigop_size, script.size());
  for (std::size_t ti = 0; ti < cfg.targets.size(); ++ti) {
    const double target = cfg.targets[ti];
    const double fixed_lambda = matched_fixed_lambda(script, cfg.lambda_min, cfg.lambda_max, first,
                                                     target * static_cast<double>(first));
    const MethodRun anchor = run_method(cfg, script, nullptr, nullptr, "fixed", target, fixed_lambda);

    for (const std::string& method : cfg.methods) {
      MethodRun run = method == "fixed" ? anchor
                                        : run_method(cfg, script, frames ? &*frames : nullptr,
                                                     feature ? &*feature : nullptr, method, target);
      const std::string id = sequence_id(method, ti);
      append_frame_rows(result.frames, id, run.reports);

      for (std::size_t g = 0; g < run.reports.size(); ++g) {
        const EncodeReport& r = run.reports[g];
        const auto mses = r.mses();
        result.minigops.rows.push_back(
            {id, method, format_double(target), std::to_string(g), std::to_string(r.frames.size()),
             format_double(r.target_total), format_double(r.total_bpp()),
             format_double(rate_error(r.total_bpp(), r.target_total)),
             format_double(quality_fluctuation(mses)), to_string(r.plan.clamp),
             std::to_string(r.plan.iterations_used), r.plan.converged ? "1" : "0",
             std::to_string(r.control_invocations)});
      }

      const RunSummary s = summarize(run.reports);
      double q_f_first = quality_fluctuation(run.reports.front().mses());
      double ratio = kNaN;
      if (cfg.fluctuation_all_minigops) {
        const double fixed_q = mean_quality_fluctuation(anchor.reports);
        ratio = fixed_q > 0.0 ? mean_quality_fluctuation(run.reports) / fixed_q : kNaN;
      } else {
        ratio = safe_fluctuation_ratio(run.reports.front().mses(), anchor.reports.front().mses());
      }
      result.summary.rows.push_back(
          {method, method_label(method, cfg.predictor), format_double(target),
           std::to_string(s.minigops), format_double(s.mean_delta_r), format_double(s.max_delta_r),
           format_double(s.cumulative_delta_r),
           format_double(static_cast<double>(s.control_invocations) /
                         static_cast<double>(s.minigops)),
           format_double(static_cast<double>(s.control_invocations) /
                         static_cast<double>(s.encode_invocations)),
           format_double(q_f_first), format_double(ratio),
           method == "fixed" ? format_double(anchor.fixed_lambda) : ""});
      result.timing.rows.push_back(
          {method, format_double(target), format_double(s.control_seconds),
           format_double(s.encode_seconds),
           format_double(s.encode_seconds > 0.0 ? t_rc(s.control_seconds, s.encode_seconds) : kNaN)});
      result.runs.push_back(std::move(run));
    }
  }
  return result;
}

namespace {

void write_plots(const CsvTable& minigops, const CsvTable& frames,
                 const std::filesystem::path& out_dir) {
  constexpr std::size_t kMseFrames = 32;

  // Ordered by first appearance so output is stable.
  std::vector<std::string> targets;
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> ids_by_target;
  for (std::size_t r = 0; r < minigops.rows.size(); ++r) {
    const std::string target = minigops.cell(r, "target_bpp");
    const std::string id = minigops.cell(r, "sequence_id");
    if (std::find(targets.begin(), targets.end(), target) == targets.end()) targets.push_back(target);
    auto& ids = ids_by_target[target];
    if (std::none_of(ids.begin(), ids.end(), [&](const auto& p) { return p.first == id; })) {
      ids.emplace_back(id, minigops.cell(r, "method"));
    }
  }

  for (std::size_t ti = 0; ti < targets.size(); ++ti) {
    const std::string& target = targets[ti];
    LinePlot rate{"Cumulative rate vs target (" + target + " bpp/frame)", "mini-GOP index",
                  "cumulative bpp per frame", {}};
    LinePlot quality{"Per-frame MSE (" + target + " bpp/frame)", "frame index", "MSE", {}};
    double max_g = 0.0;
    for (const auto& [id, method] : ids_by_target[target]) {
      PlotSeries cumulative{method, {}, {}, false};
      double spent = 0.0;
      double count = 0.0;
      for (std::size_t r = 0; r < minigops.rows.size(); ++r) {
        if (minigops.cell(r, "sequence_id") != id) continue;
        spent += minigops.number(r, "actual_total");
        count += minigops.number(r, "n_frames");
        const double g = minigops.number(r, "minigop_index");
        max_g = std::max(max_g, g);
        cumulative.x.push_back(g);
        cumulative.y.push_back(spent / count);
      }
      rate.series.push_back(std::move(cumulative));

      PlotSeries mse{method, {}, {}, false};
      for (std::size_t r = 0; r < frames.rows.size(); ++r) {
        if (frames.cell(r, "sequence_id") != id) continue;
        const double f = frames.number(r, "frame_index");
        if (f >= static_cast<double>(kMseFrames)) continue;
        mse.x.push_back(f);
        mse.y.push_back(frames.number(r, "actual_mse"));
      }
      quality.series.push_back(std::move(mse));
    }
    const double t = parse_double(target);
    rate.series.push_back({"target", {0.0, max_g}, {t, t}, true});
    write_text(out_dir / ("rate_t" + std::to_string(ti) + ".svg"), render_svg(rate));
    write_text(out_dir / ("mse_t" + std::to_string(ti) + ".svg"), render_svg(quality));
  }
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  require(!ec && std::filesystem::is_directory(dir), ErrorKind::kIo,
          "cannot create output directory " + dir.string());
}

}  // namespace

void write_compare(const CompareResult& result, const std::filesystem::path& out_dir) {
  ensure_directory(out_dir);
  write_text(out_dir / "frames.csv", to_csv(result.frames));
  write_text(out_dir / "minigops.csv", to_csv(result.minigops));
  write_text(out_dir / "summary.csv", to_csv(result.summary));
  write_text(out_dir / "timing.csv", to_csv(result.timing));
  write_plots(result.minigops, result.frames, out_dir);
}

void render_plots(const std::filesystem::path& in_dir, const std::filesystem::path& out_dir) {
  const CsvTable minigops = read_csv(in_dir / "minigops.csv");
  const CsvTable frames = read_csv(in_dir / "frames.csv");
  ensure_directory(out_dir);
  write_plots(minigops, frames, out_dir);
}

}  // namespace lambdarc
