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

#include "lambdarc/allocator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "lambdarc/error.hpp"
#include "lambdarc/random.hpp"

namespace lambdarc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

void AllocatorConfig::validate() const {
  require(max_iters >= 1, ErrorKind::kConfig, "max_iters must be at least 1");
  require(tolerance > 0.0 && tolerance < 1.0, ErrorKind::kConfig, "tolerance must lie in (0, 1)");
  require(minigop_size >= 1, ErrorKind::kConfig, "minigop_size must be at least 1");
}

const char* to_string(Feasibility f) {
  switch (f) {
    case Feasibility::kInRange: return "in_range";
    case Feasibility::kAboveMax: return "above_max";
    case Feasibility::kBelowMin: return "below_min";
  }
  return "?";
}

const char* to_string(ClampStatus c) {
  switch (c) {
    case ClampStatus::kInRange: return "in_range";
    case ClampStatus::kClampedHigh: return "clamped_high";
    case ClampStatus::kClampedLow: return "clamped_low";
  }
  return "?";
}

Feasibility feasibility(std::span<const FrameModelSet> models, double r_tar) {
  double sum_min = 0.0;
  double sum_max = 0.0;
  for (const FrameModelSet& m : models) {
    sum_min += m.r_min;
    sum_max += m.r_max;
  }
  if (r_tar > sum_max) return Feasibility::kAboveMax;
  if (r_tar < sum_min) return Feasibility::kBelowMin;
  return Feasibility::kInRange;
}

SearchResult search_target_distortion(std::span<const FrameModelSet> models, double r_tar,
                                      const AllocatorConfig& cfg) {
  cfg.validate();
  require(!models.empty(), ErrorKind::kArgument, "search needs at least one frame model");
  require(r_tar > 0.0, ErrorKind::kArgument, "target rate must be positive");

  double d_lb = 0.0;
  double d_ub = std::numeric_limits<double>::infinity();
  for (const FrameModelSet& m : models) {
    d_lb = std::max(d_lb, m.d_min);
    d_ub = std::min(d_ub, m.d_max);
  }
  if (!(d_lb < d_ub)) {
    fail(ErrorKind::kInfeasibleBracket,
         "frame quality ranges do not overlap: D_LB=" + std::to_string(d_lb) +
             " >= D_UB=" + std::to_string(d_ub));
  }

  SearchResult best;
  double best_error = std::numeric_limits<double>::infinity();
  std::vector<double> rates(models.size());
  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    const double d_tar = 0.5 * (d_lb + d_ub);
    double total = 0.0;
    for (std::size_t i = 0; i < models.size(); ++i) {
      rates[i] = models[i].rd.rate_of_distortion(d_tar);
      total += rates[i];
    }
    const double error = std::abs(total - r_tar) / r_tar;
    if (error < best_error) {
      best_error = error;
      best.d_tar = d_tar;
      best.frame_rates = rates;
    }
    best.iterations_used = iter;
    if (error < cfg.tolerance) {
      best.d_tar = d_tar;
      best.frame_rates = rates;
      best.converged = true;
      return best;
    }
    // Lower distortion means higher rate.
    if (total < r_tar) {
      d_ub = d_tar;
    } else {
      d_lb = d_tar;
    }
  }
  return best;
}

std::vector<double> derive_ratios(std::span<const double> frame_rates) {
  require(!frame_rates.empty(), ErrorKind::kArgument, "derive_ratios needs at least one rate");
  double sum = 0.0;
  for (double r : frame_rates) {
    require(r > 0.0 && std::isfinite(r), ErrorKind::kArgument, "frame rates must be positive");
    sum += r;
  }
  std::vector<double> ratios(frame_rates.size());
  std::transform(frame_rates.begin(), frame_rates.end(), ratios.begin(),
                 [sum](double r) { return r / sum; });
  return ratios;
}

double frame_budget(double ratio, double ratio_sum, double r_tar, BufferState buffer) {
  require(ratio_sum > 0.0, ErrorKind::kArgument, "ratio sum must be positive");
  return r_tar * ratio / ratio_sum + buffer.bits;
}

namespace {

double clamp_lambda(const PowerLawModel& r_lambda, double budget, double lambda_min,
                    double lambda_max, LambdaClamp& clamp) {
  clamp = LambdaClamp::kNone;
  if (budget <= 0.0) {
    clamp = LambdaClamp::kLow;
    return lambda_min;
  }
  const double lambda = r_lambda.invert(budget);
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

}  // namespace

AllocationPlan plan_minigop(std::span<const FrameModelSet> models, double r_tar,
                            const AllocatorConfig& cfg, double lambda_min, double lambda_max) {
  cfg.validate();
  require(!models.empty(), ErrorKind::kArgument, "plan needs at least one frame model");
  require(r_tar > 0.0, ErrorKind::kArgument, "target rate must be positive");

  AllocationPlan plan;
  const std::size_t n = models.size();
  switch (feasibility(models, r_tar)) {
    case Feasibility::kAboveMax:
      plan.clamp = ClampStatus::kClampedHigh;
      plan.lambdas.assign(n, lambda_max);
      for (const FrameModelSet& m : models) plan.frame_rates.push_back(m.r_max);
      break;
    case Feasibility::kBelowMin:
      plan.clamp = ClampStatus::kClampedLow;
      plan.lambdas.assign(n, lambda_min);
      for (const FrameModelSet& m : models) plan.frame_rates.push_back(m.r_min);
      break;
    case Feasibility::kInRange: {
      if (cfg.budget_policy == BudgetPolicy::kUniform) {
        plan.frame_rates.assign(n, r_tar / static_cast<double>(n));
        plan.ratios.assign(n, 1.0 / static_cast<double>(n));
        plan.d_tar = std::numeric_limits<double>::quiet_NaN();
      } else {
        SearchResult search = search_target_distortion(models, r_tar, cfg);
        plan.d_tar = search.d_tar;
        plan.frame_rates = std::move(search.frame_rates);
        plan.iterations_used = search.iterations_used;
        plan.converged = search.converged;
        plan.ratios = derive_ratios(plan.frame_rates);
      }
      for (std::size_t i = 0; i < n; ++i) {
        LambdaClamp unused;
        plan.lambdas.push_back(clamp_lambda(models[i].r_lambda, r_tar * plan.ratios[i], lambda_min,
                                            lambda_max, unused));
      }
      break;
    }
  }
  // Clamped plans still split the target evenly for buffer accounting.
  if (plan.ratios.empty()) plan.ratios.assign(n, 1.0 / static_cast<double>(n));
  return plan;
}

double EncodeReport::total_bpp() const {
  return std::accumulate(frames.begin(), frames.end(), 0.0,
                         [](double acc, const FrameRecord& f) { return acc + f.actual_bpp; });
}

double EncodeReport::total_budget() const {
  return std::accumulate(frames.begin(), frames.end(), 0.0,
                         [](double acc, const FrameRecord& f) { return acc + f.budget_bpp; });
}

std::vector<double> EncodeReport::mses() const {
  std::vector<double> out;
  out.reserve(frames.size());
  for (const FrameRecord& f : frames) out.push_back(f.actual_mse);
  return out;
}

EncodeReport run_minigop(std::span<const FrameModelSet> models, double r_tar, VirtualCodec& codec,
                         std::size_t start_index, double ref_mse, const AllocatorConfig& cfg,
                         BufferState& buffer) {
  const std::uint64_t calls_before = codec.invocation_count();
  EncodeReport report;
  report.target_total = r_tar;
  report.buffer_in = buffer.bits;

  const auto plan_start = Clock::now();
  report.plan = plan_minigop(models, r_tar, cfg, codec.lambda_min(), codec.lambda_max());
  report.control_seconds = seconds_since(plan_start);

  const double ratio_sum =
      std::accumulate(report.plan.ratios.begin(), report.plan.ratios.end(), 0.0);
  const bool clamped = report.plan.clamp != ClampStatus::kInRange;

  double ref = ref_mse;
  const auto encode_start = Clock::now();
  for (std::size_t i = 0; i < models.size(); ++i) {
    FrameRecord rec;
    rec.frame_index = start_index + i;
    rec.budget_bpp = frame_budget(report.plan.ratios[i], ratio_sum, r_tar, buffer);
    if (clamped) {
      rec.lambda = report.plan.lambdas[i];
      rec.lambda_clamp = report.plan.clamp == ClampStatus::kClampedHigh ? LambdaClamp::kHigh
                                                                        : LambdaClamp::kLow;
    } else {
      rec.lambda = clamp_lambda(models[i].r_lambda, rec.budget_bpp, codec.lambda_min(),
                                codec.lambda_max(), rec.lambda_clamp);
    }
    const EncodeResult out = codec.encode_frame(rec.frame_index, rec.lambda, ref);
    rec.actual_bpp = out.bpp;
    rec.actual_mse = out.mse;
    buffer.bits = rec.budget_bpp - out.bpp;
    rec.buffer_after = buffer.bits;
    ref = out.mse;
    report.frames.push_back(rec);
  }
  report.encode_seconds = seconds_since(encode_start);
  report.buffer_out = buffer.bits;
  report.final_ref_mse = ref;
  report.encode_invocations = models.size();
  report.control_invocations = codec.invocation_count() - calls_before - models.size();
  return report;
}

EncodeReport run_minigop(std::span<const FrameModelSet> models, double r_tar, VirtualCodec& codec,
                         std::size_t start_index, double ref_mse, const AllocatorConfig& cfg) {
  BufferState buffer;
  return run_minigop(models, r_tar, codec, start_index, ref_mse, cfg, buffer);
}

ReferenceEstimate reference_estimate(const RDSampleSet& previous_prediction) {
  // mse is non-increasing along the grid after repair, so the extremes sit
  // at the ends; take min/max anyway for unrepaired inputs.
  const auto [lo, hi] =
      std::minmax_element(previous_prediction.mse.begin(), previous_prediction.mse.end());
  ReferenceEstimate est;
  est.d_max = std::min(*hi, 1.0);
  est.d_min = std::min(*lo, est.d_max);
  const double scale = distortion_addition_scale(est.d_max, est.d_min);
  est.variance = scale * scale;
  return est;
}

std::vector<EncodeReport> run_sequence(const SequenceInputs& inputs, VirtualCodec& codec,
                                       const AllocatorConfig& cfg) {
  cfg.validate();
  require(inputs.predictor != nullptr, ErrorKind::kArgument, "run_sequence needs a predictor");
  require(inputs.target_bpp > 0.0, ErrorKind::kArgument, "target bpp must be positive");
  const std::size_t n_frames = codec.size();
  require(n_frames >= static_cast<std::size_t>(cfg.minigop_size), ErrorKind::kArgument,
          "sequence shorter than one mini-GOP");
  require(inputs.grid.lambda_min() == codec.lambda_min() &&
              inputs.grid.lambda_max() == codec.lambda_max(),
          ErrorKind::kArgument, "lambda grid must span the codec's lambda range");
  if (inputs.predictor->needs_frames()) {
    require(inputs.frames != nullptr && inputs.frames->size() >= n_frames, ErrorKind::kArgument,
            "predictor '" + inputs.predictor->name() + "' needs one pixel frame per coded frame");
  }

  std::vector<EncodeReport> reports;
  BufferState buffer;
  double ref_mse = 0.0;
  std::optional<RDSampleSet> previous_prediction;
  const auto n = static_cast<std::size_t>(cfg.minigop_size);

  for (std::size_t start = 0; start < n_frames; start += n) {
    const std::size_t count = std::min(n, n_frames - start);
    if (cfg.buffer_policy == BufferPolicy::kResetPerMinigop) buffer = BufferState{};

    const auto predict_start = Clock::now();
    std::vector<FrameModelSet> models;
    models.reserve(count);
    for (std::size_t f = start; f < start + count; ++f) {
      PredictionRequest request;
      request.frame_index = f;
      std::optional<FramePair> pair;
      std::optional<ReferenceEstimate> estimate;
      if (previous_prediction) {
        estimate = reference_estimate(*previous_prediction);
        request.ref_quality = estimate->variance;
      }
      if (inputs.predictor->needs_frames()) {
        const Frame& current = inputs.frames->frames[f];
        if (f == 0 || !estimate) {
          pair.emplace(current, current);
        } else {
          pair.emplace(distortion_addition(inputs.frames->frames[f - 1], estimate->d_max,
                                           estimate->d_min, derive_seed(inputs.seed, f)),
                       current);
        }
        request.pair = &*pair;
      }
      RDSampleSet samples = repair_monotone(inputs.predictor->predict(request, inputs.grid));
      models.push_back(fit_frame_models(samples));
      previous_prediction = std::move(samples);
    }
    const double predict_seconds = seconds_since(predict_start);

    const double r_tar = inputs.target_bpp * static_cast<double>(count);
    EncodeReport report = run_minigop(models, r_tar, codec, start, ref_mse, cfg, buffer);
    report.control_seconds += predict_seconds;
    ref_mse = report.final_ref_mse;
    reports.push_back(std::move(report));
  }
  return reports;
}

}  // namespace lambdarc
