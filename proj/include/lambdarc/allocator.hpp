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

#ifndef LAMBDARC_ALLOCATOR_HPP
#define LAMBDARC_ALLOCATOR_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lambdarc/codec_sim.hpp"
#include "lambdarc/frameio.hpp"
#include "lambdarc/lambda_grid.hpp"
#include "lambdarc/predictor.hpp"
#include "lambdarc/rdmodel.hpp"

namespace lambdarc {

enum class BufferPolicy {
  kPersist,          // carry the buffer across mini-GOP boundaries
  kResetPerMinigop,  // every mini-GOP starts from an empty buffer
};

enum class BudgetPolicy {
  kEqualDistortion,  // bisection on a shared target distortion
  kUniform,          // equal share of the target per frame
};

struct AllocatorConfig {
  int max_iters = 100;
  double tolerance = 0.01;
  int minigop_size = 4;
  BufferPolicy buffer_policy = BufferPolicy::kPersist;
  BudgetPolicy budget_policy = BudgetPolicy::kEqualDistortion;

  void validate() const;
};

enum class Feasibility { kInRange, kAboveMax, kBelowMin };
enum class ClampStatus { kInRange, kClampedHigh, kClampedLow };
enum class LambdaClamp { kNone, kHigh, kLow };

const char* to_string(Feasibility f);
const char* to_string(ClampStatus c);

// Boundaries are inclusive: r_tar equal to the summed maximum is in range.
Feasibility feasibility(std::span<const FrameModelSet> models, double r_tar);

struct SearchResult {
  double d_tar = 0.0;
  std::vector<double> frame_rates;
  int iterations_used = 0;
  bool converged = false;
};

// Bisection for the distortion shared by every frame such that the summed
// rates hit r_tar within cfg.tolerance. The bracket starts at
// [max_i d_min_i, min_i d_max_i]; an empty bracket throws
// ErrorKind::kInfeasibleBracket. When the iteration cap is reached first, the
// best distortion seen is returned with converged = false.
SearchResult search_target_distortion(std::span<const FrameModelSet> models, double r_tar,
                                      const AllocatorConfig& cfg);

std::vector<double> derive_ratios(std::span<const double> frame_rates);

struct BufferState {
  double bits = 0.0;  // surplus > 0, deficit < 0
};

double frame_budget(double ratio, double ratio_sum, double r_tar, BufferState buffer);

struct AllocationPlan {
  double d_tar = 0.0;
  std::vector<double> frame_rates;
  std::vector<double> ratios;
  std::vector<double> lambdas;  // before buffer carry
  ClampStatus clamp = ClampStatus::kInRange;
  int iterations_used = 0;
  bool converged = true;
};

AllocationPlan plan_minigop(std::span<const FrameModelSet> models, double r_tar,
                            const AllocatorConfig& cfg, double lambda_min, double lambda_max);

struct FrameRecord {
  std::size_t frame_index = 0;
  double lambda = 0.0;
  double budget_bpp = 0.0;
  double actual_bpp = 0.0;
  double actual_mse = 0.0;
  double buffer_after = 0.0;
  LambdaClamp lambda_clamp = LambdaClamp::kNone;
};

struct EncodeReport {
  std::vector<FrameRecord> frames;
  AllocationPlan plan;
  double target_total = 0.0;
  double buffer_in = 0.0;
  double buffer_out = 0.0;
  double final_ref_mse = 0.0;
  std::uint64_t encode_invocations = 0;
  std::uint64_t control_invocations = 0;
  double control_seconds = 0.0;
  double encode_seconds = 0.0;

  double total_bpp() const;
  double total_budget() const;
  std::vector<double> mses() const;
};

// Encodes frames [start_index, start_index + models.size()) under one plan.
// The per-frame budget is the planned share plus the whole running buffer;
// after each encode the buffer becomes budget - actual. ref_mse seeds the
// reference-quality chain and buffer is updated in place.
EncodeReport run_minigop(std::span<const FrameModelSet> models, double r_tar, VirtualCodec& codec,
                         std::size_t start_index, double ref_mse, const AllocatorConfig& cfg,
                         BufferState& buffer);

// Convenience form with an empty incoming buffer.
EncodeReport run_minigop(std::span<const FrameModelSet> models, double r_tar, VirtualCodec& codec,
                         std::size_t start_index, double ref_mse, const AllocatorConfig& cfg);

// Reference-quality estimate used for prediction: the variance of the
// distortion-addition field built from the previous pair's predicted MSE
// extremes (clamped into the normalized domain).
struct ReferenceEstimate {
  double d_max = 0.0;
  double d_min = 0.0;
  double variance = 0.0;
};
ReferenceEstimate reference_estimate(const RDSampleSet& previous_prediction);

struct SequenceInputs {
  const Predictor* predictor = nullptr;
  const Sequence* frames = nullptr;  // required when the predictor reads pixels
  LambdaGrid grid;
  double target_bpp = 0.1;  // average per frame; a mini-GOP of n frames targets n * target_bpp
  std::uint64_t seed = 0;
};

// Predict -> fit -> allocate -> encode over consecutive mini-GOPs. A trailing
// partial mini-GOP runs the same algorithm with fewer frames. The
// reconstructed-quality chain and (by policy) the buffer cross mini-GOP
// boundaries.
std::vector<EncodeReport> run_sequence(const SequenceInputs& inputs, VirtualCodec& codec,
                                       const AllocatorConfig& cfg);

}  // namespace lambdarc

#endif  // LAMBDARC_ALLOCATOR_HPP
