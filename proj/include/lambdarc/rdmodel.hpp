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

#ifndef LAMBDARC_RDMODEL_HPP
#define LAMBDARC_RDMODEL_HPP

#include <span>
#include <string>
#include <utility>

namespace lambdarc {

// value = alpha * lambda^beta. Serves both the rate model (beta > 0) and the
// distortion model (beta < 0).
struct PowerLawModel {
  double alpha = 1.0;
  double beta = 0.0;

  PowerLawModel() = default;
  PowerLawModel(double alpha, double beta);

  double eval(double lambda) const;
  // lambda such that eval(lambda) == value.
  double invert(double value) const;
};

// Hyperbolic rate-distortion curve D(R) = c * R^-k.
struct RDCurve {
  double c = 1.0;
  double k = 1.0;

  RDCurve() = default;
  RDCurve(double c, double k);

  double distortion_of_rate(double rate) const;
  double rate_of_distortion(double distortion) const;
  // -dD/dR at the given rate.
  double slope_lambda(double rate) const;
};

struct LambdaSample {
  double lambda;
  double value;
};

// Unweighted least squares on ln(value) = ln(alpha) + beta * ln(lambda).
PowerLawModel fit_power_law(std::span<const LambdaSample> samples, std::size_t min_count = 2);

// Eliminates lambda between R = a1*l^b1 and D = a2*l^b2.
RDCurve derive_rd_curve(const PowerLawModel& rate, const PowerLawModel& distortion);

// |beta| below this is treated as a degenerate fit.
inline constexpr double kMinAbsBeta = 1e-6;

// Per-frame model bundle consumed by the allocator.
struct FrameModelSet {
  PowerLawModel r_lambda;
  PowerLawModel d_lambda;
  RDCurve rd;
  double r_min = 0.0;  // rate at lambda_min
  double r_max = 0.0;  // rate at lambda_max
  double d_min = 0.0;  // distortion at lambda_max
  double d_max = 0.0;  // distortion at lambda_min

  // Rejects a flat or decreasing rate model; a flat distortion model is
  // pushed to beta = -kMinAbsBeta so the curve stays invertible.
  static FrameModelSet build(PowerLawModel rate, PowerLawModel distortion, double lambda_min,
                             double lambda_max);
};

// Compact "{alpha=..,beta=..}" / "{c=..,k=..}" records for logs and CSV cells.
std::string to_record(const PowerLawModel& model);
std::string to_record(const RDCurve& curve);
PowerLawModel power_law_from_record(const std::string& record);
RDCurve rd_curve_from_record(const std::string& record);

}  // namespace lambdarc

#endif  // LAMBDARC_RDMODEL_HPP
