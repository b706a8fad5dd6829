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

#include "lambdarc/rdmodel.hpp"

#include <cmath>
#include <regex>

#include "lambdarc/error.hpp"
#include "lambdarc/report_io.hpp"

namespace lambdarc {

PowerLawModel::PowerLawModel(double a, double b) : alpha(a), beta(b) {
  require(std::isfinite(a) && a > 0.0, ErrorKind::kArgument, "power-law alpha must be positive");
  require(std::isfinite(b), ErrorKind::kArgument, "power-law beta must be finite");
}

double PowerLawModel::eval(double lambda) const {
  require(lambda > 0.0, ErrorKind::kArgument, "lambda must be positive");
  return alpha * std::pow(lambda, beta);
}

double PowerLawModel::invert(double value) const {
  require(beta != 0.0, ErrorKind::kNonInvertible, "power law with beta = 0 is not invertible");
  require(value > 0.0, ErrorKind::kArgument, "value to invert must be positive");
  return std::pow(value / alpha, 1.0 / beta);
}

RDCurve::RDCurve(double c_, double k_) : c(c_), k(k_) {
  require(std::isfinite(c_) && c_ > 0.0 && std::isfinite(k_) && k_ > 0.0,
          ErrorKind::kModelShape, "R-D curve needs c > 0 and k > 0");
}

double RDCurve::distortion_of_rate(double rate) const {
  require(rate > 0.0, ErrorKind::kArgument, "rate must be positive");
  return c * std::pow(rate, -k);
}

double RDCurve::rate_of_distortion(double distortion) const {
  require(distortion > 0.0, ErrorKind::kArgument, "distortion must be positive");
  return std::pow(c / distortion, 1.0 / k);
}

double RDCurve::slope_lambda(double rate) const {
  require(rate > 0.0, ErrorKind::kArgument, "rate must be positive");
  return c * k * std::pow(rate, -k - 1.0);
}

PowerLawModel fit_power_law(std::span<const LambdaSample> samples, std::size_t min_count) {
  require(samples.size() >= std::max<std::size_t>(min_count, 2), ErrorKind::kFit,
          "power-law fit needs at least " + std::to_string(std::max<std::size_t>(min_count, 2)) +
              " samples, got " + std::to_string(samples.size()));
  const double n = static_cast<double>(samples.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (const LambdaSample& s : samples) {
    require(s.lambda > 0.0 && s.value > 0.0 && std::isfinite(s.lambda) && std::isfinite(s.value),
            ErrorKind::kFit, "power-law fit needs strictly positive samples");
    mean_x += std::log(s.lambda);
    mean_y += std::log(s.value);
  }
  mean_x /= n;
  mean_y /= n;

  // Centered sums keep the normal equations well conditioned.
  double sxx = 0.0;
  double sxy = 0.0;
  for (const LambdaSample& s : samples) {
    const double dx = std::log(s.lambda) - mean_x;
    sxx += dx * dx;
    sxy += dx * (std::log(s.value) - mean_y);
  }
  require(sxx > 0.0, ErrorKind::kFit, "power-law fit needs distinct lambda values");
  const double beta = sxy / sxx;
  return PowerLawModel(std::exp(mean_y - beta * mean_x), beta);
}

RDCurve derive_rd_curve(const PowerLawModel& rate, const PowerLawModel& distortion) {
  require(rate.beta > 0.0, ErrorKind::kModelShape, "rate model must increase with lambda");
  require(distortion.beta < 0.0, ErrorKind::kModelShape,
          "distortion model must decrease with lambda");
  const double k = -distortion.beta / rate.beta;
  return RDCurve(distortion.alpha * std::pow(rate.alpha, -distortion.beta / rate.beta), k);
}

FrameModelSet FrameModelSet::build(PowerLawModel rate, PowerLawModel distortion,
                                   double lambda_min, double lambda_max) {
  require(lambda_min > 0.0 && lambda_min < lambda_max, ErrorKind::kArgument,
          "lambda range must satisfy 0 < lambda_min < lambda_max");
  if (std::abs(rate.beta) < kMinAbsBeta) {
    fail(ErrorKind::kFit, "degenerate rate model (beta ~ 0)");
  }
  require(rate.beta > 0.0, ErrorKind::kModelShape, "rate model must increase with lambda");
  if (distortion.beta > -kMinAbsBeta) distortion.beta = -kMinAbsBeta;

  FrameModelSet set;
  set.r_lambda = rate;
  set.d_lambda = distortion;
  set.rd = derive_rd_curve(rate, distortion);
  set.r_min = rate.eval(lambda_min);
  set.r_max = rate.eval(lambda_max);
  set.d_min = distortion.eval(lambda_max);
  set.d_max = distortion.eval(lambda_min);
  return set;
}

std::string to_record(const PowerLawModel& model) {
  return "{alpha=" + format_double(model.alpha) + ",beta=" + format_double(model.beta) + "}";
}

std::string to_record(const RDCurve& curve) {
  return "{c=" + format_double(curve.c) + ",k=" + format_double(curve.k) + "}";
}

namespace {

std::pair<double, double> parse_pair_record(const std::string& record, const char* first,
                                            const char* second) {
  const std::regex pattern(std::string(R"(^\{\s*)") + first + R"(\s*=\s*([^,\s}]+)\s*,\s*)" +
                           second + R"(\s*=\s*([^,\s}]+)\s*\}$)");
  std::smatch match;
  if (!std::regex_match(record, match, pattern)) {
    fail(ErrorKind::kParse, "malformed model record '" + record + "'");
  }
  return {parse_double(match[1].str()), parse_double(match[2].str())};
}

}  // namespace

PowerLawModel power_law_from_record(const std::string& record) {
  const auto [a, b] = parse_pair_record(record, "alpha", "beta");
  return PowerLawModel(a, b);
}

RDCurve rd_curve_from_record(const std::string& record) {
  const auto [c, k] = parse_pair_record(record, "c", "k");
  return RDCurve(c, k);
}

}  // namespace lambdarc
