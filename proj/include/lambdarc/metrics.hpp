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

#ifndef LAMBDARC_METRICS_HPP
#define LAMBDARC_METRICS_HPP

#include <span>

namespace lambdarc {

// |actual - target| / target.
double rate_error(double actual_total, double target_total);

// Mean absolute deviation of the MSE series divided by its mean.
double quality_fluctuation(std::span<const double> mses);

// Q_F under rate control over Q_F of fixed-lambda coding.
double fluctuation_ratio(std::span<const double> controlled, std::span<const double> fixed_lambda);

// Rate-control time over encoding time.
double t_rc(double control_seconds, double encode_seconds);

struct MetricRecord {
  double delta_r = 0.0;
  double q_f = 0.0;
  double fluctuation_ratio = 0.0;
  double t_rc = 0.0;
  double invocation_ratio = 0.0;  // control-path calls / encode-path calls
};

}  // namespace lambdarc

#endif  // LAMBDARC_METRICS_HPP
