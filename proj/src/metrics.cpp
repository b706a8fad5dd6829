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

#include "lambdarc/metrics.hpp"

#include <cmath>
#include <numeric>

#include "lambdarc/error.hpp"

namespace lambdarc {

double rate_error(double actual_total, double target_total) {
  require(target_total > 0.0, ErrorKind::kArgument, "target rate must be positive");
  return std::abs(actual_total - target_total) / target_total;
}

double quality_fluctuation(std::span<const double> mses) {
  require(!mses.empty(), ErrorKind::kArgument, "quality fluctuation needs at least one MSE");
  const double n = static_cast<double>(mses.size());
  const double mean = std::accumulate(mses.begin(), mses.end(), 0.0) / n;
  require(mean > 0.0, ErrorKind::kArgument, "quality fluctuation needs a positive mean MSE");
  double dev = 0.0;
  for (double m : mses) dev += std::abs(m - mean);
  return dev / n / mean;
}

double fluctuation_ratio(std::span<const double> controlled, std::span<const double> fixed_lambda) {
  const double reference = quality_fluctuation(fixed_lambda);
  require(reference > 0.0, ErrorKind::kArgument,
          "fluctuation ratio undefined: fixed-lambda series has zero fluctuation");
  return quality_fluctuation(controlled) / reference;
}

double t_rc(double control_seconds, double encode_seconds) {
  require(encode_seconds > 0.0, ErrorKind::kArgument, "encode time must be positive");
  return control_seconds / encode_seconds;
}

}  // namespace lambdarc
