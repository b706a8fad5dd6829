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

#ifndef LAMBDARC_LAMBDA_GRID_HPP
#define LAMBDARC_LAMBDA_GRID_HPP

#include <span>
#include <vector>

namespace lambdarc {

// Exponentially spaced lambda set including both range endpoints.
class LambdaGrid {
 public:
  LambdaGrid(double lambda_min, double lambda_max, int m);

  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }
  double lambda_min() const noexcept { return values_.front(); }
  double lambda_max() const noexcept { return values_.back(); }

  bool operator==(const LambdaGrid&) const = default;

 private:
  std::vector<double> values_;
};

inline LambdaGrid make_grid(double lambda_min, double lambda_max, int m) {
  return LambdaGrid(lambda_min, lambda_max, m);
}

// Predicted or measured (bpp, mse) at every grid lambda.
struct RDSampleSet {
  RDSampleSet(LambdaGrid grid, std::vector<double> bpp, std::vector<double> mse);

  LambdaGrid grid;
  std::vector<double> bpp;
  std::vector<double> mse;

  bool operator==(const RDSampleSet&) const = default;
};

// Isotonic regression by pool-adjacent-violators; unweighted L2.
std::vector<double> isotonic_fit(std::span<const double> values, bool increasing);

// Forces bpp non-decreasing and mse non-increasing along the grid.
RDSampleSet repair_monotone(RDSampleSet samples);

}  // namespace lambdarc

#endif  // LAMBDARC_LAMBDA_GRID_HPP
