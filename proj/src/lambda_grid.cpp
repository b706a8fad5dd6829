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

#include "lambdarc/lambda_grid.hpp"

#include <cmath>

#include "lambdarc/error.hpp"

namespace lambdarc {

LambdaGrid::LambdaGrid(double lambda_min, double lambda_max, int m) {
  require(lambda_min > 0.0 && lambda_min < lambda_max && std::isfinite(lambda_max),
          ErrorKind::kArgument, "lambda grid needs 0 < lambda_min < lambda_max");
  require(m >= 2, ErrorKind::kArgument, "lambda grid needs at least two points");
  values_.resize(static_cast<std::size_t>(m));
  const double ratio = lambda_max / lambda_min;
  for (int i = 0; i < m; ++i) {
    values_[static_cast<std::size_t>(i)] =
        lambda_min * std::pow(ratio, static_cast<double>(i) / static_cast<double>(m - 1));
  }
  // Endpoints exact regardless of pow rounding.
  values_.front() = lambda_min;
  values_.back() = lambda_max;
}

RDSampleSet::RDSampleSet(LambdaGrid g, std::vector<double> b, std::vector<double> d)
    : grid(std::move(g)), bpp(std::move(b)), mse(std::move(d)) {
  require(bpp.size() == grid.size() && mse.size() == grid.size(), ErrorKind::kArgument,
          "sample vectors must match the grid size");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    require(bpp[i] > 0.0 && mse[i] > 0.0 && std::isfinite(bpp[i]) && std::isfinite(mse[i]),
            ErrorKind::kArgument, "predicted samples must be finite and positive");
  }
}

std::vector<double> isotonic_fit(std::span<const double> values, bool increasing) {
  struct Block {
    double sum;
    std::size_t count;
    double mean() const { return sum / static_cast<double>(count); }
  };
  const double sign = increasing ? 1.0 : -1.0;
  std::vector<Block> blocks;
  blocks.reserve(values.size());
  for (double v : values) {
    blocks.push_back({sign * v, 1});
    while (blocks.size() > 1 && blocks[blocks.size() - 2].mean() > blocks.back().mean()) {
      const Block last = blocks.back();
      blocks.pop_back();
      blocks.back().sum += last.sum;
      blocks.back().count += last.count;
    }
  }
  std::vector<double> out;
  out.reserve(values.size());
  for (const Block& b : blocks) out.insert(out.end(), b.count, sign * b.mean());
  return out;
}

RDSampleSet repair_monotone(RDSampleSet samples) {
  samples.bpp = isotonic_fit(samples.bpp, true);
  samples.mse = isotonic_fit(samples.mse, false);
  return samples;
}

}  // namespace lambdarc
