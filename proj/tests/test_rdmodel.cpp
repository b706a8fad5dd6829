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


#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "lambdarc/error.hpp"
#include "lambdarc/lambda_grid.hpp"
#include "lambdarc/random.hpp"
#include "lambdarc/rdmodel.hpp"

namespace lambdarc {
namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Independent log-log OLS via the normal equations.
std::pair<double, double> oracle_fit(const std::vector<LambdaSample>& s) {
  Eigen::MatrixXd x(s.size(), 2);
  Eigen::VectorXd y(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    x(i, 0) = 1.0;
    x(i, 1) = std::log(s[i].lambda);
    y(i) = std::log(s[i].value);
  }
  const Eigen::Vector2d b = (x.transpose() * x).ldlt().solve(x.transpose() * y);
  return {std::exp(b(0)), b(1)};
}

TEST(PowerLaw, FitExactSamples) {
  const std::vector<LambdaSample> s = {{1, 2}, {4, 4}, {16, 8}};
  const PowerLawModel m = fit_power_law(s);
  EXPECT_NEAR(m.alpha, 2.0, 1e-12);
  EXPECT_NEAR(m.beta, 0.5, 1e-12);
}

TEST(PowerLaw, FitConstantSeries) {
  const std::vector<LambdaSample> s = {{1, 3}, {2, 3}, {4, 3}};
  const PowerLawModel m = fit_power_law(s);
  EXPECT_NEAR(m.alpha, 3.0, 1e-12);
  EXPECT_NEAR(m.beta, 0.0, 1e-12);
}

TEST(PowerLaw, FitNoisyMatchesIndependentOls) {
  Rng rng(2024);
  std::vector<LambdaSample> s;
  const LambdaGrid grid(0.1, 409.6, 8);
  for (double l : grid.values()) s.push_back({l, 0.5 * std::pow(l, -1.2) * rng.uniform(0.99, 1.01)});
  const PowerLawModel m = fit_power_law(s);
  const auto [alpha, beta] = oracle_fit(s);
  EXPECT_LT(rel(m.alpha, 0.5), 0.05);
  EXPECT_LT(rel(m.beta, -1.2), 0.05);
  EXPECT_NEAR(m.alpha, alpha, 1e-9 * alpha);
  EXPECT_NEAR(m.beta, beta, 1e-9);
}

TEST(PowerLaw, FitErrors) {
  const std::vector<LambdaSample> one = {{1, 1}};
  EXPECT_THROW(fit_power_law(one), Error);
  const std::vector<LambdaSample> same = {{2, 1}, {2, 3}};
  EXPECT_THROW(fit_power_law(same), Error);
  const std::vector<LambdaSample> neg = {{1, 1}, {2, -3}};
  EXPECT_THROW(fit_power_law(neg), Error);
  const std::vector<LambdaSample> three = {{1, 1}, {2, 2}, {4, 4}};
  EXPECT_THROW(fit_power_law(three, 4), Error);
  try {
    fit_power_law(same);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kFit);
  }
}

TEST(PowerLaw, FitRecoversNoiselessParameters) {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const double alpha = std::exp(rng.uniform(-5.0, 3.0));
    const double beta = rng.uniform(-2.0, 2.0);
    const LambdaGrid grid(rng.uniform(0.05, 1.0), rng.uniform(50.0, 1000.0), 2 + trial % 9);
    std::vector<LambdaSample> s;
    for (double l : grid.values()) s.push_back({l, alpha * std::pow(l, beta)});
    const PowerLawModel m = fit_power_law(s);
    EXPECT_LT(rel(m.alpha, alpha), 1e-9);
    EXPECT_LT(std::abs(m.beta - beta), 1e-9 * std::max(1.0, std::abs(beta)));
  }
}

TEST(PowerLaw, Eval) {
  EXPECT_DOUBLE_EQ(PowerLawModel(2, 0.5).eval(4), 4.0);
  EXPECT_DOUBLE_EQ(PowerLawModel(0.7, -3.0).eval(1), 0.7);
  EXPECT_NEAR(PowerLawModel(0.5, -1.2).eval(3), 0.1337903, 1e-7);
  EXPECT_THROW(PowerLawModel(1, 1).eval(0), Error);
  EXPECT_THROW(PowerLawModel(-1, 1), Error);
}

TEST(PowerLaw, Invert) {
  EXPECT_NEAR(PowerLawModel(2, 0.5).invert(4), 4.0, 1e-12);
  EXPECT_NEAR(PowerLawModel(1, 1).invert(7), 7.0, 1e-12);
  EXPECT_NEAR(PowerLawModel(0.5, -1.2).invert(0.1337903), 3.0, 1e-5);
  try {
    PowerLawModel(2, 0).invert(1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNonInvertible);
  }
}

TEST(PowerLaw, RoundTripProperty) {
  Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    double beta = rng.uniform(-3.0, 3.0);
    if (std::abs(beta) < 0.05) beta = 0.05;
    const PowerLawModel m(std::exp(rng.uniform(-4, 4)), beta);
    const double l = std::exp(rng.uniform(-2.3, 6.0));
    EXPECT_LT(rel(m.invert(m.eval(l)), l), 1e-9);
    const double v = std::exp(rng.uniform(-5, 5));
    EXPECT_LT(rel(m.eval(m.invert(v)), v), 1e-9);
  }
}

TEST(RdCurve, Derive) {
  RDCurve a = derive_rd_curve({1, 1}, {1, -1});
  EXPECT_NEAR(a.c, 1.0, 1e-12);
  EXPECT_NEAR(a.k, 1.0, 1e-12);
  RDCurve b = derive_rd_curve({2, 0.5}, {8, -1});
  EXPECT_NEAR(b.c, 32.0, 1e-12);
  EXPECT_NEAR(b.k, 2.0, 1e-12);
  RDCurve c = derive_rd_curve({0.3, 0.7}, {0.05, -0.7});
  EXPECT_NEAR(c.k, 1.0, 1e-12);
  try {
    derive_rd_curve({1, -1}, {1, -1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kModelShape);
  }
  EXPECT_THROW(derive_rd_curve({1, 1}, {1, 0.5}), Error);
}

TEST(RdCurve, DerivedCurveMatchesModelsOnGrid) {
  Rng rng(9);
  const LambdaGrid grid(0.1, 409.6, 8);
  for (int i = 0; i < 100; ++i) {
    const PowerLawModel r(std::exp(rng.uniform(-3, 0)), rng.uniform(0.3, 0.8));
    const PowerLawModel d(std::exp(rng.uniform(-4, -1)), -rng.uniform(0.4, 1.2));
    const RDCurve curve = derive_rd_curve(r, d);
    for (double l : grid.values()) {
      EXPECT_LT(rel(curve.distortion_of_rate(r.eval(l)), d.eval(l)), 1e-9);
    }
  }
}

TEST(RdCurve, RateOfDistortion) {
  EXPECT_NEAR(RDCurve(1, 1).rate_of_distortion(0.5), 2.0, 1e-12);
  EXPECT_NEAR(RDCurve(32, 2).rate_of_distortion(0.5), 8.0, 1e-12);
  EXPECT_NEAR(RDCurve(1, 1).rate_of_distortion(1.0), 1.0, 1e-12);
  EXPECT_THROW(RDCurve(1, 1).rate_of_distortion(0.0), Error);
}

TEST(RdCurve, SlopeLambda) {
  EXPECT_NEAR(RDCurve(1, 1).slope_lambda(1), 1.0, 1e-12);
  EXPECT_NEAR(RDCurve(1, 1).slope_lambda(2), 0.25, 1e-12);
  EXPECT_NEAR(RDCurve(32, 2).slope_lambda(2), 8.0, 1e-12);
  EXPECT_THROW(RDCurve(1, 1).slope_lambda(-1), Error);
}

TEST(RdCurve, SlopeMatchesFiniteDifference) {
  Rng rng(13);
  for (int i = 0; i < 200; ++i) {
    const RDCurve curve(std::exp(rng.uniform(-3, 3)), rng.uniform(0.2, 3.0));
    const double r = std::exp(rng.uniform(-3, 1));
    const double h = 1e-5 * r;
    const double fd = -(curve.distortion_of_rate(r + h) - curve.distortion_of_rate(r - h)) / (2 * h);
    EXPECT_LT(rel(curve.slope_lambda(r), fd), 1e-4);
  }
}

TEST(FrameModelSet, BuildComputesRanges) {
  const FrameModelSet m = FrameModelSet::build({1, 1}, {1, -1}, 1.0, 4.0);
  EXPECT_DOUBLE_EQ(m.r_min, 1.0);
  EXPECT_DOUBLE_EQ(m.r_max, 4.0);
  EXPECT_DOUBLE_EQ(m.d_min, 0.25);
  EXPECT_DOUBLE_EQ(m.d_max, 1.0);
  EXPECT_NEAR(m.rd.c, 1.0, 1e-12);
}

TEST(FrameModelSet, DegenerateBetas) {
  try {
    FrameModelSet::build({1, 1e-9}, {1, -1}, 1, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kFit);
  }
  try {
    FrameModelSet::build({1, -0.5}, {1, -1}, 1, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kModelShape);
  }
  const FrameModelSet flat = FrameModelSet::build({1, 1}, {0.2, 0.0}, 1, 4);
  EXPECT_DOUBLE_EQ(flat.d_lambda.beta, -kMinAbsBeta);
  EXPECT_LT(flat.d_min, flat.d_max);
}

TEST(FrameModelSet, ConsistencyAfterNoiselessFit) {
  const LambdaGrid grid(0.1, 409.6, 8);
  std::vector<LambdaSample> rs;
  std::vector<LambdaSample> ds;
  for (double l : grid.values()) {
    rs.push_back({l, 0.12 * std::pow(l, 0.55)});
    ds.push_back({l, 0.04 * std::pow(l, -0.9)});
  }
  const FrameModelSet m =
      FrameModelSet::build(fit_power_law(rs), fit_power_law(ds), grid.lambda_min(), grid.lambda_max());
  for (double l : grid.values()) {
    EXPECT_LT(rel(m.rd.rate_of_distortion(m.d_lambda.eval(l)), m.r_lambda.eval(l)), 1e-6);
  }
}

TEST(Records, RoundTrip) {
  const PowerLawModel m(0.123456789012345, -1.0 / 3.0);
  const PowerLawModel back = power_law_from_record(to_record(m));
  EXPECT_EQ(back.alpha, m.alpha);
  EXPECT_EQ(back.beta, m.beta);
  const RDCurve c(32.5, 1.75);
  EXPECT_EQ(to_record(c), "{c=32.5,k=1.75}");
  EXPECT_EQ(rd_curve_from_record(to_record(c)).k, 1.75);
  EXPECT_THROW(power_law_from_record("{a=1}"), Error);
}

TEST(LambdaGrid, Examples) {
  const LambdaGrid g(1, 256, 3);
  ASSERT_EQ(g.size(), 3u);
  EXPECT_DOUBLE_EQ(g[0], 1.0);
  EXPECT_NEAR(g[1], 16.0, 1e-12);
  EXPECT_DOUBLE_EQ(g[2], 256.0);
  const LambdaGrid two(2, 8, 2);
  EXPECT_DOUBLE_EQ(two[0], 2.0);
  EXPECT_DOUBLE_EQ(two[1], 8.0);
  const LambdaGrid def = make_grid(0.1, 409.6, 8);
  EXPECT_DOUBLE_EQ(def.lambda_min(), 0.1);
  EXPECT_DOUBLE_EQ(def.lambda_max(), 409.6);
  for (std::size_t i = 1; i < def.size(); ++i) {
    EXPECT_NEAR(def[i] / def[i - 1], std::pow(4096.0, 1.0 / 7.0), 1e-9);
  }
  EXPECT_NEAR(std::pow(4096.0, 1.0 / 7.0), 3.281, 1e-3);
}

TEST(LambdaGrid, Errors) {
  EXPECT_THROW(LambdaGrid(4, 2, 3), Error);
  EXPECT_THROW(LambdaGrid(0, 2, 3), Error);
  EXPECT_THROW(LambdaGrid(1, 2, 1), Error);
}

TEST(Isotonic, PoolsViolators) {
  const std::vector<double> v = {1, 3, 2, 4};
  const auto up = isotonic_fit(v, true);
  EXPECT_EQ(up, (std::vector<double>{1, 2.5, 2.5, 4}));
  const std::vector<double> w = {5, 6, 4, 1};
  const auto down = isotonic_fit(w, false);
  EXPECT_EQ(down, (std::vector<double>{5.5, 5.5, 4, 1}));
}

TEST(Isotonic, RepairProperty) {
  Rng rng(31);
  const LambdaGrid grid(0.1, 409.6, 8);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> b;
    std::vector<double> m;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      b.push_back(rng.uniform(0.01, 2.0));
      m.push_back(rng.uniform(0.001, 0.2));
    }
    const RDSampleSet fixed = repair_monotone(RDSampleSet(grid, b, m));
    double sb = 0, sf = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      sb += b[i];
      sf += fixed.bpp[i];
      if (i > 0) {
        EXPECT_GE(fixed.bpp[i], fixed.bpp[i - 1]);
        EXPECT_LE(fixed.mse[i], fixed.mse[i - 1]);
      }
    }
    EXPECT_NEAR(sb, sf, 1e-9);  // PAV preserves the mean
  }
}

}  // namespace
}  // namespace lambdarc
