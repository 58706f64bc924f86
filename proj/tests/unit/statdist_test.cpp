/*
 * Copyright 2026 The ckksid Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "ckksid/statdist.hpp"

#include <gtest/gtest.h>
#include <quadmath.h>

#include <cmath>

#include "ckksid/error.hpp"

namespace ckksid {
namespace {

LatticeSpec Integers(int dim = 1, double scale = 1.0) {
  LatticeSpec l;
  l.dim = dim;
  l.scale = scale;
  return l;
}

// Quad-precision direct sum over Z, independent of the enumeration code.
double TailRatioOracleZ(double sigma, double gamma) {
  __float128 tail = 0, total = 0;
  const __float128 two_var = 2 * (__float128)sigma * sigma;
  for (long m = -2000; m <= 2000; ++m) {
    const __float128 w = expq(-(__float128)m * m / two_var);
    total += w;
    if (fabsq((__float128)m) > gamma) tail += w;
  }
  return (double)(tail / total);
}

TEST(TailRatioTest, MatchesQuadPrecisionOracle) {
  for (double gamma : {3.0, 10.0, 20.5, 40.0}) {
    const double want = TailRatioOracleZ(3.2, gamma);
    EXPECT_NEAR(tail_ratio(3.2, gamma, Integers()), want, 1e-12 * want + 1e-300) << gamma;
  }
}

TEST(TailRatioTest, VanishesForHugeGamma) {
  EXPECT_EQ(tail_ratio(3.2, 1e6, Integers()), 0.0);
  EXPECT_LT(tail_ratio(3.2, 200, Integers()), 1e-300);
}

TEST(TailRatioTest, RadiusTooSmallThrows) {
  LatticeSpec l = Integers();
  l.radius = 12.0;
  EXPECT_THROW(tail_ratio(3.2, 10.0, l), PrecisionError);
  l.radius = 200.0;
  EXPECT_NO_THROW(tail_ratio(3.2, 10.0, l));
}

TEST(TailRatioTest, CosetShiftAndDimension) {
  LatticeSpec l = Integers(2);
  l.shift = {0.5, 0.25};
  const double r = tail_ratio(2.0, 5.0, l);
  EXPECT_GT(r, 0.0);
  EXPECT_LT(r, 1.0);
  l.shift = {0.5};
  EXPECT_THROW(tail_ratio(2.0, 5.0, l), ParameterError);
  EXPECT_THROW(tail_ratio(2.0, 5.0, Integers(4)), ParameterError);
}

TEST(TailRatioTest, BelowBanaszczykBound) {
  for (int n = 1; n <= 3; ++n) {
    for (double sigma : {0.8, 1.5, 3.2}) {
      for (double mult : {1.0, 1.5, 2.0, 3.0, 4.0}) {
        const double gamma = mult * sigma * std::sqrt(n);
        EXPECT_LE(tail_ratio(sigma, gamma, Integers(n)), banaszczyk_bound(sigma, gamma, n))
            << n << " " << sigma << " " << gamma;
      }
    }
  }
}

TEST(BanaszczykTest, Values) {
  EXPECT_DOUBLE_EQ(banaszczyk_bound(1.0, 0.0, 1), 2.0);
  const double v = banaszczyk_bound(3.2, 18491, 8192);
  EXPECT_DOUBLE_EQ(v, 2.0 * std::exp(-18491.0 * 18491.0 / (2.0 * 8192 * 3.2 * 3.2)));
  EXPECT_GT(banaszczyk_bound(3.2, 10, 1), banaszczyk_bound(3.2, 11, 1));
}

TEST(TruncationTest, Thresholds) {
  const auto v = check_truncation_condition(3.2, 18491, 8192);
  EXPECT_FALSE(v.pass);
  EXPECT_NEAR(v.threshold, 3.2 * (std::sqrt(2.0) * 8192 + 1), 1e-9);
  EXPECT_NEAR(v.threshold, 37076.0, 0.5);
  EXPECT_TRUE(check_truncation_condition(3.2, v.threshold, 8192).pass);
  const auto small = check_truncation_condition(1.0, 3.0, 1);
  EXPECT_TRUE(small.pass);
  EXPECT_NEAR(small.threshold, 2.41421356, 1e-8);
}

TEST(TruncationTest, ConditionImpliesExpMinusN) {
  for (int n = 1; n <= 3; ++n) {
    for (double sigma : {0.7, 1.0, 2.0, 3.2}) {
      const double gamma = check_truncation_condition(sigma, 0, n).threshold;
      EXPECT_LE(tail_ratio(sigma, gamma, Integers(n)), std::exp(-n));
    }
  }
}

TEST(SmoothingTest, MatchesDirectSumCrossing) {
  const double eps = std::exp(-1.0);
  const double eta = smoothing_parameter(Integers(), eps);
  // Oracle: 2 sum_{k>=1} exp(-2 pi^2 s^2 k^2) crosses eps at eta.
  auto sum = [](double s) {
    double acc = 0;
    for (int k = 1; k < 50; ++k) acc += 2 * std::exp(-2 * M_PI * M_PI * s * s * k * k);
    return acc;
  };
  EXPECT_LE(sum(eta), eps * (1 + 1e-12));
  EXPECT_GT(sum(eta * (1 - 1e-9)), eps);
}

TEST(SmoothingTest, MonotoneAndScaling) {
  const double e1 = smoothing_parameter(Integers(), 0.01);
  const double e2 = smoothing_parameter(Integers(), 0.1);
  EXPECT_GE(e1, e2);
  EXPECT_NEAR(smoothing_parameter(Integers(1, 3.0), 0.1), 3.0 * e2, 1e-12);
  EXPECT_NEAR(smoothing_parameter(Integers(2, 0.5), 0.1),
              0.5 * smoothing_parameter(Integers(2), 0.1), 1e-12);
}

TEST(ConvolvedDistanceTest, VanishesForWideNoise) {
  // sigma small relative to a wide smoothing Gaussian.
  EXPECT_LT(convolved_distance(0.05, 1e9, 5.0, Integers(1, 0.05)), 1e-10);
}

TEST(ConvolvedDistanceTest, ThreeExpBoundAtDimOne) {
  const double sigma = 3.2;
  const double eta = smoothing_parameter(Integers(), std::exp(-1.0));
  // Largest tau passing the smoothing condition.
  double tau = 2.0;
  while (!smoothing_condition_holds(sigma, tau, eta)) tau *= 0.99;
  const double gamma = check_truncation_condition(sigma, 0, 1).threshold;
  const double d = convolved_distance(sigma, gamma, tau, Integers());
  EXPECT_LE(d, 3 * std::exp(-1.0));
  EXPECT_LE(d, tail_ratio(sigma, gamma, Integers()) + 2 * std::exp(-1.0));
}

TEST(ConvolvedDistanceTest, DecreasesAlongGammaSweep) {
  double prev = 2.0;
  for (double gamma = 1.5; gamma <= 20.0; gamma += 1.0) {
    const double d = convolved_distance(3.2, gamma, 1.0, Integers());
    EXPECT_LE(d, prev + 1e-12) << gamma;
    prev = d;
  }
}

TEST(ConvolvedDistanceTest, StepHalvingConverges) {
  const double a = convolved_distance(3.2, 8.0, 0.7, Integers(), 0.02);
  const double b = convolved_distance(3.2, 8.0, 0.7, Integers(), 0.01);
  EXPECT_LT(std::fabs(a - b), 1e-10);
}

TEST(ConvolvedDistanceTest, CoarseStepThrows) {
  EXPECT_THROW(convolved_distance(3.2, 8.0, 0.05, Integers(), 5.0, 1e-12), PrecisionError);
  EXPECT_THROW(convolved_distance(3.2, 8.0, 0.5, Integers(2)), ParameterError);
}

}  // namespace
}  // namespace ckksid
