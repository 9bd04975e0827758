// Copyright 2026 The jsccsj Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "jsccsj/prob.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace jsccsj {
namespace {

TEST(Pmf, ValidConstruction) {
  const Pmf p({0.25, 0.75});
  EXPECT_EQ(p.size(), 2u);
  EXPECT_DOUBLE_EQ(p[0], 0.25);
  EXPECT_DOUBLE_EQ(p[1], 0.75);
}

TEST(Pmf, RenormalizesSmallDrift) {
  const Pmf p({0.25 + 3e-10, 0.75});
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += p[i];
  EXPECT_NEAR(sum, 1.0, kPmfSumTol);
}

TEST(Pmf, RejectsLargeDrift) {
  EXPECT_THROW(Pmf({0.45, 0.45}), std::invalid_argument);
}

TEST(Pmf, RejectsNegativeEntries) {
  EXPECT_THROW(Pmf({-0.5, 1.5}), std::invalid_argument);
}

TEST(Pmf, ClampsRoundingDust) {
  const Pmf p({-1e-14, 1.0});
  EXPECT_EQ(p[0], 0.0);
}

TEST(Pmf, DeltaAndUniform) {
  const Pmf d = Pmf::delta(3, 1);
  EXPECT_DOUBLE_EQ(d[0], 0.0);
  EXPECT_DOUBLE_EQ(d[1], 1.0);
  const Pmf u = Pmf::uniform(4);
  EXPECT_DOUBLE_EQ(u[2], 0.25);
}

TEST(CondKernel, RejectsRaggedRows) {
  EXPECT_THROW(CondKernel({Pmf({0.5, 0.5}), Pmf({1.0, 0.0, 0.0})}),
               std::invalid_argument);
}

TEST(CondKernel, DeterministicIsOneHot) {
  const CondKernel k = CondKernel::deterministic(3, {2, 0});
  EXPECT_DOUBLE_EQ(k(0, 2), 1.0);
  EXPECT_DOUBLE_EQ(k(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(k(1, 0), 1.0);
}

TEST(KlDivergence, IdenticalIsZero) {
  EXPECT_DOUBLE_EQ(kl_divergence(Pmf({0.5, 0.5}), Pmf({0.5, 0.5})), 0.0);
}

TEST(KlDivergence, PointMassAgainstUniform) {
  EXPECT_NEAR(kl_divergence(Pmf({1.0, 0.0}), Pmf({0.5, 0.5})), std::log(2.0),
              1e-15);
}

TEST(KlDivergence, QuarterThreeQuartersAgainstUniform) {
  // Direct evaluation of the definition.
  const double expected = 0.25 * std::log(0.25 / 0.5) + 0.75 * std::log(0.75 / 0.5);
  EXPECT_NEAR(expected, 0.130812, 1e-6);
  EXPECT_NEAR(kl_divergence(Pmf({0.25, 0.75}), Pmf({0.5, 0.5})), expected,
              1e-15);
}

TEST(KlDivergence, SupportViolationThrows) {
  EXPECT_THROW(kl_divergence(Pmf({0.5, 0.5}), Pmf({1.0, 0.0})),
               std::domain_error);
  EXPECT_TRUE(std::isinf(
      kl_divergence_or_infinity(Pmf({0.5, 0.5}), Pmf({1.0, 0.0}))));
}

TEST(KlDivergence, SizeMismatchThrows) {
  EXPECT_THROW(kl_divergence(Pmf({1.0}), Pmf({0.5, 0.5})),
               std::invalid_argument);
}

// Non-negativity over random pairs, with equality exactly for equal pmfs:
// Pinsker's inequality bounds the total variation both ways.
TEST(KlDivergence, NonNegativeOnRandomPairs) {
  std::mt19937_64 rng(20260515);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 5);
    const Pmf p = testutil::random_pmf(rng, n);
    const Pmf q = testutil::random_pmf(rng, n);
    const double kl = kl_divergence(p, q);
    ASSERT_GE(kl, 0.0);
    double l1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) l1 += std::abs(p[i] - q[i]);
    if (kl <= 1e-12) {
      ASSERT_LE(l1, 2e-6);
    }
    if (l1 > 1e-3) {
      ASSERT_GT(kl, 1e-8);
    }
  }
}

TEST(KlDivergence, SelfDivergenceIsZeroWithinTolerance) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const Pmf p = testutil::random_pmf(rng, 4);
    EXPECT_NEAR(kl_divergence(p, p), 0.0, 1e-12);
  }
}

TEST(TupleIndexing, PackUnpackRoundTrip) {
  for (std::size_t idx = 0; idx < 27; ++idx) {
    const auto digits = detail::unpack_tuple(idx, 3, 3);
    EXPECT_EQ(detail::pack_tuple(digits, 3), idx);
  }
  EXPECT_EQ(detail::pack_tuple({1, 2}, 4), 6u);
}

}  // namespace
}  // namespace jsccsj
