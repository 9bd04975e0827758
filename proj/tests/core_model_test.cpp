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

#include "jsccsj/model.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "jsccsj/solvers.hpp"
#include "test_util.hpp"

namespace jsccsj {
namespace {

// Literal five-fold product sum, independent of the factorized paths the
// library uses.
double brute_force_distortion(const JsccsjSystem& sys,
                              const StrategyProfile& prof) {
  double total = 0.0;
  for (std::size_t s = 0; s < sys.num_s(); ++s) {
    for (std::size_t x = 0; x < sys.num_x; ++x) {
      for (std::size_t j = 0; j < sys.num_j; ++j) {
        for (std::size_t y = 0; y < sys.num_y(); ++y) {
          for (std::size_t sh = 0; sh < sys.num_shat(); ++sh) {
            total += sys.source[s] * prof.encoder(s, x) * prof.jammer(x, j) *
                     sys.channel_row(x, j)[y] * prof.decoder(y, sh) *
                     sys.distortion[s][sh];
          }
        }
      }
    }
  }
  return total;
}

TEST(InducedChannel, BscWithBernoulliJammerComposes) {
  auto [sys, prof] = binary_example(0.1, 0.2);
  const CondKernel ind = induced_channel(sys, prof.jammer);
  // crossover 0.1 composed with Bernoulli(0.2): 0.1*0.8 + 0.9*0.2 = 0.26
  EXPECT_NEAR(ind(0, 1), 0.26, 1e-15);
  EXPECT_NEAR(ind(0, 0), 0.74, 1e-15);
  EXPECT_NEAR(ind(1, 0), 0.26, 1e-15);
}

TEST(InducedChannel, DeterministicJammerSelectsSlice) {
  auto [sys, prof] = binary_example(0.3, 0.2);
  const CondKernel jam = CondKernel::constant_rows(2, Pmf::delta(2, 1));
  const CondKernel ind = induced_channel(sys, jam);
  for (std::size_t x = 0; x < 2; ++x) {
    for (std::size_t y = 0; y < 2; ++y) {
      EXPECT_DOUBLE_EQ(ind(x, y), sys.channel_row(x, 1)[y]);
    }
  }
}

TEST(InducedChannel, SilentJammerLeavesChannelUnchanged) {
  auto [sys, prof] = binary_example(0.1, 0.0);
  const CondKernel ind = induced_channel(sys, prof.jammer);
  EXPECT_NEAR(ind(0, 1), 0.1, 1e-15);
  EXPECT_NEAR(ind(1, 0), 0.1, 1e-15);
}

TEST(InducedChannel, DimensionMismatchThrows) {
  auto [sys, prof] = binary_example(0.1, 0.2);
  const CondKernel bad = CondKernel::constant_rows(3, Pmf::uniform(2));
  EXPECT_THROW(induced_channel(sys, bad), std::invalid_argument);
}

TEST(JointDistribution, DeterministicChainIsPointMass) {
  auto [sys, prof] = binary_example(0.0, 0.0);  // noiseless Y = X + J
  prof.jammer = CondKernel::constant_rows(2, Pmf::delta(2, 1));
  sys.jammer_budget = 1.0;
  const JointDistribution joint = joint_distribution(sys, prof);
  for (std::size_t s = 0; s < 2; ++s) {
    const std::size_t flipped = (s + 1) % 2;
    EXPECT_NEAR(joint.at(s, s, 1, flipped, flipped), 0.5, 1e-15);
  }
  double sum = 0.0;
  for (double v : joint.p) sum += v;
  EXPECT_NEAR(sum, 1.0, kJointSumTol);
}

TEST(JointDistribution, NoiselessXorJammerFlipsWithItsRate) {
  const double q = 0.3;
  auto [sys, prof] = binary_example(0.0, q);
  const JointDistribution joint = joint_distribution(sys, prof);
  double p_err = 0.0;
  for (std::size_t s = 0; s < 2; ++s) {
    for (std::size_t x = 0; x < 2; ++x) {
      for (std::size_t j = 0; j < 2; ++j) {
        for (std::size_t y = 0; y < 2; ++y) {
          for (std::size_t sh = 0; sh < 2; ++sh) {
            if (s != sh) p_err += joint.at(s, x, j, y, sh);
          }
        }
      }
    }
  }
  EXPECT_NEAR(p_err, q, 1e-12);
}

TEST(JointDistribution, MarginalRecoversSource) {
  std::mt19937_64 rng(11);
  const auto rs = testutil::random_system(rng);
  const JointDistribution joint = joint_distribution(rs.system, rs.profile);
  for (std::size_t s = 0; s < joint.ns; ++s) {
    double marg = 0.0;
    for (std::size_t x = 0; x < joint.nx; ++x) {
      for (std::size_t j = 0; j < joint.nj; ++j) {
        for (std::size_t y = 0; y < joint.ny; ++y) {
          for (std::size_t sh = 0; sh < joint.nshat; ++sh) {
            marg += joint.at(s, x, j, y, sh);
          }
        }
      }
    }
    EXPECT_NEAR(marg, rs.system.source[s], 1e-12);
  }
}

TEST(ExpectedDistortion, NoiselessIdentityIsZero) {
  auto [sys, prof] = binary_example(0.0, 0.0);
  EXPECT_DOUBLE_EQ(expected_distortion(sys, prof), 0.0);
}

TEST(ExpectedDistortion, EquivalentCrossoverHammingError) {
  auto [sys, prof] = binary_example(0.1, 0.2);
  EXPECT_NEAR(expected_distortion(sys, prof), 0.26, 1e-15);
  EXPECT_NEAR(brute_force_distortion(sys, prof), 0.26, 1e-15);
}

TEST(ExpectedDistortion, ConstantDecoderGivesHalf) {
  auto [sys, prof] = binary_example(0.1, 0.2);
  prof.decoder = CondKernel::constant_rows(2, Pmf::delta(2, 0));
  EXPECT_NEAR(expected_distortion(sys, prof), 0.5, 1e-15);
}

TEST(ExpectedDistortion, MatchesBruteForceOnRandomSystems) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const auto rs = testutil::random_system(rng, 2 + trial % 3, 2, 2, 3, 2);
    EXPECT_NEAR(expected_distortion(rs.system, rs.profile),
                brute_force_distortion(rs.system, rs.profile), 1e-12);
  }
}

TEST(ExpectedCosts, ConstantUserCost) {
  auto [sys, prof] = binary_example(0.1, 0.2);
  EXPECT_DOUBLE_EQ(expected_user_cost(sys, prof.encoder), 1.0);
}

TEST(ExpectedCosts, BernoulliJammerCostIsItsRate) {
  auto [sys, prof] = binary_example(0.1, 0.2);
  EXPECT_NEAR(expected_jammer_cost(sys, prof.encoder, prof.jammer), 0.2,
              1e-15);
}

TEST(ExpectedCosts, QuadraticCostUniformSource) {
  auto [sys, prof] = binary_example(0.1, 0.2);
  sys.user_cost = {0.0, 1.0};  // x^2 on {0, 1}
  EXPECT_NEAR(expected_user_cost(sys, prof.encoder), 0.5, 1e-15);
}

TEST(ConditionalDistortion, BinaryTableIsInputIndependent) {
  const double p = 0.1;
  auto [sys, prof] = binary_example(p, 0.2);
  const auto h = conditional_distortion(sys, prof.encoder, prof.decoder);
  for (std::size_t x = 0; x < 2; ++x) {
    EXPECT_NEAR(h[x][0], p, 1e-15);
    EXPECT_NEAR(h[x][1], 1.0 - p, 1e-15);
  }
}

TEST(ConditionalDistortion, ZeroDistortionGivesZeroTable) {
  auto [sys, prof] = binary_example(0.1, 0.2);
  sys.distortion = {{0.0, 0.0}, {0.0, 0.0}};
  const auto h = conditional_distortion(sys, prof.encoder, prof.decoder);
  for (const auto& row : h) {
    for (double v : row) EXPECT_DOUBLE_EQ(v, 0.0);
  }
}

TEST(ConditionalDistortion, JammerProofChannelDecodesExactly) {
  // Channel ignores J entirely (Y = X); identity code recovers S.
  auto [sys, prof] = binary_example(0.0, 0.2);
  std::vector<Pmf> rows;
  for (std::size_t x = 0; x < 2; ++x) {
    for (std::size_t j = 0; j < 2; ++j) rows.push_back(Pmf::delta(2, x));
  }
  sys.channel = CondKernel(std::move(rows));
  const auto h = conditional_distortion(sys, prof.encoder, prof.decoder);
  for (const auto& row : h) {
    for (double v : row) EXPECT_DOUBLE_EQ(v, 0.0);
  }
}

TEST(Posterior, SymmetricChannelIdentityCode) {
  auto [sys, prof] = binary_example(0.1, 0.2);
  const Posterior post = posterior_source_given_estimate(sys, prof);
  const double phat = 0.26;
  for (std::size_t sh = 0; sh < 2; ++sh) {
    ASSERT_TRUE(post.rows[sh].has_value());
    EXPECT_NEAR((*post.rows[sh])[sh], 1.0 - phat, 1e-12);
    EXPECT_NEAR((*post.rows[sh])[1 - sh], phat, 1e-12);
  }
}

TEST(Posterior, LosslessChainIsIdentity) {
  auto [sys, prof] = binary_example(0.0, 0.0);
  const Posterior post = posterior_source_given_estimate(sys, prof);
  for (std::size_t sh = 0; sh < 2; ++sh) {
    ASSERT_TRUE(post.rows[sh].has_value());
    EXPECT_NEAR((*post.rows[sh])[sh], 1.0, 1e-12);
  }
}

TEST(Posterior, ConstantDecoderReportsUndefinedRows) {
  auto [sys, prof] = binary_example(0.1, 0.2);
  prof.decoder = CondKernel::constant_rows(2, Pmf::delta(2, 0));
  const Posterior post = posterior_source_given_estimate(sys, prof);
  ASSERT_TRUE(post.rows[0].has_value());
  EXPECT_FALSE(post.rows[1].has_value());
  for (std::size_t s = 0; s < 2; ++s) {
    EXPECT_NEAR((*post.rows[0])[s], sys.source[s], 1e-12);
  }
}

// The average distortion is linear in the jammer policy.
TEST(ExpectedDistortion, LinearInJammerPolicy) {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 50; ++trial) {
    auto rs = testutil::random_system(rng);
    const CondKernel q1 = testutil::random_kernel(rng, rs.system.num_x,
                                                  rs.system.num_j);
    const CondKernel q2 = testutil::random_kernel(rng, rs.system.num_x,
                                                  rs.system.num_j);
    StrategyProfile prof = rs.profile;
    prof.jammer = q1;
    const double d1 = expected_distortion(rs.system, prof);
    prof.jammer = q2;
    const double d2 = expected_distortion(rs.system, prof);
    for (const double beta : {0.0, 0.3, 0.5, 0.7, 1.0}) {
      prof.jammer = testutil::mix_kernels(q1, q2, beta);
      const double mixed = expected_distortion(rs.system, prof);
      ASSERT_NEAR(mixed, beta * d1 + (1.0 - beta) * d2, 1e-12);
    }
  }
}

// The joint-sum route and the conditional-distortion route agree.
TEST(ExpectedDistortion, ConsistentWithConditionalTable) {
  std::mt19937_64 rng(505);
  for (int trial = 0; trial < 50; ++trial) {
    const auto rs = testutil::random_system(rng);
    const Pmf px = input_marginal(rs.system, rs.profile.encoder);
    const auto h = conditional_distortion(rs.system, rs.profile.encoder,
                                          rs.profile.decoder);
    double via_h = 0.0;
    for (std::size_t x = 0; x < rs.system.num_x; ++x) {
      for (std::size_t j = 0; j < rs.system.num_j; ++j) {
        via_h += px[x] * rs.profile.jammer(x, j) * h[x][j];
      }
    }
    ASSERT_NEAR(expected_distortion(rs.system, rs.profile), via_h, 1e-12);
  }
}

TEST(ProfileFeasibility, ViolationsThrow) {
  auto [sys, prof] = binary_example(0.1, 0.2);
  sys.jammer_budget = 0.1;  // profile spends 0.2
  EXPECT_THROW(check_profile_feasible(sys, prof), std::invalid_argument);
  EXPECT_FALSE(profile_feasible(sys, prof));
  sys.jammer_budget = 0.2;
  EXPECT_NO_THROW(check_profile_feasible(sys, prof));
}

TEST(SystemValidation, RejectsBadTables) {
  auto [sys, prof] = binary_example(0.1, 0.2);
  sys.distortion[0][1] = -1.0;
  EXPECT_THROW(sys.validate(), std::invalid_argument);
  sys.distortion[0][1] = 1.0;
  sys.user_budget = 0.5;  // below the constant input cost 1
  EXPECT_THROW(sys.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace jsccsj
