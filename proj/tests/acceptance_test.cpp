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

// End-to-end acceptance suite.  Each test covers one numbered criterion and
// prints a single PASS/FAIL line so the run reads as a checklist.

#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "cli_util.hpp"
#include "jsccsj/jsccsj.hpp"
#include "test_util.hpp"

namespace jsccsj {
namespace {

void report_criterion(int number, const std::string& summary) {
  std::printf("[ACCEPTANCE] criterion %d: %s -- %s\n", number,
              ::testing::Test::HasFailure() ? "FAIL" : "PASS",
              summary.c_str());
}

// 1. Binary equilibrium value: over the (p, P_J) grid {0, 0.05, ..., 0.5}^2
// the jammer best response against the identity code equals
// p(1-P_J) + (1-p)P_J within 1e-9, and the input-independent Bernoulli(P_J)
// policy attains it.
TEST(Acceptance, Criterion1BinaryEquilibriumValue) {
  for (int pi = 0; pi <= 10; ++pi) {
    for (int qi = 0; qi <= 10; ++qi) {
      const double p = 0.05 * pi;
      const double pj = 0.05 * qi;
      auto [sys, prof] = binary_example(p, pj);
      const double phat = binary_equivalent_crossover(p, pj);
      const JammerBestResponse br =
          jammer_best_response(sys, prof.encoder, prof.decoder, pj);
      ASSERT_NEAR(br.value, phat, 1e-9) << "p=" << p << " pj=" << pj;
      StrategyProfile bern = prof;
      bern.jammer =
          CondKernel::constant_rows(2, Pmf({1.0 - pj, pj}));
      ASSERT_NEAR(expected_distortion(sys, bern), br.value, 1e-9)
          << "p=" << p << " pj=" << pj;
    }
  }
  report_criterion(1, "D(P_J) = p(1-P_J)+(1-p)P_J on the 11x11 grid; "
                      "Bernoulli(P_J) attains it");
}

// 2. Nash verification at (p, P_J) = (0.1, 0.2): value 0.26, both gaps
// within 1e-9, the user side certified by exhaustive length-1 search.
TEST(Acceptance, Criterion2NashVerification) {
  auto [sys, prof] = binary_example(0.1, 0.2);
  const GameReport report = nash_gap(sys, prof, 1e-9);
  EXPECT_NEAR(report.value, 0.26, 1e-12);
  EXPECT_LE(report.jammer_gap, 1e-9);
  EXPECT_GE(report.jammer_gap, -1e-9);
  EXPECT_LE(report.user_gap, 1e-9);
  EXPECT_GE(report.user_gap, -1e-9);
  EXPECT_TRUE(report.nash_ok);
  report_criterion(2, "binary fixture value 0.26 with both gaps <= 1e-9");
}

// 3. Block jamming cannot help: the length-2 LP over general block policies
// equals the single-letter value within 1e-9, and 100 random feasible
// non-product policies never exceed it by more than 1e-9.
TEST(Acceptance, Criterion3BlockJammerCannotBeatSingleLetter) {
  auto [sys, prof] = binary_example(0.1, 0.2);
  const double single =
      jammer_best_response(sys, prof.encoder, prof.decoder, 0.2).value;
  const BlockJammerResult block =
      block_jammer_lp(sys, prof.encoder, prof.decoder, 2);
  EXPECT_NEAR(block.value, single, 1e-9);

  const Pmf px = input_marginal(sys, prof.encoder);
  const auto h = conditional_distortion(sys, prof.encoder, prof.decoder);
  std::mt19937_64 rng(17);
  std::gamma_distribution<double> skew(0.3, 1.0);
  int accepted = 0;
  while (accepted < 100) {
    std::vector<Pmf> rows;
    for (std::size_t xt = 0; xt < 4; ++xt) {
      std::vector<double> row(4);
      double sum = 0.0;
      for (double& v : row) {
        v = skew(rng) + 1e-9;
        sum += v;
      }
      row[0] += 2.5 * sum;
      sum += 2.5 * sum;
      for (double& v : row) v /= sum;
      rows.emplace_back(std::move(row));
    }
    const CondKernel kernel(std::move(rows));
    double cost = 0.0, value = 0.0;
    for (std::size_t xt = 0; xt < 4; ++xt) {
      const auto xs = detail::unpack_tuple(xt, 2, 2);
      const double w = px[xs[0]] * px[xs[1]];
      for (std::size_t jt = 0; jt < 4; ++jt) {
        const auto js = detail::unpack_tuple(jt, 2, 2);
        cost += w * kernel(xt, jt) * 0.5 *
                (sys.jammer_cost[xs[0]][js[0]] + sys.jammer_cost[xs[1]][js[1]]);
        value += w * kernel(xt, jt) * 0.5 * (h[xs[0]][js[0]] + h[xs[1]][js[1]]);
      }
    }
    if (cost > 0.2) continue;
    ++accepted;
    ASSERT_LE(value, single + 1e-9);
  }
  report_criterion(3, "length-2 block LP equals the single-letter optimum; "
                      "100 random feasible block policies stay below it");
}

// 4. Structure of the distortion cost function on the binary fixture:
// non-decreasing, concave, and linear with slope 1-2p over {0,...,0.5}.
// The jammer's per-letter cost is capped at 1 (always flipping), so the
// measured saturation knee is at budget 1 with plateau level 1-p, and the
// curve extended across the knee fails the full-range linearity flag.
TEST(Acceptance, Criterion4DistortionCurveStructure) {
  auto [sys, prof] = binary_example(0.1, 0.2);
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(0.05 * i);
  const DistortionCurve curve =
      distortion_cost_curve(sys, prof.encoder, prof.decoder, grid, 1e-9);
  EXPECT_TRUE(curve.monotone_ok);
  EXPECT_TRUE(curve.concave_ok);
  EXPECT_TRUE(curve.linear_ok);
  const double slope = (curve.samples.back().value -
                        curve.samples.front().value) /
                       (grid.back() - grid.front());
  EXPECT_NEAR(slope, 1.0 - 2.0 * 0.1, 1e-9);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_NEAR(curve.samples[i].value, 0.1 + 0.8 * grid[i], 1e-9);
  }

  std::vector<double> extended;
  for (int i = 0; i <= 24; ++i) extended.push_back(0.05 * i);  // up to 1.2
  const DistortionCurve full =
      distortion_cost_curve(sys, prof.encoder, prof.decoder, extended, 1e-9);
  EXPECT_TRUE(full.monotone_ok);
  EXPECT_TRUE(full.concave_ok);
  EXPECT_FALSE(full.linear_ok);
  for (std::size_t i = 0; i < extended.size(); ++i) {
    const double want = 0.1 + 0.8 * std::min(extended[i], 1.0);
    EXPECT_NEAR(full.samples[i].value, want, 1e-9) << "budget " << extended[i];
  }
  EXPECT_NEAR(full.samples.back().value, 0.9, 1e-9);
  report_criterion(4, "curve linear with slope 1-2p up to the cost cap, "
                      "plateau at 1-p past budget 1, full-range linearity "
                      "flag false");
}

// 5. Matching verifier on the worked examples: the binary fixture passes
// and recovers b1 = 1/ln((1-phat)/phat) and c1 = 1/(1-2p) within 1e-9; the
// ternary uniform fixture passes; the asymmetric-channel counterexample
// fails.
TEST(Acceptance, Criterion5MatchingVerifier) {
  auto [sys, prof] = binary_example(0.1, 0.2);
  const MatchReport report = check_matched(sys, prof, 1e-9);
  EXPECT_TRUE(report.passed);
  const double phat = 0.26;
  EXPECT_NEAR(report.b1, 1.0 / std::log((1.0 - phat) / phat), 1e-9);
  EXPECT_NEAR(report.c1, 1.25, 1e-9);

  auto [lsys, lprof] = lary_example(3, 0.1, 0.2);
  EXPECT_TRUE(check_matched(lsys, lprof, 1e-9).passed);

  const auto asym = testutil::asymmetric_binary();
  EXPECT_FALSE(check_matched(asym.system, asym.profile, 1e-9).passed);
  report_criterion(5, "binary fixture matched with the closed-form "
                      "constants, ternary fixture matched, asymmetric "
                      "counterexample rejected");
}

// 6. Gaussian closed form: the reference profile at P_U = sigma2 = 1,
// P_J = 0 has MSE exactly 0.5; Monte Carlo at 1e6 samples agrees within 4
// standard errors; the discretized matching check passes at m = 41 and its
// residuals shrink at m = 81.
TEST(Acceptance, Criterion6GaussianClosedForm) {
  GaussianSystem sys;
  sys.user_budget = 1.0;
  sys.noise_var = 1.0;
  sys.jammer_budget = 0.0;
  const LinearGaussianProfile prof = reference_profile(sys);
  EXPECT_EQ(gaussian_mse(sys, prof), 0.5);

  SimConfig cfg;
  cfg.num_blocks = 1000000;
  cfg.seed = 2026;
  const SimResult mc = simulate_gaussian(sys, prof, cfg);
  EXPECT_NEAR(mc.distortion_mean, 0.5, 4.0 * mc.distortion_stderr);

  const DiscretizedMatchReport coarse =
      discretized_matching_check(sys, prof, {41, 0.0});
  const DiscretizedMatchReport fine =
      discretized_matching_check(sys, prof, {81, 0.0});
  EXPECT_EQ(coarse.verdict, GridVerdict::kMatched);
  EXPECT_EQ(fine.verdict, GridVerdict::kMatched);
  EXPECT_LE(fine.report.residual_encoder_cost,
            coarse.report.residual_encoder_cost);
  EXPECT_LE(fine.report.residual_distortion,
            coarse.report.residual_distortion);
  report_criterion(6, "MSE exactly 0.5, Monte Carlo within 4 SE, grid check "
                      "matched at m=41 with residuals shrinking at m=81");
}

// 7. Rebuilding the jammer cost from the conditional distortion (c1 = 1,
// c2 = 0) and budgeting the profile's own spend makes the profile optimal:
// on 50 random systems the LP value equals the profile's distortion within
// 1e-9.
TEST(Acceptance, Criterion7CostBuiltJammerOptimality) {
  std::mt19937_64 rng(271828);
  for (int trial = 0; trial < 50; ++trial) {
    auto rs = testutil::random_system(rng, 2 + trial % 3, 2 + trial % 2,
                                      2 + trial % 3, 3, 2 + trial % 2);
    rs.system.jammer_cost = conditional_distortion(
        rs.system, rs.profile.encoder, rs.profile.decoder);
    const double budget = expected_jammer_cost(rs.system, rs.profile.encoder,
                                               rs.profile.jammer);
    rs.system.jammer_budget = budget;
    const double value = expected_distortion(rs.system, rs.profile);
    const JammerBestResponse br = jammer_best_response(
        rs.system, rs.profile.encoder, rs.profile.decoder, budget);
    ASSERT_NEAR(br.value, value, 1e-9) << "trial " << trial;
  }
  report_criterion(7, "distortion-built jammer cost makes the profile's own "
                      "policy optimal on 50 random systems");
}

// 8. Determinism: repeated runs of every CLI command with fixed inputs and
// seeds produce byte-identical output.
TEST(Acceptance, Criterion8CliDeterminism) {
  const auto emitted = cliutil::run_cli("example binary --p 0.1 --pj 0.2");
  ASSERT_EQ(emitted.exit_code, 0);
  const std::string bin =
      cliutil::write_temp_file("accept_bin.json", emitted.output);
  const auto gauss_doc =
      cliutil::run_cli("example gaussian --pu 1 --sigma2 1 --pj 0");
  ASSERT_EQ(gauss_doc.exit_code, 0);
  const std::string gauss =
      cliutil::write_temp_file("accept_gauss.json", gauss_doc.output);

  const std::vector<std::string> commands = {
      "example binary --p 0.1 --pj 0.2",
      "example lary --L 3 --p 0.1 --pj 0.2",
      "example gaussian --pu 1 --sigma2 1 --pj 0",
      "validate " + bin,
      "check-matched " + bin,
      "check-matched " + gauss + " --grid-m 21",
      "nash-verify " + bin + " --block-n 2",
      "deq-curve " + bin + " --grid 0:0.5:0.1",
      "simulate " + bin + " --blocks 20000 --seed 42",
      "simulate " + gauss + " --blocks 20000 --seed 42",
  };
  for (const std::string& cmd : commands) {
    const auto first = cliutil::run_cli(cmd);
    const auto second = cliutil::run_cli(cmd);
    ASSERT_EQ(first.exit_code, 0) << cmd << "\n" << first.output;
    ASSERT_EQ(second.exit_code, 0) << cmd;
    ASSERT_EQ(first.output, second.output) << cmd;
  }
  report_criterion(8, "every CLI command is byte-identical across repeated "
                      "seeded runs");
}

}  // namespace
}  // namespace jsccsj
