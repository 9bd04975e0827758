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

#ifndef JSCCSJ_SOLVERS_HPP_
#define JSCCSJ_SOLVERS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "jsccsj/lp.hpp"
#include "jsccsj/model.hpp"
#include "jsccsj/prob.hpp"

namespace jsccsj {

/// Smallest expected jammer cost any policy can achieve against the encoder.
inline double min_feasible_jammer_cost(const JsccsjSystem& sys,
                                       const CondKernel& encoder) {
  const Pmf px = input_marginal(sys, encoder);
  double total = 0.0;
  for (std::size_t x = 0; x < sys.num_x; ++x) {
    double best = sys.jammer_cost[x][0];
    for (std::size_t j = 1; j < sys.num_j; ++j) {
      best = std::min(best, sys.jammer_cost[x][j]);
    }
    total += px[x] * best;
  }
  return total;
}

namespace detail {

/// Shared LP: maximize sum over rows r of w(r) * sum_c q(c|r) * value(r,c)
/// over row-stochastic q with sum_r w(r) sum_c q(c|r) cost(r,c) <= budget.
/// Returns the optimal q (rows concatenated) and the optimum.
inline std::pair<std::vector<double>, double> solve_budgeted_policy_lp(
    const std::vector<double>& weights,
    const std::vector<std::vector<double>>& value,
    const std::vector<std::vector<double>>& cost, double budget) {
  const std::size_t rows = weights.size();
  const std::size_t cols = value.front().size();
  lp::Problem prob;
  prob.num_vars = rows * cols;
  prob.objective.assign(prob.num_vars, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      prob.objective[r * cols + c] = -weights[r] * value[r][c];
    }
  }
  for (std::size_t r = 0; r < rows; ++r) {
    lp::Problem::Row eq;
    eq.coeffs.assign(prob.num_vars, 0.0);
    for (std::size_t c = 0; c < cols; ++c) eq.coeffs[r * cols + c] = 1.0;
    eq.rhs = 1.0;
    prob.equalities.push_back(std::move(eq));
  }
  lp::Problem::Row ub;
  ub.coeffs.assign(prob.num_vars, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      ub.coeffs[r * cols + c] = weights[r] * cost[r][c];
    }
  }
  ub.rhs = budget;
  prob.upper_bounds.push_back(std::move(ub));

  const lp::Solution sol = lp::solve(prob);
  if (sol.status != lp::Status::kOptimal) {
    throw std::runtime_error("policy LP did not reach an optimum");
  }
  double optimum = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      optimum += weights[r] * value[r][c] * sol.x[r * cols + c];
    }
  }
  return {sol.x, optimum};
}

inline CondKernel rows_from_flat(const std::vector<double>& flat,
                                 std::size_t rows, std::size_t cols) {
  std::vector<Pmf> out;
  out.reserve(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<double> row(flat.begin() + r * cols,
                            flat.begin() + (r + 1) * cols);
    out.emplace_back(std::move(row));
  }
  return CondKernel(std::move(out));
}

}  // namespace detail

struct JammerBestResponse {
  CondKernel kernel;  // an optimal per-letter policy p(j|x)
  double value;       // D(budget): the optimal expected distortion
};

/// Maximizes expected distortion over per-letter jammer policies within the
/// cost budget, against a fixed encoder/decoder pair.  Linear program over
/// the policy entries; the optimum is the distortion cost function D(budget).
inline JammerBestResponse jammer_best_response(const JsccsjSystem& sys,
                                               const CondKernel& encoder,
                                               const CondKernel& decoder,
                                               double budget) {
  detail::check_encoder_dims(sys, encoder);
  detail::check_decoder_dims(sys, decoder);
  const double min_cost = min_feasible_jammer_cost(sys, encoder);
  if (budget < min_cost - 1e-9) {
    throw std::invalid_argument(
        "jammer budget " + std::to_string(budget) +
        " infeasible; the minimum feasible expected cost is " +
        std::to_string(min_cost));
  }
  const Pmf px = input_marginal(sys, encoder);
  const auto h = conditional_distortion(sys, encoder, decoder);
  auto [flat, value] = detail::solve_budgeted_policy_lp(
      px.probs(), h, sys.jammer_cost, budget);
  return {detail::rows_from_flat(flat, sys.num_x, sys.num_j), value};
}

struct CurveSample {
  double budget = 0.0;
  double value = 0.0;
  CondKernel kernel;
};

/// Samples of the distortion cost function D over a budget grid, with
/// structure flags: non-decreasing, concave (midpoint test wherever the
/// midpoint of two grid budgets is itself a grid budget), and linear
/// (deviation from the chord through the endpoints).
struct DistortionCurve {
  std::vector<CurveSample> samples;
  bool monotone_ok = true;
  bool concave_ok = true;
  bool linear_ok = true;
  double monotone_violation = 0.0;
  double concavity_violation = 0.0;
  double linearity_deviation = 0.0;
};

inline DistortionCurve distortion_cost_curve(const JsccsjSystem& sys,
                                             const CondKernel& encoder,
                                             const CondKernel& decoder,
                                             const std::vector<double>& budgets,
                                             double tol = 1e-9) {
  if (budgets.empty()) {
    throw std::invalid_argument("distortion_cost_curve: empty budget grid");
  }
  for (std::size_t i = 1; i < budgets.size(); ++i) {
    if (budgets[i] < budgets[i - 1]) {
      throw std::invalid_argument("distortion_cost_curve: grid not sorted");
    }
  }
  DistortionCurve curve;
  curve.samples.reserve(budgets.size());
  for (double b : budgets) {
    JammerBestResponse br = jammer_best_response(sys, encoder, decoder, b);
    curve.samples.push_back({b, br.value, std::move(br.kernel)});
  }
  const auto& s = curve.samples;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    curve.monotone_violation =
        std::max(curve.monotone_violation, s[i].value - s[i + 1].value);
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 2; j < s.size(); ++j) {
      const double mid_budget = (s[i].budget + s[j].budget) / 2.0;
      for (std::size_t k = i + 1; k < j; ++k) {
        if (std::abs(s[k].budget - mid_budget) <= 1e-12) {
          curve.concavity_violation =
              std::max(curve.concavity_violation,
                       (s[i].value + s[j].value) / 2.0 - s[k].value);
        }
      }
    }
  }
  const double span = s.back().budget - s.front().budget;
  if (span > 0.0) {
    const double slope = (s.back().value - s.front().value) / span;
    for (const auto& sample : s) {
      const double chord =
          s.front().value + slope * (sample.budget - s.front().budget);
      curve.linearity_deviation =
          std::max(curve.linearity_deviation, std::abs(sample.value - chord));
    }
  }
  curve.monotone_ok = curve.monotone_violation <= tol;
  curve.concave_ok = curve.concavity_violation <= tol;
  curve.linear_ok = curve.linearity_deviation <= tol;
  return curve;
}

/// Minimum-expected-distortion estimator for the channel induced by the
/// jammer policy: for each y, the shat minimizing sum_s p(s|y) d(s,shat),
/// ties broken toward the lowest index.  Zero-probability outputs decode to
/// symbol 0.
inline CondKernel bayes_decoder(const JsccsjSystem& sys,
                                const CondKernel& encoder,
                                const CondKernel& jammer) {
  const CondKernel ind = induced_channel(sys, jammer);
  const std::size_t ns = sys.num_s(), nx = sys.num_x, ny = sys.num_y(),
                    nsh = sys.num_shat();
  // Joint (s, y) up to normalization.
  std::vector<std::vector<double>> b(ns, std::vector<double>(ny, 0.0));
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t x = 0; x < nx; ++x) {
      const double e = sys.source[s] * encoder(s, x);
      if (e == 0.0) continue;
      for (std::size_t y = 0; y < ny; ++y) b[s][y] += e * ind(x, y);
    }
  }
  std::vector<std::size_t> decision(ny, 0);
  for (std::size_t y = 0; y < ny; ++y) {
    double py = 0.0;
    for (std::size_t s = 0; s < ns; ++s) py += b[s][y];
    if (py <= 0.0) continue;  // arbitrary fixed decision: symbol 0
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t sh = 0; sh < nsh; ++sh) {
      double risk = 0.0;
      for (std::size_t s = 0; s < ns; ++s) risk += b[s][y] * sys.distortion[s][sh];
      if (risk < best) {
        best = risk;
        decision[y] = sh;
      }
    }
  }
  return CondKernel::deterministic(nsh, decision);
}

struct UserBestResponse {
  CondKernel encoder;
  CondKernel decoder;
  double value;
};

/// Exhaustive scan over deterministic per-letter encoders within the user
/// budget, each paired with its Bayes decoder, against a fixed jammer
/// policy.  Randomized encoders are mixtures of deterministic ones and the
/// objective is linear in the encoder, so when every deterministic encoder
/// is affordable the scan is exact.  Encoders are enumerated with symbol s
/// contributing digit (k / |X|^s) mod |X|; the first minimum wins.
inline UserBestResponse user_best_response_single_letter(
    const JsccsjSystem& sys, const CondKernel& jammer,
    std::size_t max_encoders = 1000000) {
  detail::check_jammer_dims(sys, jammer);
  const std::size_t ns = sys.num_s(), nx = sys.num_x;
  std::size_t total = 1;
  for (std::size_t s = 0; s < ns; ++s) {
    if (total > max_encoders / nx + 1) {
      throw std::runtime_error(
          "user_best_response_single_letter: encoder space |X|^|S| exceeds " +
          std::to_string(max_encoders));
    }
    total *= nx;
  }
  if (total > max_encoders) {
    throw std::runtime_error(
        "user_best_response_single_letter: encoder space |X|^|S| exceeds " +
        std::to_string(max_encoders));
  }
  bool found = false;
  UserBestResponse best{};
  for (std::size_t k = 0; k < total; ++k) {
    std::vector<std::size_t> map(ns);
    std::size_t rem = k;
    double cost = 0.0;
    for (std::size_t s = 0; s < ns; ++s) {
      map[s] = rem % nx;
      rem /= nx;
      cost += sys.source[s] * sys.user_cost[map[s]];
    }
    if (cost > sys.user_budget + 1e-12) continue;
    CondKernel enc = CondKernel::deterministic(nx, map);
    CondKernel dec = bayes_decoder(sys, enc, jammer);
    const double value = expected_distortion(sys, {enc, dec, jammer});
    if (!found || value < best.value) {
      best = {std::move(enc), std::move(dec), value};
      found = true;
    }
  }
  if (!found) {
    throw std::runtime_error(
        "user_best_response_single_letter: no encoder meets the budget");
  }
  return best;
}

struct BlockJammerResult {
  CondKernel kernel;  // rows X^n (packed), columns J^n (packed)
  double value;       // optimal per-letter expected distortion
};

/// Best response over general (possibly non-product) block policies
/// p(j^n | x^n) with per-letter average cost at most the system's jammer
/// budget, when the single-letter code is applied coordinatewise.  Tuple
/// indices are packed first-letter-most-significant.
inline BlockJammerResult block_jammer_lp(const JsccsjSystem& sys,
                                         const CondKernel& encoder,
                                         const CondKernel& decoder,
                                         std::size_t n,
                                         std::size_t max_variables = 4096) {
  if (n == 0) throw std::invalid_argument("block_jammer_lp: n must be >= 1");
  detail::check_encoder_dims(sys, encoder);
  detail::check_decoder_dims(sys, decoder);
  const std::size_t nx = sys.num_x, nj = sys.num_j;
  std::size_t nxn = 1, njn = 1;
  for (std::size_t i = 0; i < n; ++i) {
    nxn *= nx;
    njn *= nj;
    if (nxn * njn > max_variables) {
      throw std::runtime_error("block_jammer_lp: (|X|*|J|)^n exceeds " +
                               std::to_string(max_variables) + " variables");
    }
  }
  const double min_cost = min_feasible_jammer_cost(sys, encoder);
  if (sys.jammer_budget < min_cost - 1e-9) {
    throw std::invalid_argument(
        "block_jammer_lp: jammer budget infeasible; the minimum feasible "
        "expected cost is " +
        std::to_string(min_cost));
  }
  const Pmf px = input_marginal(sys, encoder);
  const auto h = conditional_distortion(sys, encoder, decoder);

  std::vector<double> weights(nxn, 1.0);
  std::vector<std::vector<double>> value(nxn, std::vector<double>(njn, 0.0));
  std::vector<std::vector<double>> cost(nxn, std::vector<double>(njn, 0.0));
  for (std::size_t xt = 0; xt < nxn; ++xt) {
    const auto xs = detail::unpack_tuple(xt, nx, n);
    for (std::size_t i = 0; i < n; ++i) weights[xt] *= px[xs[i]];
    for (std::size_t jt = 0; jt < njn; ++jt) {
      const auto js = detail::unpack_tuple(jt, nj, n);
      double v = 0.0, c = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        v += h[xs[i]][js[i]];
        c += sys.jammer_cost[xs[i]][js[i]];
      }
      value[xt][jt] = v / static_cast<double>(n);
      cost[xt][jt] = c / static_cast<double>(n);
    }
  }
  auto [flat, optimum] = detail::solve_budgeted_policy_lp(
      weights, value, cost, sys.jammer_budget);
  return {detail::rows_from_flat(flat, nxn, njn), optimum};
}

/// Equilibrium certificate for a candidate profile: the profile's value,
/// both best-response values, and the gaps.  Gaps within tolerance on both
/// sides certify a Nash equilibrium (of the single-letter game; the user
/// side is certified by exhaustive scan at block length 1).
struct GameReport {
  double value = 0.0;
  double jammer_br_value = 0.0;
  double user_br_value = 0.0;
  double jammer_gap = 0.0;  // jammer_br_value - value, >= 0 up to solver tol
  double user_gap = 0.0;    // value - user_br_value, >= 0 up to solver tol
  bool nash_ok = false;
  std::size_t block_n = 1;
  // Per-letter optimum over non-product block policies when block_n >= 2.
  double block_jammer_value = std::numeric_limits<double>::quiet_NaN();
};

inline GameReport nash_gap(const JsccsjSystem& sys, const StrategyProfile& prof,
                           double tol = 1e-9, std::size_t block_n = 1) {
  sys.validate();
  check_profile_feasible(sys, prof);
  GameReport report;
  report.value = expected_distortion(sys, prof);
  report.jammer_br_value =
      jammer_best_response(sys, prof.encoder, prof.decoder, sys.jammer_budget)
          .value;
  report.user_br_value =
      user_best_response_single_letter(sys, prof.jammer).value;
  report.jammer_gap = report.jammer_br_value - report.value;
  report.user_gap = report.value - report.user_br_value;
  report.nash_ok = report.jammer_gap <= tol && report.user_gap <= tol;
  report.block_n = block_n;
  if (block_n >= 2) {
    report.block_jammer_value =
        block_jammer_lp(sys, prof.encoder, prof.decoder, block_n).value;
  }
  return report;
}

/// L-ary uniform system: uniform source, channel Y = X + J + Z (mod L) with
/// Z uniform over the nonzero shifts with total mass p, Hamming distortion,
/// constant encoder cost, jammer cost 1{j != 0}.  The returned profile is
/// the identity code with the jammer spreading mass p_j uniformly over the
/// nonzero shifts; it is a matched equilibrium for parameters in range.
inline std::pair<JsccsjSystem, StrategyProfile> lary_example(std::size_t l,
                                                             double p,
                                                             double p_j) {
  if (l < 2) throw std::invalid_argument("lary_example: L must be >= 2");
  const double cap = 1.0 - 1.0 / static_cast<double>(l);
  if (p < 0.0 || p > cap) {
    throw std::invalid_argument("lary_example: noise mass p must lie in [0, " +
                                std::to_string(cap) + "]");
  }
  if (p_j < 0.0 || p_j > cap) {
    throw std::invalid_argument(
        "lary_example: jammer budget must lie in [0, " + std::to_string(cap) +
        "]");
  }
  JsccsjSystem sys;
  sys.source = Pmf::uniform(l);
  sys.num_x = l;
  sys.num_j = l;
  std::vector<double> noise(l, p / static_cast<double>(l - 1));
  noise[0] = 1.0 - p;
  std::vector<Pmf> channel_rows;
  channel_rows.reserve(l * l);
  for (std::size_t x = 0; x < l; ++x) {
    for (std::size_t j = 0; j < l; ++j) {
      std::vector<double> row(l, 0.0);
      for (std::size_t z = 0; z < l; ++z) row[(x + j + z) % l] = noise[z];
      channel_rows.emplace_back(std::move(row));
    }
  }
  sys.channel = CondKernel(std::move(channel_rows));
  sys.user_cost.assign(l, 1.0);
  sys.jammer_cost.assign(l, std::vector<double>(l, 1.0));
  for (std::size_t x = 0; x < l; ++x) sys.jammer_cost[x][0] = 0.0;
  sys.distortion.assign(l, std::vector<double>(l, 1.0));
  for (std::size_t s = 0; s < l; ++s) sys.distortion[s][s] = 0.0;
  sys.user_budget = 1.0;
  sys.jammer_budget = p_j;

  std::vector<double> jam(l, p_j / static_cast<double>(l - 1));
  jam[0] = 1.0 - p_j;
  StrategyProfile prof{CondKernel::identity(l), CondKernel::identity(l),
                       CondKernel::constant_rows(l, Pmf(std::move(jam)))};
  return {std::move(sys), std::move(prof)};
}

/// Binary symmetric source over the binary symmetric channel with an
/// additive jammer: the L = 2 uniform system.
inline std::pair<JsccsjSystem, StrategyProfile> binary_example(double p,
                                                               double p_j) {
  return lary_example(2, p, p_j);
}

/// Equivalent crossover probability of a binary symmetric channel with
/// noise p composed with an independent Bernoulli(q) jammer.
inline double binary_equivalent_crossover(double p, double q) {
  return p * (1.0 - q) + (1.0 - p) * q;
}

}  // namespace jsccsj

#endif  // JSCCSJ_SOLVERS_HPP_
