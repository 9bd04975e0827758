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

#ifndef JSCCSJ_MATCHING_HPP_
#define JSCCSJ_MATCHING_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "jsccsj/model.hpp"
#include "jsccsj/prob.hpp"

namespace jsccsj {

// A profile is a Nash equilibrium of the distortion game whenever three
// affine relations hold for some constants a1,b1,c1 > 0 and free a2, c2,
// d0(s):
//
//   encoder cost:  rho_X(x)    = a1 * KL(p(y|x) || p(y)) + a2      on support,
//                              >= the same off support;
//   distortion:    d(s,shat)   = -b1 * ln p(s|shat) + d0(s);
//   jammer cost:   rho_J(j|x)  = c1 * h(x,j) + c2                  on support,
//                              >= the same off support,
//
// where h is the conditional distortion table.  The checks below fit the
// constants by least squares over the support equalities, scan the
// off-support inequalities, and report residuals.  Existence is all that
// matters, so a constant regressor leaves the slope free (an admissible
// family); the verifier then accepts any positive slope compatible with
// the inequalities.

/// One off-support pair violating the >= direction.  `j < 0` marks an
/// encoder-cost (x only) violation.
struct SlackViolation {
  std::size_t x = 0;
  std::ptrdiff_t j = -1;
  double amount = 0.0;  // fitted rhs minus actual cost; > tol means violated
};

struct ConditionResult {
  bool passed = false;
  bool degenerate = false;    // slope not pinned by the support equalities
  std::string diagnosis;      // empty when nothing noteworthy happened
  double slope = std::numeric_limits<double>::quiet_NaN();
  double intercept = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> group_offsets;  // d0(s); distortion condition only
  double residual = std::numeric_limits<double>::quiet_NaN();
  std::vector<SlackViolation> slack_violations;
  // Distortion condition: (s, shat) pairs with zero posterior but positive
  // estimate marginal.  The affine relation cannot hold there with finite
  // d, so any such pair fails the condition.
  std::vector<std::pair<std::size_t, std::size_t>> excluded_pairs;
};

namespace detail {

struct AffinePoint {
  double t = 0.0;  // regressor
  double y = 0.0;  // response
  std::size_t x = 0;
  std::ptrdiff_t j = -1;
};

/// Fits y = slope*t + intercept over the equality points and checks
/// y >= slope*t + intercept - tol over the inequality points, requiring
/// slope > 0.  Constant-regressor inputs are handled as an admissible
/// family (slope chosen from the interval the inequalities allow,
/// preferring 1).
inline ConditionResult fit_affine_condition(
    const std::vector<AffinePoint>& equalities,
    const std::vector<AffinePoint>& inequalities, double tol) {
  ConditionResult res;
  if (equalities.empty()) {
    res.passed = false;
    res.diagnosis = "no support points to fit";
    return res;
  }
  const std::size_t n = equalities.size();
  double tbar = 0.0, ybar = 0.0, scale = 1.0;
  for (const auto& p : equalities) {
    tbar += p.t;
    ybar += p.y;
    scale = std::max({scale, std::abs(p.t), std::abs(p.y)});
  }
  tbar /= static_cast<double>(n);
  ybar /= static_cast<double>(n);
  double stt = 0.0, sty = 0.0;
  for (const auto& p : equalities) {
    stt += (p.t - tbar) * (p.t - tbar);
    sty += (p.t - tbar) * (p.y - ybar);
  }

  const auto scan_inequalities = [&](double slope, double intercept) {
    std::vector<SlackViolation> v;
    for (const auto& p : inequalities) {
      const double amount = slope * p.t + intercept - p.y;
      if (amount > tol) v.push_back({p.x, p.j, amount});
    }
    return v;
  };

  if (stt <= 1e-12 * scale * scale) {
    // Regressor constant on support: any slope matches the equalities
    // equally well, so the slope is constrained only by positivity and
    // the off-support inequalities.
    res.degenerate = true;
    double ymin = equalities.front().y, ymax = ymin;
    for (const auto& p : equalities) {
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
    res.residual = (ymax - ymin) / 2.0;
    const double ymid = (ymax + ymin) / 2.0;
    if (res.residual > tol) {
      res.slope = 1.0;
      res.intercept = ymid - tbar;
      res.diagnosis =
          "constant regressor cannot match a varying response on support";
      res.slack_violations = scan_inequalities(res.slope, res.intercept);
      res.passed = false;
      return res;
    }
    // Feasible slope interval from the inequalities, with the intercept
    // tied to keep the support equalities at their midrange.
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    bool blocked = false;
    for (const auto& p : inequalities) {
      const double dt = p.t - tbar;
      const double rhs = p.y - ymid + tol;
      if (std::isinf(p.t)) {
        blocked = true;  // infinite regressor beats any finite cost
        continue;
      }
      if (std::abs(dt) <= 1e-12 * scale) {
        if (rhs < 0.0) blocked = true;
      } else if (dt > 0.0) {
        hi = std::min(hi, rhs / dt);
      } else {
        lo = std::max(lo, rhs / dt);
      }
    }
    if (blocked || hi <= 0.0 || lo > hi) {
      res.slope = 1.0;
      res.intercept = ymid - tbar;
      res.diagnosis =
          "no positive slope satisfies the off-support inequalities";
      res.slack_violations = scan_inequalities(res.slope, res.intercept);
      res.passed = false;
      return res;
    }
    res.slope = std::clamp(1.0, lo > 0.0 ? lo : std::min(hi, 1.0) / 2.0, hi);
    if (res.slope <= 0.0) res.slope = hi / 2.0;
    res.intercept = ymid - res.slope * tbar;
    res.diagnosis = "regressor constant on support; slope chosen from the "
                    "admissible family";
    res.slack_violations = scan_inequalities(res.slope, res.intercept);
    res.passed = res.slack_violations.empty();
    return res;
  }

  res.slope = sty / stt;
  res.intercept = ybar - res.slope * tbar;
  res.residual = 0.0;
  for (const auto& p : equalities) {
    res.residual =
        std::max(res.residual, std::abs(p.y - res.slope * p.t - res.intercept));
  }
  if (!(res.slope > 0.0)) {
    res.passed = false;
    res.diagnosis = "fitted slope is not positive";
    res.slack_violations = scan_inequalities(res.slope, res.intercept);
    return res;
  }
  res.slack_violations = scan_inequalities(res.slope, res.intercept);
  res.passed = res.residual <= tol && res.slack_violations.empty();
  return res;
}

}  // namespace detail

/// Checks rho_X(x) = a1 * KL(p(y|x) || p_Y) + a2 on {x : p_X(x) > 0} and
/// rho_X(x) >= the same off support, for some a1 > 0.
inline ConditionResult check_encoder_cost_condition(const JsccsjSystem& sys,
                                                    const StrategyProfile& prof,
                                                    double tol) {
  detail::check_profile_dims(sys, prof);
  const CondKernel ind = induced_channel(sys, prof.jammer);
  const Pmf px = input_marginal(sys, prof.encoder);
  std::vector<double> py(sys.num_y(), 0.0);
  for (std::size_t x = 0; x < sys.num_x; ++x) {
    if (px[x] == 0.0) continue;
    for (std::size_t y = 0; y < sys.num_y(); ++y) py[y] += px[x] * ind(x, y);
  }
  const Pmf output(std::move(py));

  std::vector<detail::AffinePoint> eq, ineq;
  bool support_escape = false;
  for (std::size_t x = 0; x < sys.num_x; ++x) {
    const double r = kl_divergence_or_infinity(ind.row(x), output);
    detail::AffinePoint p{r, sys.user_cost[x], x, -1};
    if (px[x] > 0.0) {
      eq.push_back(p);  // r is finite here: p_Y dominates every support row
    } else {
      if (std::isinf(r)) support_escape = true;
      ineq.push_back(p);
    }
  }
  ConditionResult res = detail::fit_affine_condition(eq, ineq, tol);
  if (support_escape) {
    res.passed = false;
    if (!res.diagnosis.empty()) res.diagnosis += "; ";
    res.diagnosis +=
        "an off-support row's output support escapes the output marginal "
        "(infinite divergence)";
  }
  return res;
}

/// Checks d(s,shat) = -b1 * ln p(s|shat) + d0(s) for some b1 > 0 over all
/// pairs with positive posterior.  Pairs with zero posterior but positive
/// estimate marginal are excluded and fail the condition (the right-hand
/// side would be infinite while d is finite).
inline ConditionResult check_distortion_condition(const JsccsjSystem& sys,
                                                  const StrategyProfile& prof,
                                                  double tol) {
  const Posterior post = posterior_source_given_estimate(sys, prof);
  const std::size_t ns = sys.num_s(), nsh = sys.num_shat();
  ConditionResult res;
  res.group_offsets.assign(ns, 0.0);

  struct Point {
    double u, y;
    std::size_t s, sh;
  };
  std::vector<Point> points;
  for (std::size_t sh = 0; sh < nsh; ++sh) {
    if (!post.rows[sh].has_value()) continue;  // unobservable estimate symbol
    const Pmf& row = *post.rows[sh];
    for (std::size_t s = 0; s < ns; ++s) {
      if (row[s] > 0.0) {
        points.push_back({-std::log(row[s]), sys.distortion[s][sh], s, sh});
      } else {
        res.excluded_pairs.emplace_back(s, sh);
      }
    }
  }
  if (points.empty()) {
    res.diagnosis = "no observable (s, shat) pairs";
    return res;
  }

  // Pooled within-group regression: one slope b1, one offset d0 per s.
  std::vector<double> ubar(ns, 0.0), ybar(ns, 0.0);
  std::vector<std::size_t> count(ns, 0);
  double uscale = 1.0;
  for (const auto& p : points) {
    ubar[p.s] += p.u;
    ybar[p.s] += p.y;
    ++count[p.s];
    uscale = std::max(uscale, std::abs(p.u));
  }
  for (std::size_t s = 0; s < ns; ++s) {
    if (count[s]) {
      ubar[s] /= static_cast<double>(count[s]);
      ybar[s] /= static_cast<double>(count[s]);
    }
  }
  double suu = 0.0, suy = 0.0;
  for (const auto& p : points) {
    suu += (p.u - ubar[p.s]) * (p.u - ubar[p.s]);
    suy += (p.u - ubar[p.s]) * (p.y - ybar[p.s]);
  }
  if (suu <= 1e-12 * uscale * uscale) {
    res.degenerate = true;
    res.diagnosis =
        "posterior does not vary with the estimate; b1 is unidentifiable";
    res.passed = false;
    return res;
  }
  res.slope = suy / suu;
  for (std::size_t s = 0; s < ns; ++s) {
    res.group_offsets[s] = count[s] ? ybar[s] - res.slope * ubar[s] : 0.0;
  }
  res.residual = 0.0;
  for (const auto& p : points) {
    res.residual = std::max(
        res.residual,
        std::abs(p.y - res.slope * p.u - res.group_offsets[p.s]));
  }
  if (!(res.slope > 0.0)) {
    res.passed = false;
    res.diagnosis = "fitted b1 is not positive";
    return res;
  }
  if (!res.excluded_pairs.empty()) {
    res.passed = false;
    res.diagnosis = std::to_string(res.excluded_pairs.size()) +
                    " pair(s) have zero posterior with finite distortion";
    return res;
  }
  res.passed = res.residual <= tol;
  return res;
}

/// Checks rho_J(j|x) = c1 * h(x,j) + c2 on {(x,j) : p(j|x) > 0} and >= off
/// support, for some c1 > 0.  With a single jammer symbol there are no
/// alternative jamming strategies, so the condition constrains nothing and
/// is reported satisfied.
inline ConditionResult check_jammer_cost_condition(const JsccsjSystem& sys,
                                                   const StrategyProfile& prof,
                                                   double tol) {
  detail::check_profile_dims(sys, prof);
  const auto h = conditional_distortion(sys, prof.encoder, prof.decoder);
  if (sys.num_j == 1) {
    ConditionResult res;
    res.passed = true;
    res.degenerate = true;
    res.diagnosis =
        "single jammer symbol: no alternative jamming strategy exists, the "
        "condition is vacuous";
    res.slope = 1.0;
    double mean = 0.0;
    for (std::size_t x = 0; x < sys.num_x; ++x) {
      mean += sys.jammer_cost[x][0] - h[x][0];
    }
    res.intercept = mean / static_cast<double>(sys.num_x);
    res.residual = 0.0;
    return res;
  }
  std::vector<detail::AffinePoint> eq, ineq;
  for (std::size_t x = 0; x < sys.num_x; ++x) {
    for (std::size_t j = 0; j < sys.num_j; ++j) {
      detail::AffinePoint p{h[x][j], sys.jammer_cost[x][j], x,
                            static_cast<std::ptrdiff_t>(j)};
      if (prof.jammer(x, j) > 0.0) {
        eq.push_back(p);
      } else {
        ineq.push_back(p);
      }
    }
  }
  return detail::fit_affine_condition(eq, ineq, tol);
}

/// Aggregate verdict over the three conditions.
struct MatchReport {
  ConditionResult encoder_cost;
  ConditionResult distortion;
  ConditionResult jammer_cost;
  double a1 = 0.0, a2 = 0.0;        // encoder-cost constants
  double b1 = 0.0;                  // distortion slope
  std::vector<double> d0;           // per-source distortion offsets
  double c1 = 0.0, c2 = 0.0;        // jammer-cost constants
  double residual_encoder_cost = 0.0;
  double residual_distortion = 0.0;
  double residual_jammer_cost = 0.0;
  std::vector<SlackViolation> slack_violations;
  bool passed_encoder_cost = false;
  bool passed_distortion = false;
  bool passed_jammer_cost = false;
  bool passed = false;
  double tol = 0.0;
};

/// Runs all three condition checks on a budget-feasible profile.  An
/// overall pass declares the system matched: the profile is a Nash
/// equilibrium of the distortion game.
inline MatchReport check_matched(const JsccsjSystem& sys,
                                 const StrategyProfile& prof,
                                 double tol = 1e-9) {
  sys.validate();
  check_profile_feasible(sys, prof);
  MatchReport report;
  report.tol = tol;
  report.encoder_cost = check_encoder_cost_condition(sys, prof, tol);
  report.distortion = check_distortion_condition(sys, prof, tol);
  report.jammer_cost = check_jammer_cost_condition(sys, prof, tol);
  report.a1 = report.encoder_cost.slope;
  report.a2 = report.encoder_cost.intercept;
  report.b1 = report.distortion.slope;
  report.d0 = report.distortion.group_offsets;
  report.c1 = report.jammer_cost.slope;
  report.c2 = report.jammer_cost.intercept;
  report.residual_encoder_cost = report.encoder_cost.residual;
  report.residual_distortion = report.distortion.residual;
  report.residual_jammer_cost = report.jammer_cost.residual;
  report.slack_violations = report.encoder_cost.slack_violations;
  report.slack_violations.insert(report.slack_violations.end(),
                                 report.jammer_cost.slack_violations.begin(),
                                 report.jammer_cost.slack_violations.end());
  report.passed_encoder_cost = report.encoder_cost.passed;
  report.passed_distortion = report.distortion.passed;
  report.passed_jammer_cost = report.jammer_cost.passed;
  report.passed = report.passed_encoder_cost && report.passed_distortion &&
                  report.passed_jammer_cost;
  return report;
}

}  // namespace jsccsj

#endif  // JSCCSJ_MATCHING_HPP_
