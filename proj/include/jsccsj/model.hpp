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

#ifndef JSCCSJ_MODEL_HPP_
#define JSCCSJ_MODEL_HPP_

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "jsccsj/prob.hpp"

namespace jsccsj {

// Joint tables hold to this precision.
inline constexpr double kJointSumTol = 1e-10;

/// A joint source-channel communication system with a jammer: source p_S,
/// channel p(y|x,j), user cost rho_X, jammer cost rho_J(j|x), distortion
/// d(s,shat), and the two average-cost budgets.  The channel kernel is
/// indexed by the flattened pair x*num_j + j.  Values are immutable after
/// construction; all operations on them are pure.
struct JsccsjSystem {
  Pmf source;
  CondKernel channel;  // rows: x*num_j + j, columns: y
  std::size_t num_x = 0;
  std::size_t num_j = 0;
  std::vector<double> user_cost;                // rho_X, indexed by x
  std::vector<std::vector<double>> jammer_cost;  // [x][j], may be negative
  std::vector<std::vector<double>> distortion;   // [s][shat], >= 0
  double user_budget = 0.0;
  double jammer_budget = 0.0;

  std::size_t num_s() const { return source.size(); }
  std::size_t num_y() const { return channel.num_outputs(); }
  std::size_t num_shat() const { return distortion.front().size(); }

  const Pmf& channel_row(std::size_t x, std::size_t j) const {
    return channel.row(x * num_j + j);
  }

  /// Checks structural invariants: table shapes, d >= 0, rho_X >= 0, and
  /// that at least one channel input symbol is affordable.
  void validate() const {
    if (num_x == 0 || num_j == 0) {
      throw std::invalid_argument("system: empty X or J alphabet");
    }
    if (channel.num_inputs() != num_x * num_j) {
      throw std::invalid_argument("system: channel rows != |X|*|J|");
    }
    if (user_cost.size() != num_x) {
      throw std::invalid_argument("system: user_cost size != |X|");
    }
    if (jammer_cost.size() != num_x) {
      throw std::invalid_argument("system: jammer_cost rows != |X|");
    }
    for (const auto& row : jammer_cost) {
      if (row.size() != num_j) {
        throw std::invalid_argument("system: jammer_cost row size != |J|");
      }
    }
    if (distortion.size() != num_s()) {
      throw std::invalid_argument("system: distortion rows != |S|");
    }
    const std::size_t width = distortion.front().size();
    for (const auto& row : distortion) {
      if (row.size() != width) {
        throw std::invalid_argument("system: ragged distortion table");
      }
      for (double d : row) {
        if (d < 0.0) {
          throw std::invalid_argument("system: negative distortion entry");
        }
      }
    }
    double min_cost = user_cost.front();
    for (double c : user_cost) {
      if (c < 0.0) {
        throw std::invalid_argument("system: negative user cost entry");
      }
      if (c < min_cost) min_cost = c;
    }
    if (user_budget < min_cost - kPmfSumTol) {
      throw std::invalid_argument(
          "system: user budget " + std::to_string(user_budget) +
          " below the cheapest channel input cost " + std::to_string(min_cost));
    }
  }
};

/// An uncoded user strategy (encoder p(x|s), decoder p(shat|y)) paired with
/// a per-letter jammer policy p(j|x).
struct StrategyProfile {
  CondKernel encoder;  // S -> X
  CondKernel decoder;  // Y -> Shat
  CondKernel jammer;   // X -> J
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

inline void check_encoder_dims(const JsccsjSystem& sys, const CondKernel& enc) {
  require(enc.num_inputs() == sys.num_s() && enc.num_outputs() == sys.num_x,
          "encoder dimensions do not match system (S->X expected)");
}

inline void check_decoder_dims(const JsccsjSystem& sys, const CondKernel& dec) {
  require(dec.num_inputs() == sys.num_y() && dec.num_outputs() == sys.num_shat(),
          "decoder dimensions do not match system (Y->Shat expected)");
}

inline void check_jammer_dims(const JsccsjSystem& sys, const CondKernel& jam) {
  require(jam.num_inputs() == sys.num_x && jam.num_outputs() == sys.num_j,
          "jammer dimensions do not match system (X->J expected)");
}

inline void check_profile_dims(const JsccsjSystem& sys,
                               const StrategyProfile& prof) {
  check_encoder_dims(sys, prof.encoder);
  check_decoder_dims(sys, prof.decoder);
  check_jammer_dims(sys, prof.jammer);
}

}  // namespace detail

/// Channel seen by the decoder when the jammer plays the per-letter policy
/// p(j|x): p(y|x) = sum_j p(y|x,j) p(j|x).
inline CondKernel induced_channel(const JsccsjSystem& sys,
                                  const CondKernel& jammer) {
  detail::check_jammer_dims(sys, jammer);
  std::vector<Pmf> rows;
  rows.reserve(sys.num_x);
  for (std::size_t x = 0; x < sys.num_x; ++x) {
    std::vector<double> row(sys.num_y(), 0.0);
    for (std::size_t j = 0; j < sys.num_j; ++j) {
      const double w = jammer(x, j);
      if (w == 0.0) continue;
      const Pmf& cr = sys.channel_row(x, j);
      for (std::size_t y = 0; y < sys.num_y(); ++y) row[y] += w * cr[y];
    }
    rows.emplace_back(std::move(row));
  }
  return CondKernel(std::move(rows));
}

/// Channel input marginal p_X(x) = sum_s p_S(s) p(x|s).
inline Pmf input_marginal(const JsccsjSystem& sys, const CondKernel& encoder) {
  detail::check_encoder_dims(sys, encoder);
  std::vector<double> px(sys.num_x, 0.0);
  for (std::size_t s = 0; s < sys.num_s(); ++s) {
    for (std::size_t x = 0; x < sys.num_x; ++x) {
      px[x] += sys.source[s] * encoder(s, x);
    }
  }
  return Pmf(std::move(px));
}

/// Full joint table over (s, x, j, y, shat).  Intended for small systems;
/// guarded against accidental huge materializations.
struct JointDistribution {
  std::size_t ns = 0, nx = 0, nj = 0, ny = 0, nshat = 0;
  std::vector<double> p;  // strides: s major, shat minor

  double at(std::size_t s, std::size_t x, std::size_t j, std::size_t y,
            std::size_t sh) const {
    return p[(((s * nx + x) * nj + j) * ny + y) * nshat + sh];
  }
};

inline JointDistribution joint_distribution(const JsccsjSystem& sys,
                                            const StrategyProfile& prof) {
  detail::check_profile_dims(sys, prof);
  JointDistribution joint;
  joint.ns = sys.num_s();
  joint.nx = sys.num_x;
  joint.nj = sys.num_j;
  joint.ny = sys.num_y();
  joint.nshat = sys.num_shat();
  const std::size_t total =
      joint.ns * joint.nx * joint.nj * joint.ny * joint.nshat;
  if (total > (1u << 24)) {
    throw std::runtime_error("joint_distribution: table too large (" +
                             std::to_string(total) + " entries)");
  }
  joint.p.assign(total, 0.0);
  std::size_t idx = 0;
  double sum = 0.0;
  for (std::size_t s = 0; s < joint.ns; ++s) {
    for (std::size_t x = 0; x < joint.nx; ++x) {
      const double psx = sys.source[s] * prof.encoder(s, x);
      for (std::size_t j = 0; j < joint.nj; ++j) {
        const double psxj = psx * prof.jammer(x, j);
        const Pmf& cr = sys.channel_row(x, j);
        for (std::size_t y = 0; y < joint.ny; ++y) {
          const double psxjy = psxj * cr[y];
          for (std::size_t sh = 0; sh < joint.nshat; ++sh) {
            const double v = psxjy * prof.decoder(y, sh);
            joint.p[idx++] = v;
            sum += v;
          }
        }
      }
    }
  }
  if (std::abs(sum - 1.0) > kJointSumTol) {
    throw std::runtime_error("joint_distribution: entries sum to " +
                             std::to_string(sum));
  }
  return joint;
}

/// Joint law of (s, shat) under the profile, computed by factorized sums
/// (never materializes the five-way joint).
inline std::vector<std::vector<double>> source_estimate_joint(
    const JsccsjSystem& sys, const StrategyProfile& prof) {
  detail::check_profile_dims(sys, prof);
  const CondKernel ind = induced_channel(sys, prof.jammer);
  const std::size_t ns = sys.num_s(), nx = sys.num_x, ny = sys.num_y(),
                    nsh = sys.num_shat();
  // M(s,y) = sum_x p(x|s) p(y|x)
  std::vector<std::vector<double>> m(ns, std::vector<double>(ny, 0.0));
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t x = 0; x < nx; ++x) {
      const double e = prof.encoder(s, x);
      if (e == 0.0) continue;
      for (std::size_t y = 0; y < ny; ++y) m[s][y] += e * ind(x, y);
    }
  }
  std::vector<std::vector<double>> joint(ns, std::vector<double>(nsh, 0.0));
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t y = 0; y < ny; ++y) {
      const double w = sys.source[s] * m[s][y];
      if (w == 0.0) continue;
      for (std::size_t sh = 0; sh < nsh; ++sh) {
        joint[s][sh] += w * prof.decoder(y, sh);
      }
    }
  }
  return joint;
}

/// Average per-letter distortion E[d(S, Shat)] at the profile.
inline double expected_distortion(const JsccsjSystem& sys,
                                  const StrategyProfile& prof) {
  const auto joint = source_estimate_joint(sys, prof);
  double total = 0.0;
  for (std::size_t s = 0; s < sys.num_s(); ++s) {
    for (std::size_t sh = 0; sh < sys.num_shat(); ++sh) {
      total += joint[s][sh] * sys.distortion[s][sh];
    }
  }
  return total;
}

/// E[rho_X(X)] under p_S and the encoder.
inline double expected_user_cost(const JsccsjSystem& sys,
                                 const CondKernel& encoder) {
  const Pmf px = input_marginal(sys, encoder);
  double total = 0.0;
  for (std::size_t x = 0; x < sys.num_x; ++x) {
    total += px[x] * sys.user_cost[x];
  }
  return total;
}

/// E[rho_J(J|X)] under the joint law of (X, J).
inline double expected_jammer_cost(const JsccsjSystem& sys,
                                   const CondKernel& encoder,
                                   const CondKernel& jammer) {
  detail::check_jammer_dims(sys, jammer);
  const Pmf px = input_marginal(sys, encoder);
  double total = 0.0;
  for (std::size_t x = 0; x < sys.num_x; ++x) {
    if (px[x] == 0.0) continue;
    double row = 0.0;
    for (std::size_t j = 0; j < sys.num_j; ++j) {
      row += jammer(x, j) * sys.jammer_cost[x][j];
    }
    total += px[x] * row;
  }
  return total;
}

/// Expected distortion conditioned on the channel input pair:
/// h(x,j) = sum_s p(s|x) sum_y p(y|x,j) sum_shat p(shat|y) d(s,shat).
///
/// For x with p_X(x) = 0 the source posterior is undefined; the encoder
/// column then supplies the weighting (renormalized), and an all-zero
/// column yields h(x,.) = 0.
inline std::vector<std::vector<double>> conditional_distortion(
    const JsccsjSystem& sys, const CondKernel& encoder,
    const CondKernel& decoder) {
  detail::check_encoder_dims(sys, encoder);
  detail::check_decoder_dims(sys, decoder);
  const std::size_t ns = sys.num_s(), nx = sys.num_x, nj = sys.num_j,
                    ny = sys.num_y(), nsh = sys.num_shat();
  // G(s,y) = sum_shat p(shat|y) d(s,shat)
  std::vector<std::vector<double>> g(ns, std::vector<double>(ny, 0.0));
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t y = 0; y < ny; ++y) {
      double acc = 0.0;
      for (std::size_t sh = 0; sh < nsh; ++sh) {
        acc += decoder(y, sh) * sys.distortion[s][sh];
      }
      g[s][y] = acc;
    }
  }
  const Pmf px = input_marginal(sys, encoder);
  std::vector<std::vector<double>> h(nx, std::vector<double>(nj, 0.0));
  for (std::size_t x = 0; x < nx; ++x) {
    // Source weights given X = x.
    std::vector<double> w(ns, 0.0);
    if (px[x] > 0.0) {
      for (std::size_t s = 0; s < ns; ++s) {
        w[s] = sys.source[s] * encoder(s, x) / px[x];
      }
    } else {
      double col = 0.0;
      for (std::size_t s = 0; s < ns; ++s) col += encoder(s, x);
      if (col > 0.0) {
        for (std::size_t s = 0; s < ns; ++s) w[s] = encoder(s, x) / col;
      }
    }
    for (std::size_t j = 0; j < nj; ++j) {
      const Pmf& cr = sys.channel_row(x, j);
      double acc = 0.0;
      for (std::size_t s = 0; s < ns; ++s) {
        if (w[s] == 0.0) continue;
        double inner = 0.0;
        for (std::size_t y = 0; y < ny; ++y) inner += cr[y] * g[s][y];
        acc += w[s] * inner;
      }
      h[x][j] = acc;
    }
  }
  return h;
}

/// Bayes posterior p(s|shat).  Rows whose estimate symbol has zero marginal
/// probability are reported as undefined rather than fabricated.
struct Posterior {
  std::vector<std::optional<Pmf>> rows;  // indexed by shat
  std::vector<double> shat_marginal;
};

inline Posterior posterior_source_given_estimate(const JsccsjSystem& sys,
                                                 const StrategyProfile& prof) {
  const auto joint = source_estimate_joint(sys, prof);
  const std::size_t ns = sys.num_s(), nsh = sys.num_shat();
  Posterior post;
  post.rows.resize(nsh);
  post.shat_marginal.assign(nsh, 0.0);
  for (std::size_t sh = 0; sh < nsh; ++sh) {
    double marg = 0.0;
    for (std::size_t s = 0; s < ns; ++s) marg += joint[s][sh];
    post.shat_marginal[sh] = marg;
    if (marg <= 0.0) continue;
    std::vector<double> row(ns, 0.0);
    for (std::size_t s = 0; s < ns; ++s) row[s] = joint[s][sh] / marg;
    post.rows[sh] = Pmf(std::move(row));
  }
  return post;
}

/// Throws std::invalid_argument when the profile violates a cost budget by
/// more than `tol` or its kernels do not match the system's alphabets.
inline void check_profile_feasible(const JsccsjSystem& sys,
                                   const StrategyProfile& prof,
                                   double tol = 1e-9) {
  detail::check_profile_dims(sys, prof);
  const double uc = expected_user_cost(sys, prof.encoder);
  if (uc > sys.user_budget + tol) {
    throw std::invalid_argument("profile infeasible: expected user cost " +
                                std::to_string(uc) + " exceeds budget " +
                                std::to_string(sys.user_budget));
  }
  const double jc = expected_jammer_cost(sys, prof.encoder, prof.jammer);
  if (jc > sys.jammer_budget + tol) {
    throw std::invalid_argument("profile infeasible: expected jammer cost " +
                                std::to_string(jc) + " exceeds budget " +
                                std::to_string(sys.jammer_budget));
  }
}

inline bool profile_feasible(const JsccsjSystem& sys,
                             const StrategyProfile& prof, double tol = 1e-9) {
  try {
    check_profile_feasible(sys, prof, tol);
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

}  // namespace jsccsj

#endif  // JSCCSJ_MODEL_HPP_
