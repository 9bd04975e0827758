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

#ifndef JSCCSJ_PROB_HPP_
#define JSCCSJ_PROB_HPP_

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace jsccsj {

// Row sums of constructed distributions hold to this precision.
inline constexpr double kPmfSumTol = 1e-12;
// Inputs (e.g. decimals parsed from files) whose entries sum within this
// distance of 1 are renormalized; anything worse is a validation error.
inline constexpr double kInputRenormTol = 1e-9;

/// Probability mass function over a finite alphabet indexed 0..size-1.
///
/// Entries are non-negative and sum to 1 within kPmfSumTol after
/// construction.  Construction renormalizes inputs that drift by at most
/// kInputRenormTol and rejects anything worse.  Immutable once built.
class Pmf {
 public:
  Pmf() = default;

  explicit Pmf(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) {
      throw std::invalid_argument("Pmf: empty probability vector");
    }
    double sum = 0.0;
    for (double& p : probs_) {
      if (p < 0.0) {
        if (p < -kPmfSumTol) {
          throw std::invalid_argument("Pmf: negative entry " +
                                      std::to_string(p));
        }
        p = 0.0;  // rounding dust
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > kInputRenormTol) {
      throw std::invalid_argument("Pmf: entries sum to " + std::to_string(sum) +
                                  ", more than " +
                                  std::to_string(kInputRenormTol) + " from 1");
    }
    for (double& p : probs_) p /= sum;
  }

  /// Point mass at `atom`.
  static Pmf delta(std::size_t size, std::size_t atom) {
    std::vector<double> v(size, 0.0);
    v.at(atom) = 1.0;
    return Pmf(std::move(v));
  }

  static Pmf uniform(std::size_t size) {
    return Pmf(std::vector<double>(size, 1.0 / static_cast<double>(size)));
  }

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  const std::vector<double>& probs() const { return probs_; }

  bool operator==(const Pmf& other) const { return probs_ == other.probs_; }

 private:
  std::vector<double> probs_;
};

/// Row-stochastic conditional distribution: one Pmf per conditioning index.
/// Houses encoders p(x|s), decoders p(shat|y), jammer policies p(j|x) and,
/// with a flattened input index, channels p(y|x,j).
class CondKernel {
 public:
  CondKernel() = default;

  explicit CondKernel(std::vector<Pmf> rows) : rows_(std::move(rows)) {
    if (rows_.empty()) {
      throw std::invalid_argument("CondKernel: no rows");
    }
    const std::size_t width = rows_.front().size();
    for (const Pmf& row : rows_) {
      if (row.size() != width) {
        throw std::invalid_argument(
            "CondKernel: inconsistent row widths (" + std::to_string(width) +
            " vs " + std::to_string(row.size()) + ")");
      }
    }
  }

  /// Deterministic map as a one-hot kernel; map[i] is the output for input i.
  static CondKernel deterministic(std::size_t num_outputs,
                                  const std::vector<std::size_t>& map) {
    std::vector<Pmf> rows;
    rows.reserve(map.size());
    for (std::size_t out : map) rows.push_back(Pmf::delta(num_outputs, out));
    return CondKernel(std::move(rows));
  }

  static CondKernel identity(std::size_t n) {
    std::vector<std::size_t> map(n);
    for (std::size_t i = 0; i < n; ++i) map[i] = i;
    return CondKernel::deterministic(n, map);
  }

  /// Same row for every input (output independent of the conditioning).
  static CondKernel constant_rows(std::size_t num_inputs, const Pmf& row) {
    return CondKernel(std::vector<Pmf>(num_inputs, row));
  }

  std::size_t num_inputs() const { return rows_.size(); }
  std::size_t num_outputs() const { return rows_.front().size(); }
  const Pmf& row(std::size_t input) const { return rows_[input]; }
  double operator()(std::size_t input, std::size_t output) const {
    return rows_[input][output];
  }

 private:
  std::vector<Pmf> rows_;
};

/// Kullback-Leibler divergence sum_i p(i) ln(p(i)/q(i)), natural log,
/// with 0 ln 0 = 0.  Throws std::domain_error when support(p) is not
/// contained in support(q) (the divergence would be infinite).
inline double kl_divergence(const Pmf& p, const Pmf& q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("kl_divergence: size mismatch");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) {
      throw std::domain_error(
          "kl_divergence: support violation at index " + std::to_string(i) +
          " (p>0, q=0); divergence is infinite");
    }
    sum += p[i] * std::log(p[i] / q[i]);
  }
  // p ~ q can round to a tiny negative total.
  if (sum < 0.0 && sum > -kPmfSumTol) sum = 0.0;
  return sum;
}

/// KL divergence that reports support violations as +infinity instead of
/// throwing.  Used where off-support rows are expected.
inline double kl_divergence_or_infinity(const Pmf& p, const Pmf& q) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0 && q[i] <= 0.0) {
      return std::numeric_limits<double>::infinity();
    }
  }
  return kl_divergence(p, q);
}

namespace detail {

/// Packs a length-n digit tuple into a single index, first digit most
/// significant.  Shared by the block-jammer LP and the block simulator so
/// kernel rows agree on tuple order.
inline std::size_t pack_tuple(const std::vector<std::size_t>& digits,
                              std::size_t base) {
  std::size_t idx = 0;
  for (std::size_t d : digits) idx = idx * base + d;
  return idx;
}

inline std::vector<std::size_t> unpack_tuple(std::size_t index,
                                             std::size_t base,
                                             std::size_t length) {
  std::vector<std::size_t> digits(length, 0);
  for (std::size_t i = length; i-- > 0;) {
    digits[i] = index % base;
    index /= base;
  }
  return digits;
}

}  // namespace detail

}  // namespace jsccsj

#endif  // JSCCSJ_PROB_HPP_
