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

#ifndef JSCCSJ_RNG_HPP_
#define JSCCSJ_RNG_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <cstddef>

#include "jsccsj/prob.hpp"

namespace jsccsj {

/// Philox4x32-10 counter-based generator.  A pure bijection of the counter
/// under the key: equal (counter, key) pairs produce equal outputs on every
/// platform, which is what makes parallel and serial simulation runs agree.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter apply(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += 0x9E3779B9u;
        key[1] += 0xBB67AE85u;
      }
      ctr = single_round(ctr, key);
    }
    return ctr;
  }

 private:
  static Counter single_round(const Counter& c, const Key& k) {
    const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * c[0];
    const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * c[2];
    return Counter{static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0],
                   static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1],
                   static_cast<std::uint32_t>(p0)};
  }
};

/// One independent random stream per (seed, stream id) pair.  The seed is
/// the Philox key; the stream id occupies the counter's upper half and a
/// 64-bit draw counter occupies the lower half, so streams never collide.
/// The simulator assigns one stream per block index.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id)
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        stream_lo_(static_cast<std::uint32_t>(stream_id)),
        stream_hi_(static_cast<std::uint32_t>(stream_id >> 32)) {}

  std::uint32_t next_u32() {
    if (pos_ == 4) refill();
    return buffer_[pos_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return lo | (hi << 32);
  }

  /// Uniform double in [0, 1), 53 random bits.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in (0, 1]; safe under logarithms.
  double uniform_open() { return 1.0 - uniform01(); }

  /// Box-Muller normal deviate; consumes exactly two uniforms.
  double normal(double mean = 0.0, double stddev = 1.0) {
    const double u1 = uniform_open();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    return mean + stddev * r * std::cos(kTwoPi * u2);
  }

  /// Inverse-CDF draw from a finite pmf.
  std::size_t sample(const Pmf& pmf) {
    const double u = uniform01();
    double cum = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < pmf.size(); ++i) {
      if (pmf[i] <= 0.0) continue;
      last_positive = i;
      cum += pmf[i];
      if (u < cum) return i;
    }
    return last_positive;  // rounding dust at the top of the cdf
  }

 private:
  void refill() {
    const Philox4x32::Counter ctr{static_cast<std::uint32_t>(draw_counter_),
                                  static_cast<std::uint32_t>(draw_counter_ >> 32),
                                  stream_lo_, stream_hi_};
    buffer_ = Philox4x32::apply(ctr, key_);
    ++draw_counter_;
    pos_ = 0;
  }

  Philox4x32::Key key_;
  std::uint32_t stream_lo_, stream_hi_;
  std::uint64_t draw_counter_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  std::size_t pos_ = 4;
};

}  // namespace jsccsj

#endif  // JSCCSJ_RNG_HPP_
