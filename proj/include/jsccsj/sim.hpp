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

#ifndef JSCCSJ_SIM_HPP_
#define JSCCSJ_SIM_HPP_

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "jsccsj/gaussian.hpp"
#include "jsccsj/model.hpp"
#include "jsccsj/prob.hpp"
#include "jsccsj/rng.hpp"

namespace jsccsj {

/// Sampled transmission through the source -> encode -> jam -> channel ->
/// decode chain.  One random stream per block index, so results are
/// identical whether blocks are processed serially or in parallel.
struct SimConfig {
  std::size_t block_length = 1;
  std::size_t num_blocks = 1;
  std::uint64_t seed = 0;
  // 0: use JSCCSJ_THREADS when set, otherwise the hardware concurrency.
  std::size_t num_threads = 0;
};

struct SimResult {
  double distortion_mean = 0.0;
  double distortion_stderr = 0.0;
  double user_cost_mean = 0.0;
  double user_cost_stderr = 0.0;
  double jammer_cost_mean = 0.0;
  double jammer_cost_stderr = 0.0;
  std::size_t block_length = 0;
  std::size_t num_blocks = 0;
  std::uint64_t seed = 0;
};

/// A general (possibly non-product) block jamming policy p(j^n | x^n).
/// Tuple rows/columns are packed first-letter-most-significant, matching
/// block_jammer_lp.
struct BlockJammerPolicy {
  std::size_t n = 1;
  CondKernel kernel;
};

namespace detail {

inline std::size_t resolve_threads(std::size_t requested,
                                   std::size_t num_chunks) {
  std::size_t threads = requested;
  if (threads == 0) {
    threads = std::thread::hardware_concurrency();
    if (threads == 0) threads = 1;
    if (const char* env = std::getenv("JSCCSJ_THREADS")) {
      const long cap = std::strtol(env, nullptr, 10);
      if (cap >= 1 && static_cast<std::size_t>(cap) < threads) {
        threads = static_cast<std::size_t>(cap);
      }
    }
  }
  threads = std::min(threads, std::size_t{64});
  threads = std::min(std::max<std::size_t>(threads, 1), num_chunks);
  return threads;
}

struct BlockStats {
  double sum = 0.0, sumsq = 0.0;
  void add(double v) {
    sum += v;
    sumsq += v * v;
  }
  void merge(const BlockStats& o) {
    sum += o.sum;
    sumsq += o.sumsq;
  }
};

struct ChunkStats {
  BlockStats distortion, user_cost, jammer_cost;
};

inline void finalize(const BlockStats& stats, std::size_t blocks, double* mean,
                     double* stderr_out) {
  const double b = static_cast<double>(blocks);
  *mean = stats.sum / b;
  if (blocks < 2) {
    *stderr_out = 0.0;
    return;
  }
  double var = (stats.sumsq - stats.sum * stats.sum / b) / (b - 1.0);
  if (var < 0.0) var = 0.0;
  *stderr_out = std::sqrt(var / b);
}

constexpr std::size_t kChunkBlocks = 4096;

/// Runs `body(block_index, stream, stats)` over every block, accumulating
/// per-chunk partial sums in block order and merging chunks in chunk order.
/// The reduction tree is fixed, so the result is independent of the thread
/// count.
template <typename Body>
SimResult run_blocks(const SimConfig& cfg, const Body& body) {
  if (cfg.block_length == 0 || cfg.num_blocks == 0) {
    throw std::invalid_argument("simulate: block_length and num_blocks must be >= 1");
  }
  const double total_letters =
      static_cast<double>(cfg.block_length) * static_cast<double>(cfg.num_blocks);
  if (total_letters > 1e12) {
    throw std::invalid_argument("simulate: num_blocks * block_length too large");
  }
  const std::size_t num_chunks =
      (cfg.num_blocks + kChunkBlocks - 1) / kChunkBlocks;
  std::vector<ChunkStats> chunks(num_chunks);
  const std::size_t threads = resolve_threads(cfg.num_threads, num_chunks);

  std::atomic<std::size_t> next_chunk{0};
  const auto worker = [&]() {
    for (;;) {
      const std::size_t c = next_chunk.fetch_add(1);
      if (c >= num_chunks) return;
      const std::size_t begin = c * kChunkBlocks;
      const std::size_t end = std::min(begin + kChunkBlocks, cfg.num_blocks);
      ChunkStats& stats = chunks[c];
      for (std::size_t b = begin; b < end; ++b) {
        RandomStream stream(cfg.seed, b);
        body(stream, stats);
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  ChunkStats total;
  for (const ChunkStats& c : chunks) {
    total.distortion.merge(c.distortion);
    total.user_cost.merge(c.user_cost);
    total.jammer_cost.merge(c.jammer_cost);
  }
  SimResult result;
  result.block_length = cfg.block_length;
  result.num_blocks = cfg.num_blocks;
  result.seed = cfg.seed;
  finalize(total.distortion, cfg.num_blocks, &result.distortion_mean,
           &result.distortion_stderr);
  finalize(total.user_cost, cfg.num_blocks, &result.user_cost_mean,
           &result.user_cost_stderr);
  finalize(total.jammer_cost, cfg.num_blocks, &result.jammer_cost_mean,
           &result.jammer_cost_stderr);
  return result;
}

}  // namespace detail

/// Simulates the per-letter chain.  Within a block the draw order is
/// s, x, j, y, shat for each letter in turn.
inline SimResult simulate(const JsccsjSystem& sys, const StrategyProfile& prof,
                          const SimConfig& cfg) {
  sys.validate();
  detail::check_profile_dims(sys, prof);
  const std::size_t n = cfg.block_length;
  return detail::run_blocks(cfg, [&](RandomStream& stream,
                                     detail::ChunkStats& stats) {
    double d = 0.0, uc = 0.0, jc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t s = stream.sample(sys.source);
      const std::size_t x = stream.sample(prof.encoder.row(s));
      const std::size_t j = stream.sample(prof.jammer.row(x));
      const std::size_t y = stream.sample(sys.channel_row(x, j));
      const std::size_t sh = stream.sample(prof.decoder.row(y));
      d += sys.distortion[s][sh];
      uc += sys.user_cost[x];
      jc += sys.jammer_cost[x][j];
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    stats.distortion.add(d * inv_n);
    stats.user_cost.add(uc * inv_n);
    stats.jammer_cost.add(jc * inv_n);
  });
}

/// Same chain with the jammer drawing j^n jointly from a block policy.
/// Draw order per block: s^n, x^n, one draw for j^n, then y and shat per
/// letter.
inline SimResult simulate_block_jammer(const JsccsjSystem& sys,
                                       const CondKernel& encoder,
                                       const CondKernel& decoder,
                                       const BlockJammerPolicy& policy,
                                       const SimConfig& cfg) {
  sys.validate();
  detail::check_encoder_dims(sys, encoder);
  detail::check_decoder_dims(sys, decoder);
  if (policy.n != cfg.block_length) {
    throw std::invalid_argument(
        "simulate_block_jammer: policy block length != config block length");
  }
  const std::size_t n = cfg.block_length;
  std::size_t nxn = 1, njn = 1;
  for (std::size_t i = 0; i < n; ++i) {
    nxn *= sys.num_x;
    njn *= sys.num_j;
  }
  if (policy.kernel.num_inputs() != nxn || policy.kernel.num_outputs() != njn) {
    throw std::invalid_argument(
        "simulate_block_jammer: policy kernel is not |X|^n by |J|^n");
  }
  return detail::run_blocks(cfg, [&](RandomStream& stream,
                                     detail::ChunkStats& stats) {
    std::vector<std::size_t> s(n), x(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = stream.sample(sys.source);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = stream.sample(encoder.row(s[i]));
    }
    const std::size_t xt = detail::pack_tuple(x, sys.num_x);
    const std::size_t jt = stream.sample(policy.kernel.row(xt));
    const std::vector<std::size_t> j = detail::unpack_tuple(jt, sys.num_j, n);
    double d = 0.0, uc = 0.0, jc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t y = stream.sample(sys.channel_row(x[i], j[i]));
      const std::size_t sh = stream.sample(decoder.row(y));
      d += sys.distortion[s[i]][sh];
      uc += sys.user_cost[x[i]];
      jc += sys.jammer_cost[x[i]][j[i]];
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    stats.distortion.add(d * inv_n);
    stats.user_cost.add(uc * inv_n);
    stats.jammer_cost.add(jc * inv_n);
  });
}

/// Monte Carlo for the Gaussian chain.  Draw order per letter: s, r, z.
inline SimResult simulate_gaussian(const GaussianSystem& sys,
                                   const LinearGaussianProfile& prof,
                                   const SimConfig& cfg) {
  sys.validate();
  const double s_sd = std::sqrt(sys.source_var);
  const double r_sd = std::sqrt(prof.jammer_noise_var);
  const double z_sd = std::sqrt(sys.noise_var);
  const std::size_t n = cfg.block_length;
  return detail::run_blocks(cfg, [&](RandomStream& stream,
                                     detail::ChunkStats& stats) {
    double d = 0.0, uc = 0.0, jc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double s = stream.normal(0.0, s_sd);
      const double r = stream.normal(0.0, r_sd);
      const double z = stream.normal(0.0, z_sd);
      const double x = prof.encoder_gain * s;
      const double j = prof.jammer_alpha * x + r;
      const double y = x + j + z;
      const double sh = prof.decoder_gain * y;
      d += (s - sh) * (s - sh);
      uc += x * x;
      jc += j * j;
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    stats.distortion.add(d * inv_n);
    stats.user_cost.add(uc * inv_n);
    stats.jammer_cost.add(jc * inv_n);
  });
}

}  // namespace jsccsj

#endif  // JSCCSJ_SIM_HPP_
