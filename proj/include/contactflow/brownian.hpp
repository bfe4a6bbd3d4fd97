#pragma once

#include <cstdint>
#include <vector>

#include "contactflow/types.hpp"

namespace contactflow {

/// SplitMix64 output function (finalizer) applied to `x`.
std::uint64_t splitmix64_mix(std::uint64_t x);

/// xoshiro256** generator, seeded from one 64-bit word through SplitMix64.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed);
  std::uint64_t next();
  /// Uniform double in the open interval (0, 1), 53 random bits.
  double uniform();

 private:
  std::uint64_t s_[4];
};

/// Standard normal pairs by Marsaglia's polar method: draw u, v uniform in
/// (-1, 1) until 0 < s = u^2 + v^2 < 1, then emit u f and v f with
/// f = sqrt(-2 log(s) / s). The second value of a pair is cached.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}
  double next();

 private:
  Xoshiro256 rng_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// Seed of stream `stream_index` under `master_seed`:
/// splitmix64_mix(master_seed + 0x9E3779B97F4A7C15 * (stream_index + 1)).
std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t stream_index);

/// Increments of a d-dimensional Brownian motion on a uniform grid.
struct BrownianPath {
  double t0 = 0.0;
  double dt = 0.0;
  Index n_steps = 0;
  Index d = 0;
  Matrix increments;  // d x n_steps, column j is B(t_{j+1}) - B(t_j)
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;

  double t_end() const { return t0 + static_cast<double>(n_steps) * dt; }
  double time(Index step) const { return t0 + static_cast<double>(step) * dt; }
  /// B(t_end) - B(t0).
  Vector total() const;
};

/// Draws N(0, dt) increments column by column (step-major, then noise index)
/// from the stream's GaussianStream. d = 0 yields an empty matrix.
BrownianPath sample_brownian(Index d, Index n_steps, double dt, std::uint64_t master_seed,
                             std::uint64_t stream_index, double t0 = 0.0);

/// Same sample path on a grid `factor` times coarser: consecutive blocks of
/// `factor` increments are summed.
BrownianPath coarsen(const BrownianPath& path, Index factor);

/// Zeroes every noise row not listed in `active` (0-based rows).
BrownianPath restrict_streams(const BrownianPath& path, const std::vector<Index>& active);

}  // namespace contactflow
