#include "contactflow/brownian.hpp"

#include <algorithm>
#include <cmath>

#include "contactflow/errors.hpp"

namespace contactflow {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Xoshiro256::Xoshiro256(std::uint64_t seed) {
  std::uint64_t state = seed;
  for (auto& word : s_) {
    state += kGolden;
    word = splitmix64_mix(state);
  }
}

std::uint64_t Xoshiro256::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Xoshiro256::uniform() {
  return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

double GaussianStream::next() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  double u = 0.0;
  double v = 0.0;
  double s = 0.0;
  do {
    u = 2.0 * rng_.uniform() - 1.0;
    v = 2.0 * rng_.uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  cached_ = v * f;
  has_cached_ = true;
  return u * f;
}

std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t stream_index) {
  return splitmix64_mix(master_seed + kGolden * (stream_index + 1));
}

Vector BrownianPath::total() const {
  if (d == 0) return Vector::Zero(0);
  return increments.rowwise().sum();
}

BrownianPath sample_brownian(Index d, Index n_steps, double dt, std::uint64_t master_seed,
                             std::uint64_t stream_index, double t0) {
  if (!(dt > 0.0)) throw InvalidStep("dt must be positive");
  if (d < 0 || n_steps < 0) throw InputError("noise dimension and step count must be non-negative");
  BrownianPath path;
  path.t0 = t0;
  path.dt = dt;
  path.n_steps = n_steps;
  path.d = d;
  path.master_seed = master_seed;
  path.stream_index = stream_index;
  path.increments.resize(d, n_steps);
  if (d == 0) return path;

  GaussianStream gauss(stream_seed(master_seed, stream_index));
  const double scale = std::sqrt(dt);
  for (Index j = 0; j < n_steps; ++j) {
    for (Index k = 0; k < d; ++k) path.increments(k, j) = scale * gauss.next();
  }
  return path;
}

BrownianPath coarsen(const BrownianPath& path, Index factor) {
  if (factor <= 0 || path.n_steps % factor != 0) {
    throw IndivisibleFactor("coarsening factor " + std::to_string(factor) + " does not divide " +
                            std::to_string(path.n_steps) + " steps");
  }
  BrownianPath out = path;
  out.dt = path.dt * static_cast<double>(factor);
  out.n_steps = path.n_steps / factor;
  out.increments = Matrix::Zero(path.d, out.n_steps);
  for (Index j = 0; j < out.n_steps; ++j) {
    for (Index m = 0; m < factor; ++m) out.increments.col(j) += path.increments.col(j * factor + m);
  }
  return out;
}

BrownianPath restrict_streams(const BrownianPath& path, const std::vector<Index>& active) {
  BrownianPath out = path;
  for (Index k = 0; k < path.d; ++k) {
    if (std::find(active.begin(), active.end(), k) == active.end()) out.increments.row(k).setZero();
  }
  for (Index k : active) {
    if (k < 0 || k >= path.d) throw InputError("noise stream " + std::to_string(k) + " out of range");
  }
  return out;
}

}  // namespace contactflow
