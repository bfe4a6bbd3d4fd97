#include <doctest.h>

#include <cmath>

#include "contactflow/brownian.hpp"
#include "contactflow/errors.hpp"

using namespace contactflow;

TEST_CASE("splitmix64 finalizer reference values") {
  // SplitMix64 with state 0 emits mix(0x9E3779B97F4A7C15) first.
  CHECK(splitmix64_mix(0x9E3779B97F4A7C15ULL) == 0xE220A8397B1DCDAFULL);
  CHECK(splitmix64_mix(0) == 0);
}

TEST_CASE("uniforms stay in the open unit interval") {
  Xoshiro256 rng(123);
  double lo = 1.0, hi = 0.0, sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  CHECK(lo > 0.0);
  CHECK(hi < 1.0);
  CHECK(std::abs(sum / n - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST_CASE("stream seeds differ per stream and master seed") {
  CHECK(stream_seed(0, 0) != stream_seed(0, 1));
  CHECK(stream_seed(0, 1) != stream_seed(1, 1));
  CHECK(stream_seed(5, 3) == splitmix64_mix(5 + 0x9E3779B97F4A7C15ULL * 4));
}

TEST_CASE("sample_brownian: determinism and shape") {
  const BrownianPath a = sample_brownian(3, 100, 0.01, 42, 7);
  const BrownianPath b = sample_brownian(3, 100, 0.01, 42, 7);
  const BrownianPath c = sample_brownian(3, 100, 0.01, 42, 8);
  CHECK(a.increments.rows() == 3);
  CHECK(a.increments.cols() == 100);
  CHECK(a.increments == b.increments);
  CHECK(a.increments != c.increments);
  CHECK(a.t_end() == doctest::Approx(1.0));
}

TEST_CASE("sample_brownian: step-major fill order") {
  const BrownianPath p = sample_brownian(2, 3, 1.0, 9, 0);
  GaussianStream g(stream_seed(9, 0));
  for (Index j = 0; j < 3; ++j) {
    for (Index k = 0; k < 2; ++k) CHECK(p.increments(k, j) == g.next());
  }
}

TEST_CASE("sample_brownian: zero noise dimension and invalid steps") {
  const BrownianPath p = sample_brownian(0, 50, 0.1, 1, 0);
  CHECK(p.increments.size() == 0);
  CHECK(p.n_steps == 50);
  CHECK_THROWS_AS(sample_brownian(1, 10, 0.0, 1, 0), InvalidStep);
  CHECK_THROWS_AS(sample_brownian(1, 10, -1e-3, 1, 0), InvalidStep);
}

TEST_CASE("sample_brownian: increment moments") {
  const Index n = 1000000;
  const double dt = 0.01;
  const BrownianPath p = sample_brownian(1, n, dt, 2024, 0);
  const double mean = p.increments.mean();
  const double var = (p.increments.array() - mean).square().sum() / static_cast<double>(n - 1);
  CHECK(std::abs(mean) <= 4.0 * std::sqrt(dt / static_cast<double>(n)));
  CHECK(std::abs(var / dt - 1.0) <= 0.02);
}

TEST_CASE("coarsen: identity, telescoping and variance") {
  const BrownianPath p = sample_brownian(2, 64, 1.0 / 64, 3, 0);
  CHECK(coarsen(p, 1).increments == p.increments);
  const BrownianPath one = coarsen(p, 64);
  CHECK(one.n_steps == 1);
  CHECK(one.dt == 1.0);
  CHECK((one.increments.col(0) - p.total()).cwiseAbs().maxCoeff() <= 1e-14);
  const BrownianPath c4 = coarsen(p, 4);
  CHECK(c4.increments(1, 2) == doctest::Approx(p.increments.row(1).segment(8, 4).sum()).epsilon(1e-15));
  CHECK_THROWS_AS(coarsen(p, 5), IndivisibleFactor);
  CHECK_THROWS_AS(coarsen(p, 0), IndivisibleFactor);

  const BrownianPath big = sample_brownian(1, 400000, 1e-3, 11, 0);
  const BrownianPath c = coarsen(big, 4);
  const double var = c.increments.array().square().mean();
  CHECK(std::abs(var / 4e-3 - 1.0) <= 0.03);
}

TEST_CASE("restrict_streams zeroes inactive rows") {
  const BrownianPath p = sample_brownian(3, 10, 0.1, 1, 0);
  const BrownianPath r = restrict_streams(p, {0, 2});
  CHECK(r.increments.row(0) == p.increments.row(0));
  CHECK(r.increments.row(1).isZero(0.0));
  CHECK(r.increments.row(2) == p.increments.row(2));
  CHECK_THROWS_AS(restrict_streams(p, {3}), InputError);
}
