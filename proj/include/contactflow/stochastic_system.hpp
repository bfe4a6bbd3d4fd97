#pragma once

#include <concepts>
#include <vector>

#include "contactflow/types.hpp"

namespace contactflow {

/// Coefficients of a Stratonovich system
///
///     dx = a(x) dt + sum_k b_k(x) o dB^k,   d(log lambda) = -r_0(x) dt - sum_k r_k(x) o dB^k
///
/// evaluated at one state. Jacobians are filled only when requested.
struct Coefficients {
  Vector drift;                       // a
  Matrix diffusion;                   // columns b_k, dim x d
  Matrix drift_jacobian;              // Da
  std::vector<Matrix> diffusion_jacobians;  // Db_k
  double drift_reeb = 0.0;            // r_0
  Vector diffusion_reeb;              // r_k
};

/// Anything the stepping schemes can integrate.
template <class System>
concept StratonovichSystem = requires(const System& s, const Vector& x, Coefficients& c, bool tangent) {
  { s.dimension() } -> std::convertible_to<Index>;
  { s.noise_dimension() } -> std::convertible_to<Index>;
  s.coefficients(x, c, tangent);
};

}  // namespace contactflow
