#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "contactflow/brownian.hpp"
#include "contactflow/errors.hpp"
#include "contactflow/stochastic_system.hpp"

namespace contactflow {

enum class Scheme { EulerHeun, StratonovichMidpoint };

std::string_view to_string(Scheme scheme);
/// Accepts "heun" and "midpoint".
Scheme scheme_from_string(std::string_view name);

/// State, flow Jacobian J = dx_t/dx_0 and log of the conformal factor.
struct AugmentedState {
  ContactState x;
  Matrix jacobian;
  double log_lambda = 0.0;

  double lambda() const { return std::exp(log_lambda); }

  static AugmentedState initial(const ContactState& x0) {
    return {x0, Matrix::Identity(x0.size(), x0.size()), 0.0};
  }
};

struct Trajectory {
  std::vector<double> times;
  std::vector<ContactState> states;
};

struct AugmentedTrajectory {
  std::vector<double> times;
  std::vector<AugmentedState> states;
};

/// Midpoint fixed-point iteration controls.
inline constexpr double kMidpointTolerance = 1e-13;
inline constexpr int kMidpointMaxIterations = 50;

template <StratonovichSystem System>
std::pair<Vector, Matrix> drift_diffusion(const System& sys, const ContactState& x) {
  Coefficients c;
  sys.coefficients(x, c, false);
  return {std::move(c.drift), std::move(c.diffusion)};
}

namespace detail {

inline double sup_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

/// Increment a dt + B dW of the state.
inline Vector state_increment(const Coefficients& c, const Vector& dw, double dt) {
  Vector out = c.drift * dt;
  if (dw.size() > 0) out.noalias() += c.diffusion * dw;
  return out;
}

/// M = Da dt + sum_k Db_k dW_k, the increment operator of the tangent flow.
inline Matrix tangent_operator(const Coefficients& c, const Vector& dw, double dt) {
  Matrix m = c.drift_jacobian * dt;
  for (Index k = 0; k < dw.size(); ++k) m += c.diffusion_jacobians[static_cast<std::size_t>(k)] * dw[k];
  return m;
}

/// Increment of log(lambda): -(r_0 dt + sum_k r_k dW_k).
inline double log_lambda_increment(const Coefficients& c, const Vector& dw, double dt) {
  double s = c.drift_reeb * dt;
  for (Index k = 0; k < dw.size(); ++k) s += c.diffusion_reeb[k] * dw[k];
  return -s;
}

/// One step of the chosen scheme. The state update is identical whether or
/// not the tangent data is carried along.
template <StratonovichSystem System>
void advance(const System& sys, ContactState& x, Matrix* jacobian, double* log_lambda, const Vector& dw,
             double dt, Scheme scheme) {
  const bool tangent = jacobian != nullptr;
  Coefficients c0;
  sys.coefficients(x, c0, tangent);

  if (scheme == Scheme::EulerHeun) {
    const Vector predictor = x + state_increment(c0, dw, dt);
    Coefficients c1;
    sys.coefficients(predictor, c1, tangent);
    const Vector next = x + 0.5 * (state_increment(c0, dw, dt) + state_increment(c1, dw, dt));
    if (tangent) {
      const Matrix m0j = tangent_operator(c0, dw, dt) * (*jacobian);
      const Matrix predicted = *jacobian + m0j;
      *jacobian += 0.5 * (m0j + tangent_operator(c1, dw, dt) * predicted);
      *log_lambda += 0.5 * (log_lambda_increment(c0, dw, dt) + log_lambda_increment(c1, dw, dt));
    }
    x = next;
    return;
  }

  // Implicit midpoint by fixed-point iteration from the Euler predictor.
  Vector next = x + state_increment(c0, dw, dt);
  Coefficients cm;
  bool converged = false;
  for (int it = 0; it < kMidpointMaxIterations; ++it) {
    sys.coefficients(0.5 * (x + next), cm, false);
    const Vector candidate = x + state_increment(cm, dw, dt);
    if (!candidate.allFinite()) break;
    const double change = sup_norm(candidate - next);
    next = candidate;
    if (change <= kMidpointTolerance * std::max(1.0, sup_norm(next))) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw MidpointDivergence("midpoint iteration did not converge within " +
                             std::to_string(kMidpointMaxIterations) + " iterations");
  }
  if (tangent) {
    sys.coefficients(0.5 * (x + next), cm, true);
    const Matrix m = tangent_operator(cm, dw, dt);
    const Matrix id = Matrix::Identity(m.rows(), m.cols());
    *jacobian = (id - 0.5 * m).partialPivLu().solve((id + 0.5 * m) * (*jacobian));
    *log_lambda += log_lambda_increment(cm, dw, dt);
  }
  x = next;
}

inline void check_dimensions(Index dim, Index noise, const ContactState& x0, const BrownianPath& path) {
  if (x0.size() != dim) throw InputError("initial state has wrong dimension");
  if (path.d != noise) {
    throw InputError("Brownian path has " + std::to_string(path.d) + " streams, system needs " +
                     std::to_string(noise));
  }
}

}  // namespace detail

template <StratonovichSystem System>
ContactState step(const System& sys, const ContactState& x, const Vector& dw, double dt, Scheme scheme) {
  ContactState out = x;
  detail::advance(sys, out, nullptr, nullptr, dw, dt, scheme);
  return out;
}

template <StratonovichSystem System>
AugmentedState step_augmented(const System& sys, const AugmentedState& s, const Vector& dw, double dt,
                              Scheme scheme) {
  AugmentedState out = s;
  detail::advance(sys, out.x, &out.jacobian, &out.log_lambda, dw, dt, scheme);
  return out;
}

/// Final state only; used where the whole trajectory is not needed.
template <StratonovichSystem System>
ContactState integrate_final(const System& sys, const ContactState& x0, const BrownianPath& path, Scheme scheme) {
  detail::check_dimensions(sys.dimension(), sys.noise_dimension(), x0, path);
  ContactState x = x0;
  Vector dw(path.d);
  for (Index j = 0; j < path.n_steps; ++j) {
    dw = path.increments.col(j);
    detail::advance(sys, x, nullptr, nullptr, dw, path.dt, scheme);
  }
  return x;
}

template <StratonovichSystem System>
Trajectory integrate(const System& sys, const ContactState& x0, const BrownianPath& path, Scheme scheme) {
  detail::check_dimensions(sys.dimension(), sys.noise_dimension(), x0, path);
  Trajectory traj;
  traj.times.reserve(static_cast<std::size_t>(path.n_steps + 1));
  traj.states.reserve(static_cast<std::size_t>(path.n_steps + 1));
  ContactState x = x0;
  traj.times.push_back(path.time(0));
  traj.states.push_back(x);
  Vector dw(path.d);
  for (Index j = 0; j < path.n_steps; ++j) {
    dw = path.increments.col(j);
    detail::advance(sys, x, nullptr, nullptr, dw, path.dt, scheme);
    traj.times.push_back(path.time(j + 1));
    traj.states.push_back(x);
  }
  return traj;
}

/// Co-integrates x, J and log(lambda) with the same increments and scheme.
template <StratonovichSystem System>
AugmentedTrajectory integrate_augmented(const System& sys, const ContactState& x0, const BrownianPath& path,
                                        Scheme scheme) {
  detail::check_dimensions(sys.dimension(), sys.noise_dimension(), x0, path);
  AugmentedTrajectory traj;
  traj.times.reserve(static_cast<std::size_t>(path.n_steps + 1));
  traj.states.reserve(static_cast<std::size_t>(path.n_steps + 1));
  AugmentedState s = AugmentedState::initial(x0);
  traj.times.push_back(path.time(0));
  traj.states.push_back(s);
  Vector dw(path.d);
  for (Index j = 0; j < path.n_steps; ++j) {
    dw = path.increments.col(j);
    detail::advance(sys, s.x, &s.jacobian, &s.log_lambda, dw, path.dt, scheme);
    traj.times.push_back(path.time(j + 1));
    traj.states.push_back(s);
  }
  return traj;
}

}  // namespace contactflow
