#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "contactflow/brownian.hpp"
#include "contactflow/chart.hpp"
#include "contactflow/hamiltonian_system.hpp"
#include "contactflow/integrator.hpp"

namespace contactflow {

/// Pointwise residual r(t) = eta(x_t)^T J_t - lambda_t eta(x_0) of the
/// conformal contactomorphism condition, one covector per grid time.
struct ContactDefectReport {
  std::vector<double> times;
  std::vector<Vector> residuals;
  std::vector<double> sup_norms;
  double max_sup = 0.0;
};

ContactDefectReport contact_defect(const AugmentedTrajectory& traj, const Chart& chart);

/// Writes "t,r_1,...,r_{2n+1},sup" rows with 17 significant digits.
void write_defect_csv(std::ostream& os, const ContactDefectReport& report);

/// max_t |lambda_t - closed_form(t)|. `closed_form` may use the variable t and
/// any name bound in `parameters`.
double conformal_factor_check(const AugmentedTrajectory& traj, const Expr& closed_form,
                              const EvalContext& parameters = {});

struct ConvergenceReport {
  std::vector<double> dts;     // strictly decreasing, nested by factor 2
  std::vector<double> errors;
  std::vector<double> orders;  // log2(errors[i] / errors[i+1])

  double min_order() const;
};

/// Orders between adjacent levels; dts must halve at each level.
ConvergenceReport fit_orders(std::vector<double> dts, std::vector<double> errors);

struct EnsembleStats {
  std::size_t n_paths = 0;
  std::string observable;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double standard_error = 0.0;           // sqrt(variance / n_paths)
  double variance_standard_error = 0.0;  // standard error of the variance estimate
};

/// Statistics of `values`, accumulated in index order.
EnsembleStats summarize(const std::vector<double>& values, std::string observable);

template <StratonovichSystem System>
Matrix finite_difference_jacobian(const System& sys, const ContactState& x0, const BrownianPath& path,
                                  Scheme scheme, double h) {
  if (!(h > 0.0)) throw InputError("finite-difference step must be positive");
  const Index dim = x0.size();
  Matrix jac(dim, dim);
  for (Index c = 0; c < dim; ++c) {
    ContactState plus = x0;
    ContactState minus = x0;
    plus[c] += h;
    minus[c] -= h;
    jac.col(c) = (integrate_final(sys, plus, path, scheme) - integrate_final(sys, minus, path, scheme)) / (2.0 * h);
  }
  return jac;
}

/// Final-state strong error on grids coarsened by 2, 4, ..., 2^(levels-1)
/// against the finest-grid solution on the same Brownian sample.
template <StratonovichSystem System>
ConvergenceReport convergence_study(const System& sys, const ContactState& x0, const BrownianPath& finest,
                                    Scheme scheme, int levels) {
  if (levels < 3) throw InputError("convergence study needs at least 3 levels");
  const Index top = Index{1} << (levels - 1);
  if (finest.n_steps % top != 0) {
    throw IndivisibleFactor("finest grid of " + std::to_string(finest.n_steps) + " steps is not divisible by " +
                            std::to_string(top));
  }
  const ContactState reference = integrate_final(sys, x0, finest, scheme);
  std::vector<double> dts;
  std::vector<double> errors;
  for (Index factor = top; factor >= 2; factor /= 2) {
    const BrownianPath coarse = coarsen(finest, factor);
    dts.push_back(coarse.dt);
    errors.push_back(detail::sup_norm(integrate_final(sys, x0, coarse, scheme) - reference));
  }
  return fit_orders(std::move(dts), std::move(errors));
}

/// Mean over paths of the final-state strong error on grids coarsened by
/// `factors` (decreasing), against `reference(path)` for each finest path.
template <StratonovichSystem System>
ConvergenceReport strong_convergence(const System& sys, const ContactState& x0,
                                     const std::vector<BrownianPath>& finest_paths, Scheme scheme,
                                     const std::vector<Index>& factors,
                                     const std::function<ContactState(const BrownianPath&)>& reference) {
  if (finest_paths.empty()) throw InputError("strong convergence needs at least one path");
  std::vector<double> dts;
  std::vector<double> errors(factors.size(), 0.0);
  for (Index f : factors) dts.push_back(finest_paths.front().dt * static_cast<double>(f));
  for (const BrownianPath& path : finest_paths) {
    const ContactState ref = reference(path);
    for (std::size_t i = 0; i < factors.size(); ++i) {
      const BrownianPath coarse = coarsen(path, factors[i]);
      errors[i] += detail::sup_norm(integrate_final(sys, x0, coarse, scheme) - ref);
    }
  }
  for (double& e : errors) e /= static_cast<double>(finest_paths.size());
  return fit_orders(std::move(dts), std::move(errors));
}

/// Max contact defect on grids coarsened by 2^(levels-1), ..., 2, 1.
template <StratonovichSystem System>
ConvergenceReport defect_convergence(const System& sys, const Chart& chart, const ContactState& x0,
                                     const BrownianPath& finest, Scheme scheme, int levels) {
  if (levels < 2) throw InputError("defect convergence needs at least 2 levels");
  const Index top = Index{1} << (levels - 1);
  if (finest.n_steps % top != 0) {
    throw IndivisibleFactor("finest grid of " + std::to_string(finest.n_steps) + " steps is not divisible by " +
                            std::to_string(top));
  }
  std::vector<double> dts;
  std::vector<double> errors;
  for (Index factor = top; factor >= 1; factor /= 2) {
    const BrownianPath path = coarsen(finest, factor);
    dts.push_back(path.dt);
    errors.push_back(contact_defect(integrate_augmented(sys, x0, path, scheme), chart).max_sup);
  }
  return fit_orders(std::move(dts), std::move(errors));
}

struct MonteCarloOptions {
  double t0 = 0.0;
  double t_end = 1.0;
  double dt = 1e-3;
  std::size_t n_paths = 2;
  std::uint64_t master_seed = 0;
  Scheme scheme = Scheme::EulerHeun;
  unsigned workers = 1;
  /// 0-based noise rows kept; all others are zeroed. Empty optional keeps all.
  std::optional<std::vector<Index>> active_streams;
};

/// Number of grid steps for [t0, t_end] at dt; throws InputError naming "dt"
/// when dt does not divide the interval within 1e-12.
Index grid_steps(double t0, double t_end, double dt);

/// Observable at the final time over streams 0..n_paths-1. Streams are
/// distributed across workers; statistics are accumulated in stream order.
EnsembleStats monte_carlo(const HamiltonianSystem& sys, const ContactState& x0, const Expr& observable,
                          const MonteCarloOptions& options);

}  // namespace contactflow
