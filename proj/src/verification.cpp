#include "contactflow/verification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

#include "contactflow/errors.hpp"

namespace contactflow {

ContactDefectReport contact_defect(const AugmentedTrajectory& traj, const Chart& chart) {
  if (traj.states.empty()) throw MissingTangentData("trajectory is empty");
  const Index dim = chart.dimension();
  const ContactState& x0 = traj.states.front().x;
  const Vector eta0 = chart.eta(x0);

  ContactDefectReport report;
  report.times = traj.times;
  for (const AugmentedState& s : traj.states) {
    if (s.jacobian.rows() != dim || s.jacobian.cols() != dim) {
      throw MissingTangentData("trajectory state carries no flow Jacobian");
    }
    Vector r = s.jacobian.transpose() * chart.eta(s.x) - s.lambda() * eta0;
    const double sup = detail::sup_norm(r);
    report.max_sup = std::max(report.max_sup, sup);
    report.sup_norms.push_back(sup);
    report.residuals.push_back(std::move(r));
  }
  return report;
}

void write_defect_csv(std::ostream& os, const ContactDefectReport& report) {
  char buf[40];
  const auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
  };
  os << "t";
  const Index dim = report.residuals.empty() ? 0 : report.residuals.front().size();
  for (Index i = 1; i <= dim; ++i) os << ",r_" << i;
  os << ",sup\n";
  for (std::size_t k = 0; k < report.times.size(); ++k) {
    put(report.times[k]);
    for (Index i = 0; i < dim; ++i) {
      os << ',';
      put(report.residuals[k][i]);
    }
    os << ',';
    put(report.sup_norms[k]);
    os << '\n';
  }
}

double conformal_factor_check(const AugmentedTrajectory& traj, const Expr& closed_form,
                              const EvalContext& parameters) {
  EvalContext ctx = parameters;
  double worst = 0.0;
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    ctx["t"] = traj.times[k];
    worst = std::max(worst, std::abs(traj.states[k].lambda() - eval(closed_form, ctx)));
  }
  return worst;
}

double ConvergenceReport::min_order() const {
  if (orders.empty()) return std::nan("");
  return *std::min_element(orders.begin(), orders.end());
}

ConvergenceReport fit_orders(std::vector<double> dts, std::vector<double> errors) {
  if (dts.size() != errors.size()) throw InputError("dt and error lists differ in length");
  for (std::size_t i = 1; i < dts.size(); ++i) {
    if (!(dts[i] < dts[i - 1])) throw InputError("dt list must be strictly decreasing");
  }
  ConvergenceReport report;
  report.dts = std::move(dts);
  report.errors = std::move(errors);
  for (std::size_t i = 0; i + 1 < report.errors.size(); ++i) {
    report.orders.push_back(std::log(report.errors[i] / report.errors[i + 1]) /
                            std::log(report.dts[i] / report.dts[i + 1]));
  }
  return report;
}

EnsembleStats summarize(const std::vector<double>& values, std::string observable) {
  if (values.size() < 2) throw InputError("ensemble statistics need at least 2 paths");
  EnsembleStats s;
  s.n_paths = values.size();
  s.observable = std::move(observable);
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / n;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double v : values) {
    const double d2 = (v - s.mean) * (v - s.mean);
    m2 += d2;
    m4 += d2 * d2;
  }
  s.variance = m2 / (n - 1.0);
  s.standard_error = std::sqrt(s.variance / n);
  // Var(s^2) = (mu4 - sigma^4 (n-3)/(n-1)) / n with plug-in moments.
  const double mu4 = m4 / n;
  const double var_of_var = (mu4 - s.variance * s.variance * (n - 3.0) / (n - 1.0)) / n;
  s.variance_standard_error = std::sqrt(std::max(0.0, var_of_var));
  return s;
}

Index grid_steps(double t0, double t_end, double dt) {
  if (!(dt > 0.0)) throw InvalidStep("dt must be positive");
  if (!(t_end > t0)) throw InputError("final time T must exceed t0");
  const double span = t_end - t0;
  const double steps = std::round(span / dt);
  if (steps < 1.0 || std::abs(steps * dt - span) > 1e-12 * std::max(1.0, span)) {
    throw InputError("dt = " + std::to_string(dt) + " does not divide T - t0 = " + std::to_string(span));
  }
  return static_cast<Index>(steps);
}

EnsembleStats monte_carlo(const HamiltonianSystem& sys, const ContactState& x0, const Expr& observable,
                          const MonteCarloOptions& options) {
  if (options.n_paths < 2) throw InputError("monte carlo needs n_paths >= 2");
  const Index n_steps = grid_steps(options.t0, options.t_end, options.dt);
  const EvalTape tape = compile(observable, sys.declared_names());
  std::vector<double> constants;
  for (const auto& [name, value] : sys.constants()) constants.push_back(value);

  std::vector<double> values(options.n_paths, 0.0);
  std::vector<std::exception_ptr> failures(options.n_paths);
  const unsigned workers = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(options.n_paths)));

  auto run = [&](unsigned worker) {
    std::vector<double> slots(sys.declared_names().size());
    for (std::size_t stream = worker; stream < options.n_paths; stream += workers) {
      try {
        BrownianPath path = sample_brownian(sys.noise_dimension(), n_steps, options.dt, options.master_seed,
                                            stream, options.t0);
        if (options.active_streams) path = restrict_streams(path, *options.active_streams);
        const ContactState xt = integrate_final(sys, x0, path, options.scheme);
        std::copy(xt.data(), xt.data() + xt.size(), slots.begin());
        std::copy(constants.begin(), constants.end(), slots.begin() + xt.size());
        values[stream] = tape.eval(slots);
      } catch (...) {
        failures[stream] = std::current_exception();
      }
    }
  };

  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return summarize(values, to_string(observable));
}

}  // namespace contactflow
