#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>

#include "contactflow/bracket.hpp"
#include "contactflow/cli.hpp"
#include "contactflow/errors.hpp"
#include "contactflow/report_json.hpp"
#include "contactflow/verification.hpp"

namespace contactflow::cli {

using nlohmann::json;

namespace {

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json state_to_json(const ContactState& x) {
  json out = json::array();
  for (Index i = 0; i < x.size(); ++i) out.push_back(x[i]);
  return out;
}

std::string system_label(const RunConfig& c) {
  return c.system.catalog_id ? *c.system.catalog_id : "inline:" + c.system.chart;
}

/// Brownian path for one stream with inactive noise rows zeroed.
BrownianPath make_path(const RunConfig& c, const HamiltonianSystem& sys, Index n_steps, std::uint64_t stream) {
  BrownianPath path = sample_brownian(sys.noise_dimension(), n_steps, c.dt, c.seed, stream, c.t0);
  if (c.active_noise) {
    std::vector<Index> rows;
    for (int k : *c.active_noise) rows.push_back(k - 1);
    path = restrict_streams(path, rows);
  }
  return path;
}

std::optional<std::vector<Index>> active_rows(const RunConfig& c) {
  if (!c.active_noise) return std::nullopt;
  std::vector<Index> rows;
  for (int k : *c.active_noise) rows.push_back(k - 1);
  return rows;
}

EvalContext lambda_parameters(const RunConfig& c, const HamiltonianSystem& sys) {
  EvalContext ctx(sys.constants().begin(), sys.constants().end());
  ctx["t0"] = c.t0;
  return ctx;
}

Expr parse_closed_form(const std::string& src, const HamiltonianSystem& sys) {
  std::vector<std::string> names{"t", "t0"};
  for (const auto& [name, value] : sys.constants()) names.push_back(name);
  return parse(src, names);
}

int cmd_simulate(const RunConfig& c, const CommandOptions&, std::ostream& out) {
  const HamiltonianSystem sys = build_system(c);
  const ContactState x0 = initial_state(c, sys);
  const Index n_steps = grid_steps(c.t0, c.t_end, c.dt);
  const AugmentedTrajectory traj = integrate_augmented(sys, x0, make_path(c, sys, n_steps, 0), c.scheme);

  out << "t";
  for (const auto& name : sys.chart().coordinates()) out << ',' << name;
  out << ",lambda\n";
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const ContactState x = sys.chart().wrap_angles(traj.states[k].x);
    out << format17(traj.times[k]);
    for (Index i = 0; i < x.size(); ++i) out << ',' << format17(x[i]);
    out << ',' << format17(traj.states[k].lambda()) << '\n';
  }
  return kOk;
}

int cmd_verify_contact(const RunConfig& c, const CommandOptions& options, std::ostream& out) {
  const HamiltonianSystem sys = build_system(c);
  const ContactState x0 = initial_state(c, sys);
  const Index n_steps = grid_steps(c.t0, c.t_end, c.dt);
  if (c.levels < 2) throw InputError("levels must be at least 2");
  const BrownianPath finest = make_path(c, sys, n_steps, 0);
  const ConvergenceReport defect = defect_convergence(sys, sys.chart(), x0, finest, c.scheme, c.levels);

  const AugmentedTrajectory traj = integrate_augmented(sys, x0, finest, c.scheme);
  const ContactDefectReport finest_defect = contact_defect(traj, sys.chart());
  bool strict = true;
  for (const auto& s : traj.states) strict = strict && s.log_lambda == 0.0;

  // Defects at round-off level cannot be fitted; treat them as exact.
  constexpr double kNegligibleDefect = 1e-12;
  constexpr double kMinOrder = 0.9;
  constexpr double kLambdaTolerance = 1e-8;
  bool negligible = true;
  for (double e : defect.errors) negligible = negligible && e <= kNegligibleDefect;
  const bool defect_ok = negligible || defect.min_order() >= kMinOrder;

  json report{{"command", "verify-contact"},
              {"system", system_label(c)},
              {"scheme", std::string(to_string(c.scheme))},
              {"defect", defect},
              {"max_defect", finest_defect.max_sup},
              {"min_defect_order", negligible ? json(nullptr) : json(defect.min_order())},
              {"defect_negligible", negligible},
              {"lambda_final", traj.states.back().lambda()},
              {"strict_contactomorphism", strict}};

  bool lambda_ok = true;
  if (const auto form = lambda_closed_form(c)) {
    const double dev = conformal_factor_check(traj, parse_closed_form(*form, sys), lambda_parameters(c, sys));
    lambda_ok = dev <= kLambdaTolerance;
    report["lambda_closed_form"] = *form;
    report["lambda_max_deviation"] = dev;
  } else {
    report["lambda_closed_form"] = nullptr;
    report["lambda_max_deviation"] = nullptr;
  }
  const bool pass = defect_ok && lambda_ok;
  report["pass"] = pass;
  report["effective_config"] = config_to_json(c);

  if (c.defect_csv) {
    std::ofstream csv(*c.defect_csv, std::ios::binary);
    if (!csv) throw InputError("cannot write defect_csv '" + *c.defect_csv + "'");
    write_defect_csv(csv, finest_defect);
  }
  out << report.dump(2) << '\n';
  return pass || options.report_only ? kOk : kVerificationFailed;
}

int cmd_check_integrability(const RunConfig& c, const CommandOptions& options, std::ostream& out) {
  const HamiltonianSystem sys = build_system(c);
  std::vector<Expr> integrals;
  for (const auto& src : c.integrals) integrals.push_back(sys.parse(src));
  const auto samples = sample_states(sys.chart(), c.samples, c.seed);
  const IntegrabilityReport result = check_integrability(sys, integrals, samples, c.tolerance);

  json report{{"command", "check-integrability"},
              {"system", system_label(c)},
              {"integrals", c.integrals},
              {"report", result},
              {"verdict", result.pass ? "PASS" : "FAIL"},
              {"effective_config", config_to_json(c)}};
  out << report.dump(2) << '\n';
  return result.pass || options.report_only ? kOk : kVerificationFailed;
}

int cmd_bracket(const RunConfig& c, const CommandOptions&, std::ostream& out) {
  if (c.bracket_f.empty() || c.bracket_g.empty()) throw InputError("bracket needs both f and g");
  const HamiltonianSystem sys = build_system(c);
  const ContactState x = initial_state(c, sys);
  const Expr f = sys.parse(c.bracket_f);
  const Expr g = sys.parse(c.bracket_g);
  json report{{"command", "bracket"},
              {"system", system_label(c)},
              {"f", c.bracket_f},
              {"g", c.bracket_g},
              {"state", state_to_json(x)},
              {"value", jacobi_bracket(sys, f, g, x)},
              {"reeb_f", reeb_derivative(sys, f, x)},
              {"reeb_g", reeb_derivative(sys, g, x)},
              {"effective_config", config_to_json(c)}};
  out << report.dump(2) << '\n';
  return kOk;
}

int cmd_monte_carlo(const RunConfig& c, const CommandOptions&, std::ostream& out) {
  const HamiltonianSystem sys = build_system(c);
  const ContactState x0 = initial_state(c, sys);
  MonteCarloOptions mc;
  mc.t0 = c.t0;
  mc.t_end = c.t_end;
  mc.dt = c.dt;
  mc.n_paths = c.n_paths;
  mc.master_seed = c.seed;
  mc.scheme = c.scheme;
  mc.workers = c.workers;
  mc.active_streams = active_rows(c);
  const EnsembleStats stats = monte_carlo(sys, x0, sys.parse(c.observable), mc);
  json report{{"command", "monte-carlo"},
              {"system", system_label(c)},
              {"stats", stats},
              {"effective_config", config_to_json(c)}};
  out << report.dump(2) << '\n';
  return kOk;
}

int cmd_convergence(const RunConfig& c, const CommandOptions&, std::ostream& out) {
  const HamiltonianSystem sys = build_system(c);
  const ContactState x0 = initial_state(c, sys);
  const Index n_steps = grid_steps(c.t0, c.t_end, c.dt);
  const ConvergenceReport result = convergence_study(sys, x0, make_path(c, sys, n_steps, 0), c.scheme, c.levels);
  json report{{"command", "convergence"},
              {"system", system_label(c)},
              {"scheme", std::string(to_string(c.scheme))},
              {"convergence", result},
              {"min_order", std::isfinite(result.min_order()) ? json(result.min_order()) : json(nullptr)},
              {"effective_config", config_to_json(c)}};
  out << report.dump(2) << '\n';
  return kOk;
}

int cmd_list_systems(const RunConfig&, const CommandOptions&, std::ostream& out) {
  json list = json::array();
  for (const auto& e : catalog()) {
    json params = json::object();
    for (const auto& [k, v] : e.defaults.numbers) params[k] = v;
    for (const auto& [k, v] : e.defaults.sources) params[k] = v;
    list.push_back(json{{"id", e.id},
                        {"description", e.description},
                        {"parameters", params},
                        {"default_state", state_to_json(e.default_state)},
                        {"lambda_closed_form", e.lambda_closed_form ? json(*e.lambda_closed_form) : json(nullptr)}});
  }
  out << json{{"systems", list}}.dump(2) << '\n';
  return kOk;
}

}  // namespace

int run_command(const std::string& command, const RunConfig& config, const CommandOptions& options,
                std::ostream& out, std::ostream& err) {
  using Handler = std::function<int(const RunConfig&, const CommandOptions&, std::ostream&)>;
  static const std::map<std::string, Handler> handlers{
      {"simulate", cmd_simulate},
      {"verify-contact", cmd_verify_contact},
      {"check-integrability", cmd_check_integrability},
      {"bracket", cmd_bracket},
      {"monte-carlo", cmd_monte_carlo},
      {"convergence", cmd_convergence},
      {"list-systems", cmd_list_systems},
  };
  const auto it = handlers.find(command);
  if (it == handlers.end()) {
    err << "config error: unknown command '" << command << "'\n";
    return kConfigError;
  }
  try {
    return it->second(config, options, out);
  } catch (const InputError& e) {
    err << "config error in " << command << ": " << e.what() << '\n';
    return kConfigError;
  } catch (const NumericalError& e) {
    err << "numerical failure in " << command << ": " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const json::exception& e) {
    err << "config error in " << command << ": " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "numerical failure in " << command << ": " << e.what() << '\n';
    return kNumericalFailure;
  }
}

}  // namespace contactflow::cli
