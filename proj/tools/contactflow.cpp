// Command-line front end: contactflow <subcommand> --config run.json [overrides]

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "contactflow/cli.hpp"
#include "contactflow/errors.hpp"

namespace cli = contactflow::cli;

int main(int argc, char** argv) {
  CLI::App app{"Simulation and verification of stochastic contact Hamiltonian systems"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  double dt = 0.0;
  std::string scheme;
  std::string out_path;
  bool report_only = false;
  unsigned workers = 0;
  std::string observable;
  std::size_t n_paths = 0;
  std::vector<std::string> integrals;
  std::string bracket_f;
  std::string bracket_g;

  const std::vector<std::string> names{"simulate",  "verify-contact", "check-integrability", "bracket",
                                       "monte-carlo", "convergence",  "list-systems"};
  for (const auto& name : names) {
    CLI::App* sub = app.add_subcommand(name);
    if (name != "list-systems") sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--seed", seed, "master seed");
    sub->add_option("--dt", dt, "time step");
    sub->add_option("--scheme", scheme, "heun | midpoint");
    sub->add_option("--out", out_path, "output file (default stdout)");
    sub->add_flag("--report-only", report_only, "exit 0 even when a verification fails");
    sub->add_option("--workers", workers, "worker threads for monte-carlo");
    sub->add_option("--observable", observable, "observable expression for monte-carlo");
    sub->add_option("--n-paths", n_paths, "number of monte-carlo paths");
    sub->add_option("--integral", integrals, "first integral (repeat; first must be 1)");
    sub->add_option("--f", bracket_f, "bracket left argument");
    sub->add_option("--g", bracket_g, "bracket right argument");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kConfigError;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  CLI::App* sub = app.get_subcommands().front();

  cli::RunConfig config;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw contactflow::InputError("cannot read config '" + config_path + "'");
      config = cli::config_from_json(nlohmann::json::parse(in));
    }
    if (sub->count("--seed")) config.seed = seed;
    if (sub->count("--dt")) config.dt = dt;
    if (sub->count("--scheme")) config.scheme = contactflow::scheme_from_string(scheme);
    if (sub->count("--workers")) config.workers = workers;
    if (sub->count("--observable")) config.observable = observable;
    if (sub->count("--n-paths")) config.n_paths = n_paths;
    if (sub->count("--integral")) config.integrals = integrals;
    if (sub->count("--f")) config.bracket_f = bracket_f;
    if (sub->count("--g")) config.bracket_g = bracket_g;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return cli::kConfigError;
  }

  cli::CommandOptions options;
  options.report_only = report_only;
  std::ostringstream buffer;
  const int code = cli::run_command(command, config, options, buffer, std::cerr);
  if (out_path.empty()) {
    std::cout << buffer.str();
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "config error: cannot write '" << out_path << "'\n";
      return cli::kConfigError;
    }
    out << buffer.str();
  }
  return code;
}
