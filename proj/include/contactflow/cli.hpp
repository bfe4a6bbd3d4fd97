#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "contactflow/catalog.hpp"
#include "contactflow/hamiltonian_system.hpp"
#include "contactflow/integrator.hpp"

namespace contactflow::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kConfigError = 2, kNumericalFailure = 3 };

/// Either a catalog id (with optional parameter overrides) or an inline system.
struct SystemSpec {
  std::optional<std::string> catalog_id;
  CatalogParameters parameters;

  std::string chart = "darboux";
  int n = 1;
  std::string drift = "0";
  std::vector<std::string> noise;
  Constants constants;
  std::optional<std::string> lambda_closed_form;
};

struct RunConfig {
  SystemSpec system;
  double t0 = 0.0;
  double t_end = 1.0;
  double dt = 1e-3;
  Scheme scheme = Scheme::EulerHeun;
  std::uint64_t seed = 0;
  std::optional<std::vector<double>> initial_state;
  /// 1-based noise indices k of B^k kept active; all others are zeroed.
  std::optional<std::vector<int>> active_noise;

  std::string observable = "1";
  std::size_t n_paths = 1000;
  unsigned workers = 1;  // never affects results; not echoed

  std::vector<std::string> integrals;
  std::size_t samples = 100;
  double tolerance = 1e-12;

  std::string bracket_f;
  std::string bracket_g;

  int levels = 3;
  std::optional<std::string> defect_csv;
};

/// Throws InputError on unknown keys, wrong types or invalid values.
RunConfig config_from_json(const nlohmann::json& j);
/// Effective configuration; reloads to an equivalent run.
nlohmann::json config_to_json(const RunConfig& config);

HamiltonianSystem build_system(const RunConfig& config);
ContactState initial_state(const RunConfig& config, const HamiltonianSystem& sys);
/// Closed form of lambda over t, t0 and constants, when known for the system.
std::optional<std::string> lambda_closed_form(const RunConfig& config);

/// Seeded states inside the chart's sampling domain: Darboux coordinates
/// uniform in [-2, 2]; theta uniform in [0.1, pi - 0.1], phi in [0, 2 pi),
/// psi in [0, 4 pi) on the Sasaki-Einstein chart.
std::vector<ContactState> sample_states(const Chart& chart, std::size_t count, std::uint64_t seed);

struct CommandOptions {
  bool report_only = false;
};

/// Subcommands: simulate, verify-contact, check-integrability, bracket,
/// monte-carlo, convergence, list-systems. Writes the primary output to `out`
/// and diagnostics to `err`; returns an ExitCode. Never throws.
int run_command(const std::string& command, const RunConfig& config, const CommandOptions& options,
                std::ostream& out, std::ostream& err);

}  // namespace contactflow::cli
