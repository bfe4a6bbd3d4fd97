#include <cmath>
#include <numbers>
#include <set>

#include "contactflow/brownian.hpp"
#include "contactflow/cli.hpp"
#include "contactflow/errors.hpp"

namespace contactflow::cli {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) throw InputError("unknown key '" + key + "' in " + where);
  }
}

template <class T>
T get(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError(std::string("config field '") + key + "' has the wrong type");
  }
}

SystemSpec system_from_json(const json& j) {
  SystemSpec spec;
  if (j.is_string()) {
    spec.catalog_id = j.get<std::string>();
    return spec;
  }
  if (!j.is_object()) throw InputError("config field 'system' must be a catalog id or an object");
  if (j.contains("catalog")) {
    reject_unknown_keys(j, {"catalog", "parameters"}, "system");
    spec.catalog_id = get<std::string>(j, "catalog");
    if (j.contains("parameters")) {
      for (const auto& [key, value] : j.at("parameters").items()) {
        if (value.is_number()) spec.parameters.numbers[key] = value.get<double>();
        else if (value.is_string()) spec.parameters.sources[key] = value.get<std::string>();
        else throw InputError("parameter '" + key + "' must be a number or an expression string");
      }
    }
    return spec;
  }
  reject_unknown_keys(j, {"chart", "n", "H0", "noise", "constants", "lambda_closed_form"}, "system");
  if (j.contains("chart")) spec.chart = get<std::string>(j, "chart");
  if (j.contains("n")) spec.n = get<int>(j, "n");
  if (j.contains("H0")) spec.drift = get<std::string>(j, "H0");
  if (j.contains("noise")) spec.noise = get<std::vector<std::string>>(j, "noise");
  if (j.contains("constants")) {
    for (const auto& [key, value] : j.at("constants").items()) {
      if (!value.is_number()) throw InputError("constant '" + key + "' must be a number");
      spec.constants[key] = value.get<double>();
    }
  }
  if (j.contains("lambda_closed_form")) spec.lambda_closed_form = get<std::string>(j, "lambda_closed_form");
  return spec;
}

json system_to_json(const SystemSpec& spec) {
  if (spec.catalog_id) {
    if (spec.parameters.numbers.empty() && spec.parameters.sources.empty()) return *spec.catalog_id;
    json params = json::object();
    for (const auto& [k, v] : spec.parameters.numbers) params[k] = v;
    for (const auto& [k, v] : spec.parameters.sources) params[k] = v;
    return json{{"catalog", *spec.catalog_id}, {"parameters", params}};
  }
  json constants = json::object();
  for (const auto& [k, v] : spec.constants) constants[k] = v;
  json out{{"chart", spec.chart}, {"n", spec.n}, {"H0", spec.drift}, {"noise", spec.noise}, {"constants", constants}};
  if (spec.lambda_closed_form) out["lambda_closed_form"] = *spec.lambda_closed_form;
  return out;
}

}  // namespace

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw InputError("config must be a JSON object");
  reject_unknown_keys(j,
                      {"system", "t0", "T", "dt", "scheme", "seed", "initial_state", "active_noise", "observable",
                       "n_paths", "workers", "integrals", "samples", "tolerance", "bracket", "levels",
                       "defect_csv"},
                      "config");
  RunConfig c;
  if (!j.contains("system")) throw InputError("config field 'system' is required");
  c.system = system_from_json(j.at("system"));
  if (j.contains("t0")) c.t0 = get<double>(j, "t0");
  if (j.contains("T")) c.t_end = get<double>(j, "T");
  if (j.contains("dt")) c.dt = get<double>(j, "dt");
  if (j.contains("scheme")) c.scheme = scheme_from_string(get<std::string>(j, "scheme"));
  if (j.contains("seed")) c.seed = get<std::uint64_t>(j, "seed");
  if (j.contains("initial_state")) c.initial_state = get<std::vector<double>>(j, "initial_state");
  if (j.contains("active_noise")) c.active_noise = get<std::vector<int>>(j, "active_noise");
  if (j.contains("observable")) c.observable = get<std::string>(j, "observable");
  if (j.contains("n_paths")) c.n_paths = get<std::size_t>(j, "n_paths");
  if (j.contains("workers")) c.workers = get<unsigned>(j, "workers");
  if (j.contains("integrals")) c.integrals = get<std::vector<std::string>>(j, "integrals");
  if (j.contains("samples")) c.samples = get<std::size_t>(j, "samples");
  if (j.contains("tolerance")) c.tolerance = get<double>(j, "tolerance");
  if (j.contains("bracket")) {
    const json& b = j.at("bracket");
    reject_unknown_keys(b, {"f", "g"}, "bracket");
    c.bracket_f = get<std::string>(b, "f");
    c.bracket_g = get<std::string>(b, "g");
  }
  if (j.contains("levels")) c.levels = get<int>(j, "levels");
  if (j.contains("defect_csv")) c.defect_csv = get<std::string>(j, "defect_csv");
  return c;
}

json config_to_json(const RunConfig& c) {
  json j{{"system", system_to_json(c.system)},
         {"t0", c.t0},
         {"T", c.t_end},
         {"dt", c.dt},
         {"scheme", std::string(to_string(c.scheme))},
         {"seed", c.seed},
         {"observable", c.observable},
         {"n_paths", c.n_paths},
         {"integrals", c.integrals},
         {"samples", c.samples},
         {"tolerance", c.tolerance},
         {"levels", c.levels}};
  if (c.initial_state) j["initial_state"] = *c.initial_state;
  if (c.active_noise) j["active_noise"] = *c.active_noise;
  if (!c.bracket_f.empty() || !c.bracket_g.empty()) j["bracket"] = json{{"f", c.bracket_f}, {"g", c.bracket_g}};
  if (c.defect_csv) j["defect_csv"] = *c.defect_csv;
  return j;
}

HamiltonianSystem build_system(const RunConfig& c) {
  if (c.system.catalog_id) return catalog_entry(*c.system.catalog_id).make(c.system.parameters);
  return HamiltonianSystem::from_sources(Chart::from_id(c.system.chart, c.system.n), c.system.drift, c.system.noise,
                                         c.system.constants);
}

ContactState initial_state(const RunConfig& c, const HamiltonianSystem& sys) {
  ContactState x;
  if (c.initial_state) {
    x = Eigen::Map<const Vector>(c.initial_state->data(), static_cast<Index>(c.initial_state->size()));
  } else if (c.system.catalog_id) {
    x = catalog_entry(*c.system.catalog_id).default_state;
  } else {
    x = Vector::Zero(sys.dimension());
    if (sys.chart().kind() == ChartKind::SasakiEinstein) x.head(2).setConstant(std::numbers::pi / 2);
  }
  if (x.size() != sys.dimension()) {
    throw InputError("initial_state has " + std::to_string(x.size()) + " entries, chart needs " +
                     std::to_string(sys.dimension()));
  }
  sys.chart().check_state(x);
  return x;
}

std::optional<std::string> lambda_closed_form(const RunConfig& c) {
  if (c.system.catalog_id) return catalog_entry(*c.system.catalog_id).lambda_closed_form;
  return c.system.lambda_closed_form;
}

std::vector<ContactState> sample_states(const Chart& chart, std::size_t count, std::uint64_t seed) {
  Xoshiro256 rng(seed);
  std::vector<ContactState> out;
  out.reserve(count);
  const double pi = std::numbers::pi;
  for (std::size_t s = 0; s < count; ++s) {
    ContactState x(chart.dimension());
    if (chart.kind() == ChartKind::SasakiEinstein) {
      x[0] = 0.1 + (pi - 0.2) * rng.uniform();
      x[1] = 0.1 + (pi - 0.2) * rng.uniform();
      x[2] = 2.0 * pi * rng.uniform();
      x[3] = 2.0 * pi * rng.uniform();
      x[4] = 4.0 * pi * rng.uniform();
    } else {
      for (Index i = 0; i < x.size(); ++i) x[i] = -2.0 + 4.0 * rng.uniform();
    }
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace contactflow::cli
