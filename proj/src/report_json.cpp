#include "contactflow/report_json.hpp"

#include <cmath>

namespace contactflow {

using nlohmann::json;

namespace {

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Vector vector_from_json(const json& j) {
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Index>(i)] = j[i].get<double>();
  return v;
}

// JSON has no NaN; an order that cannot be fitted is written as null.
json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
double number_from(const json& j) { return j.is_null() ? std::nan("") : j.get<double>(); }

}  // namespace

void to_json(json& j, const ContactDefectReport& r) {
  json residuals = json::array();
  for (const auto& v : r.residuals) residuals.push_back(vector_to_json(v));
  j = json{{"times", r.times}, {"residuals", residuals}, {"sup_norms", r.sup_norms}, {"max_sup", r.max_sup}};
}

void from_json(const json& j, ContactDefectReport& r) {
  r.times = j.at("times").get<std::vector<double>>();
  r.residuals.clear();
  for (const auto& v : j.at("residuals")) r.residuals.push_back(vector_from_json(v));
  r.sup_norms = j.at("sup_norms").get<std::vector<double>>();
  r.max_sup = j.at("max_sup").get<double>();
}

void to_json(json& j, const ConvergenceReport& r) {
  json orders = json::array();
  for (double o : r.orders) orders.push_back(number_or_null(o));
  j = json{{"dts", r.dts}, {"errors", r.errors}, {"orders", orders}};
}

void from_json(const json& j, ConvergenceReport& r) {
  r.dts = j.at("dts").get<std::vector<double>>();
  r.errors = j.at("errors").get<std::vector<double>>();
  r.orders.clear();
  for (const auto& o : j.at("orders")) r.orders.push_back(number_from(o));
}

void to_json(json& j, const EnsembleStats& s) {
  j = json{{"n_paths", s.n_paths},
           {"observable", s.observable},
           {"mean", s.mean},
           {"variance", s.variance},
           {"standard_error", s.standard_error},
           {"variance_standard_error", s.variance_standard_error}};
}

void from_json(const json& j, EnsembleStats& s) {
  s.n_paths = j.at("n_paths").get<std::size_t>();
  s.observable = j.at("observable").get<std::string>();
  s.mean = j.at("mean").get<double>();
  s.variance = j.at("variance").get<double>();
  s.standard_error = j.at("standard_error").get<double>();
  s.variance_standard_error = j.at("variance_standard_error").get<double>();
}

void to_json(json& j, const BracketExtreme& b) {
  j = json{{"i", b.i}, {"j", b.j}, {"max_abs", b.max_abs}};
}

void from_json(const json& j, BracketExtreme& b) {
  b.i = j.at("i").get<std::size_t>();
  b.j = j.at("j").get<std::size_t>();
  b.max_abs = j.at("max_abs").get<double>();
}

void to_json(json& j, const IntegrabilityReport& r) {
  j = json{{"max_pair_bracket", r.max_pair_bracket},
           {"max_reeb_bracket", r.max_reeb_bracket},
           {"min_singular_value", r.min_singular_value},
           {"involution_pass", r.involution_pass},
           {"independence_pass", r.independence_pass},
           {"pass", r.pass},
           {"pairs", r.pairs},
           {"samples", r.samples},
           {"tolerance", r.tolerance}};
}

void from_json(const json& j, IntegrabilityReport& r) {
  r.max_pair_bracket = j.at("max_pair_bracket").get<double>();
  r.max_reeb_bracket = j.at("max_reeb_bracket").get<double>();
  r.min_singular_value = j.at("min_singular_value").get<double>();
  r.involution_pass = j.at("involution_pass").get<bool>();
  r.independence_pass = j.at("independence_pass").get<bool>();
  r.pass = j.at("pass").get<bool>();
  r.pairs = j.at("pairs").get<std::vector<BracketExtreme>>();
  r.samples = j.at("samples").get<std::size_t>();
  r.tolerance = j.at("tolerance").get<double>();
}

}  // namespace contactflow
