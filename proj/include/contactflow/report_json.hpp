#pragma once

#include <json.hpp>

#include "contactflow/bracket.hpp"
#include "contactflow/verification.hpp"

namespace contactflow {

// Field names are part of the CLI output format; see README.

void to_json(nlohmann::json& j, const ContactDefectReport& r);
void from_json(const nlohmann::json& j, ContactDefectReport& r);

void to_json(nlohmann::json& j, const ConvergenceReport& r);
void from_json(const nlohmann::json& j, ConvergenceReport& r);

void to_json(nlohmann::json& j, const EnsembleStats& s);
void from_json(const nlohmann::json& j, EnsembleStats& s);

void to_json(nlohmann::json& j, const BracketExtreme& b);
void from_json(const nlohmann::json& j, BracketExtreme& b);

void to_json(nlohmann::json& j, const IntegrabilityReport& r);
void from_json(const nlohmann::json& j, IntegrabilityReport& r);

}  // namespace contactflow
