#pragma once

#include "json.hpp"

#include "metazeta/zeta.hpp"

namespace metazeta {

void to_json(nlohmann::json& j, const EvalConfig& cfg);
void from_json(const nlohmann::json& j, EvalConfig& cfg);

// Shortest round-trip text for a double ("%.17g" semantics, bit-exact reload).
std::string format_double(double x);

}  // namespace metazeta
