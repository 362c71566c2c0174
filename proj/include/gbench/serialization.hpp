#pragma once

// JSON forms of persisted records. Finite reals round-trip exactly through
// shortest decimal; infinities and NaN are written as "inf", "-inf", "nan".

#include <json.hpp>

#include "gbench/harness.hpp"

namespace gbench {

nlohmann::json real_to_json(double v);
/// Accepts a number or one of the three non-finite spellings.
double real_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RunTrace& t);
RunTrace run_from_json(const nlohmann::json& j);

}  // namespace gbench
