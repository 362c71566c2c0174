#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gbench/problem.hpp"

namespace gbench {

enum class Family { SP, EC, PP, SYNTH };

Family parse_family(std::string_view name);
std::string_view to_string(Family family);

/// Deterministic catalog of named instances for one family. Recognized
/// params (all optional):
///   SYNTH: sphere_dimensions, ripple_dimensions, reference_dimension
///   SP:    zigzag_segments
///   EC:    segments, grid, spectral_order
///   PP:    (none)
std::vector<Problem> make_family(Family family, const nlohmann::json& params = nlohmann::json::object());

/// Every problem in the default catalogs.
std::vector<Problem> default_catalog();

/// Looks up a default-catalog problem by id; throws Error(UnknownProblem).
Problem find_problem(std::string_view id);

nlohmann::json catalog_json(const std::vector<Problem>& problems);

}  // namespace gbench
