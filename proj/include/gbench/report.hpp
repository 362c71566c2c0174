#pragma once

#include <filesystem>
#include <vector>

#include "gbench/analysis.hpp"

namespace gbench {

/// Files written under `dir` whose content depends only on stored results.
/// complexity.csv / complexity.json hold wall-clock measurements and are
/// written separately.
std::vector<std::filesystem::path> write_report(const Report& report, const std::filesystem::path& dir);

/// Names of the report files that carry timing measurements.
bool is_timing_file(const std::filesystem::path& file);

}  // namespace gbench
