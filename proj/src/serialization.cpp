#include "gbench/serialization.hpp"

#include <cmath>
#include <limits>

#include "gbench/error.hpp"

namespace gbench {

using nlohmann::json;

json real_to_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double real_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw Error(ErrorKind::Io, "expected a real, got " + j.dump());
}

json to_json(const RunTrace& t) {
  json checkpoints = json::array();
  for (const auto& c : t.checkpoints) checkpoints.push_back(json::array({c.evaluation, real_to_json(c.fitness)}));
  json j = {
      {"problem", t.problem_id},
      {"method", t.method_id},
      {"seed", t.seed},
      {"budget", t.budget},
      {"evaluations", t.evaluations},
      {"stage_best", json::array({real_to_json(t.stage_best[0]), real_to_json(t.stage_best[1]),
                                  real_to_json(t.stage_best[2])})},
      {"checkpoints", std::move(checkpoints)},
      {"wall_total", real_to_json(t.wall_total)},
      {"wall_eval", real_to_json(t.wall_eval)},
      {"truncated", t.truncated},
      {"failed", t.failed},
  };
  if (t.failed) j["failure"] = t.failure;
  return j;
}

RunTrace run_from_json(const json& j) {
  try {
    RunTrace t;
    t.problem_id = j.at("problem").get<std::string>();
    t.method_id = j.at("method").get<std::string>();
    t.seed = j.at("seed").get<std::uint64_t>();
    t.budget = j.at("budget").get<std::uint64_t>();
    t.evaluations = j.at("evaluations").get<std::uint64_t>();
    const auto& stages = j.at("stage_best");
    for (std::size_t i = 0; i < 3; ++i) t.stage_best[i] = real_from_json(stages.at(i));
    for (const auto& c : j.at("checkpoints")) {
      t.checkpoints.push_back({c.at(0).get<std::uint64_t>(), real_from_json(c.at(1))});
    }
    t.wall_total = real_from_json(j.at("wall_total"));
    t.wall_eval = real_from_json(j.at("wall_eval"));
    t.truncated = j.at("truncated").get<bool>();
    t.failed = j.at("failed").get<bool>();
    if (t.failed) t.failure = j.value("failure", std::string{});
    return t;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Io, std::string("malformed run record: ") + e.what());
  }
}

}  // namespace gbench
