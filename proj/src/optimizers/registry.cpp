#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "gbench/error.hpp"
#include "gbench/optimizers.hpp"

namespace gbench {

namespace {

struct ParamRule {
  double fallback;
  bool integer;
  double min;
};

struct MethodSchema {
  Scope scope;
  Kind kind;
  std::map<std::string, ParamRule> params;
};

const std::map<std::string, MethodSchema>& schemas() {
  static const std::map<std::string, MethodSchema> table = {
      {"RS", {Scope::Global, Kind::Stochastic, {{"batch_size", {0, true, 0}}}}},
      {"NM",
       {Scope::Local, Kind::Deterministic, {{"step_init", {0.4, false, 1e-12}}, {"collapse_tol", {1e-12, false, 0}}}}},
      {"MSGD",
       {Scope::Local,
        Kind::Deterministic,
        {{"divisions", {10, true, 1}}, {"base", {4, true, 2}}, {"scale_max", {15, true, 0}}}}},
      {"PSO",
       {Scope::Global,
        Kind::Stochastic,
        {{"swarm_size", {0, true, 0}},
         {"inertia", {0.72, false, 0}},
         {"cognitive", {1.0, false, 0}},
         {"social", {1.0, false, 0}},
         {"velocity_clamp", {0.5, false, 1e-12}}}}},
      {"LSHADE",
       {Scope::Global,
        Kind::Stochastic,
        {{"pop_init", {0, true, 0}},
         {"pop_min", {4, true, 4}},
         {"archive_rate", {2.6, false, 0}},
         {"memory_size", {6, true, 1}},
         {"p_best", {0.11, false, 1e-12}}}}},
  };
  return table;
}

std::size_t count(const OptimizerSpec& m, const std::string& key) {
  return static_cast<std::size_t>(m.parameters.at(key));
}

}  // namespace

std::vector<std::string> builtin_methods() { return {"RS", "NM", "MSGD", "PSO", "LSHADE"}; }

OptimizerSpec make_optimizer(const std::string& id, const std::map<std::string, double>& overrides) {
  const auto it = schemas().find(id);
  if (it == schemas().end()) {
    throw Error(ErrorKind::UnknownMethod, fmt::format("no built-in method '{}'", id));
  }
  const auto& schema = it->second;
  OptimizerSpec spec;
  spec.id = id;
  spec.scope = schema.scope;
  spec.kind = schema.kind;
  for (const auto& [name, rule] : schema.params) spec.parameters[name] = rule.fallback;
  for (const auto& [name, value] : overrides) {
    const auto rule = schema.params.find(name);
    if (rule == schema.params.end()) {
      throw Error(ErrorKind::InvalidInput, fmt::format("method '{}' has no parameter '{}'", id, name));
    }
    if (!std::isfinite(value) || value < rule->second.min ||
        (rule->second.integer && value != std::floor(value))) {
      throw Error(ErrorKind::InvalidInput, fmt::format("bad value {} for {}.{}", value, id, name));
    }
    spec.parameters[name] = value;
  }
  return spec;
}

OptimizerSpec make_external(const std::string& id, const std::string& command, Scope scope, Kind kind) {
  if (id.empty() || command.empty()) {
    throw Error(ErrorKind::InvalidInput, "external method needs an id and a command");
  }
  OptimizerSpec spec;
  spec.id = id;
  spec.scope = scope;
  spec.kind = kind;
  spec.command = command;
  return spec;
}

std::uint64_t minimum_budget(const OptimizerSpec& method, const Problem& problem) {
  const std::size_t d = problem.dimension();
  if (method.is_external()) return 1;
  if (method.id == "RS") {
    const std::size_t batch = count(method, "batch_size");
    return batch == 0 ? d : batch;
  }
  if (method.id == "NM") return d + 1;
  if (method.id == "MSGD") return 1;
  if (method.id == "PSO") {
    ParticleSwarmParams p;
    p.swarm_size = count(method, "swarm_size");
    return p.resolved_swarm(d);
  }
  if (method.id == "LSHADE") {
    LshadeParams p;
    p.pop_init = count(method, "pop_init");
    return p.resolved_pop_init(d);
  }
  throw Error(ErrorKind::UnknownMethod, fmt::format("no built-in method '{}'", method.id));
}

RunTrace optimize(const OptimizerSpec& method, const Problem& problem, std::uint64_t budget, std::uint64_t seed) {
  if (budget == 0) {
    throw Error(ErrorKind::InvalidInput, "budget must be positive");
  }
  if (method.is_external()) {
    return external_run(method.command, problem, budget, seed, method.id);
  }

  Stopwatch clock;
  Objective obj(problem, budget);
  Rng rng(seed);
  const auto& p = method.parameters;
  try {
    if (method.id == "RS") {
      random_search(obj, rng, count(method, "batch_size"));
    } else if (method.id == "NM") {
      nelder_mead(obj, rng, {p.at("step_init"), p.at("collapse_tol")});
    } else if (method.id == "MSGD") {
      grid_descent(obj, rng, {count(method, "divisions"), count(method, "base"), count(method, "scale_max")});
    } else if (method.id == "PSO") {
      particle_swarm(obj, rng,
                     {count(method, "swarm_size"), p.at("inertia"), p.at("cognitive"), p.at("social"),
                      p.at("velocity_clamp")});
    } else if (method.id == "LSHADE") {
      lshade(obj, rng,
             {count(method, "pop_init"), count(method, "pop_min"), p.at("archive_rate"), count(method, "memory_size"),
              p.at("p_best")});
    } else {
      throw Error(ErrorKind::UnknownMethod, fmt::format("no built-in method '{}'", method.id));
    }
  } catch (const BudgetExhausted&) {
    obj.mark_truncated();
  }
  return obj.trace(method.id, seed, clock.seconds());
}

}  // namespace gbench
