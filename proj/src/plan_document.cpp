#include "gbench/plan_document.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <fmt/core.h>
#include <yaml-cpp/yaml.h>

#include "gbench/problems/catalog.hpp"
#include "gbench/store.hpp"

namespace gbench {

namespace fs = std::filesystem;

PlanError::PlanError(std::string source, int line, int column, const std::string& message)
    : Error(ErrorKind::InvalidPlan, fmt::format("{}:{}:{}: {}", source, line, column, message)),
      line_(line),
      column_(column) {}

namespace {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& at, const std::string& message) const {
    const auto mark = at.Mark();
    throw PlanError(source_, mark.line + 1, mark.column + 1, message);
  }

  void expect_keys(const YAML::Node& map, const std::string& what, std::initializer_list<const char*> allowed) const {
    if (!map.IsMap()) fail(map, fmt::format("{} must be a mapping", what));
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (keys.count(key) == 0) {
        fail(kv.first, fmt::format("unknown key '{}' in {}", key, what));
      }
    }
  }

  template <typename T>
  T scalar(const YAML::Node& node, const std::string& what) const {
    if (!node.IsScalar()) fail(node, fmt::format("{} must be a scalar", what));
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      fail(node, fmt::format("{} has an invalid value '{}'", what, node.Scalar()));
    }
  }

  std::uint64_t count(const YAML::Node& node, const std::string& what) const {
    const auto text = scalar<std::string>(node, what);
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
      fail(node, fmt::format("{} must be a non-negative integer", what));
    }
    return scalar<std::uint64_t>(node, what);
  }

 private:
  std::string source_;
};

}  // namespace

BenchmarkPlan parse_plan(const std::string& text, const std::string& source, const fs::path& output_root) {
  Reader rd(source);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw PlanError(source, e.mark.line + 1, e.mark.column + 1, e.msg);
  }
  if (!root.IsMap()) throw PlanError(source, 1, 1, "plan must be a mapping");
  rd.expect_keys(root, "plan", {"seed", "output", "probe", "budget", "convergence", "problems", "methods"});

  BenchmarkPlan plan;
  if (root["seed"]) plan.master_seed = rd.count(root["seed"], "seed");
  if (root["probe"]) plan.probe = rd.scalar<std::string>(root["probe"], "probe");

  if (!root["output"]) throw PlanError(source, 1, 1, "missing key 'output'");
  fs::path out = rd.scalar<std::string>(root["output"], "output");
  plan.output = out.is_absolute() ? out : output_root / out;

  std::optional<std::uint64_t> default_budget;
  if (root["budget"]) default_budget = rd.count(root["budget"], "budget");

  if (const auto c = root["convergence"]) {
    rd.expect_keys(c, "convergence",
                   {"batch_size", "window", "eps", "min_runs", "max_runs", "min_trials", "max_trials"});
    auto& cfg = plan.convergence;
    if (c["batch_size"]) cfg.batch_size = rd.count(c["batch_size"], "batch_size");
    if (c["window"]) cfg.window = rd.count(c["window"], "window");
    if (c["eps"]) cfg.eps = rd.scalar<double>(c["eps"], "eps");
    if (c["min_runs"]) cfg.min_runs = rd.count(c["min_runs"], "min_runs");
    if (c["max_runs"]) cfg.max_runs = rd.count(c["max_runs"], "max_runs");
    if (c["min_trials"]) cfg.min_trials = rd.count(c["min_trials"], "min_trials");
    if (c["max_trials"]) cfg.max_trials = rd.count(c["max_trials"], "max_trials");
    try {
      cfg.validate();
    } catch (const Error& e) {
      rd.fail(c, e.what());
    }
  }

  const auto problems = root["problems"];
  if (!problems) throw PlanError(source, 1, 1, "missing key 'problems'");
  if (!problems.IsSequence() || problems.size() == 0) rd.fail(problems, "problems must be a non-empty list");
  std::set<std::string> seen;
  for (const auto& p : problems) {
    ProblemEntry entry;
    if (p.IsScalar()) {
      entry.id = p.as<std::string>();
      if (!default_budget) rd.fail(p, fmt::format("problem '{}' has no budget and no default budget is set", entry.id));
      entry.budget = *default_budget;
    } else {
      rd.expect_keys(p, "problem entry", {"id", "budget"});
      if (!p["id"]) rd.fail(p, "problem entry needs an id");
      entry.id = rd.scalar<std::string>(p["id"], "id");
      if (p["budget"]) {
        entry.budget = rd.count(p["budget"], "budget");
      } else if (default_budget) {
        entry.budget = *default_budget;
      } else {
        rd.fail(p, fmt::format("problem '{}' has no budget", entry.id));
      }
    }
    try {
      (void)find_problem(entry.id);
    } catch (const Error&) {
      rd.fail(p, fmt::format("unknown problem '{}'", entry.id));
    }
    if (entry.budget == 0) rd.fail(p, "budget must be positive");
    if (!seen.insert(entry.id).second) rd.fail(p, fmt::format("problem '{}' listed twice", entry.id));
    plan.problems.push_back(entry);
  }

  const auto methods = root["methods"];
  if (!methods) throw PlanError(source, 1, 1, "missing key 'methods'");
  if (!methods.IsSequence() || methods.size() == 0) rd.fail(methods, "methods must be a non-empty list");
  seen.clear();
  for (const auto& m : methods) {
    OptimizerSpec spec;
    try {
      if (m.IsScalar()) {
        spec = make_optimizer(m.as<std::string>());
      } else {
        rd.expect_keys(m, "method entry", {"id", "params", "command", "scope", "kind"});
        if (!m["id"]) rd.fail(m, "method entry needs an id");
        const auto id = rd.scalar<std::string>(m["id"], "id");
        if (m["command"]) {
          if (m["params"]) rd.fail(m, "external methods take no params");
          Scope scope = Scope::Global;
          Kind kind = Kind::Stochastic;
          if (m["scope"]) {
            const auto s = rd.scalar<std::string>(m["scope"], "scope");
            if (s != "local" && s != "global") rd.fail(m["scope"], "scope must be local or global");
            scope = s == "local" ? Scope::Local : Scope::Global;
          }
          if (m["kind"]) {
            const auto k = rd.scalar<std::string>(m["kind"], "kind");
            if (k != "deterministic" && k != "stochastic") rd.fail(m["kind"], "kind must be deterministic or stochastic");
            kind = k == "deterministic" ? Kind::Deterministic : Kind::Stochastic;
          }
          spec = make_external(id, rd.scalar<std::string>(m["command"], "command"), scope, kind);
        } else {
          if (m["scope"] || m["kind"]) rd.fail(m, "scope and kind are fixed for built-in methods");
          std::map<std::string, double> overrides;
          if (const auto params = m["params"]) {
            if (!params.IsMap()) rd.fail(params, "params must be a mapping");
            for (const auto& kv : params) {
              overrides[kv.first.as<std::string>()] = rd.scalar<double>(kv.second, kv.first.as<std::string>());
            }
          }
          spec = make_optimizer(id, overrides);
        }
      }
    } catch (const PlanError&) {
      throw;
    } catch (const Error& e) {
      rd.fail(m, e.what());
    }
    if (!seen.insert(spec.id).second) rd.fail(m, fmt::format("method id '{}' is not unique", spec.id));
    plan.methods.push_back(std::move(spec));
  }

  try {
    plan.validate();
  } catch (const Error& e) {
    throw PlanError(source, 1, 1, e.what());
  }
  return plan;
}

BenchmarkPlan load_plan(const fs::path& path, const fs::path& output_root) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error& e) {
    throw PlanError(path.string(), 0, 0, e.what());
  }
  return parse_plan(text, path.string(), output_root);
}

}  // namespace gbench
