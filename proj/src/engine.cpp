#include "gbench/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <regex>
#include <set>

#include <fmt/core.h>

#include "gbench/error.hpp"
#include "gbench/parallel.hpp"
#include "gbench/problems/catalog.hpp"
#include "gbench/rng.hpp"
#include "gbench/stats.hpp"

namespace gbench {

using nlohmann::json;

namespace {

constexpr double kTimerFloor = 1e-3;  // seconds; shorter totals are not trusted

std::string_view to_string(Scope s) { return s == Scope::Local ? "local" : "global"; }
std::string_view to_string(Kind k) { return k == Kind::Deterministic ? "deterministic" : "stochastic"; }

void invalid(const std::string& what) { throw Error(ErrorKind::InvalidPlan, what); }

}  // namespace

void BenchmarkPlan::validate() const {
  static const std::regex safe_id("[A-Za-z0-9_.+-]+");
  if (problems.empty()) invalid("plan lists no problems");
  if (methods.empty()) invalid("plan lists no methods");
  std::set<std::string> seen;
  for (const auto& p : problems) {
    if (!seen.insert(p.id).second) invalid(fmt::format("problem '{}' listed twice", p.id));
    try {
      (void)find_problem(p.id);
    } catch (const Error& e) {
      invalid(e.what());
    }
    if (p.budget == 0) invalid(fmt::format("problem '{}' needs a positive budget", p.id));
  }
  seen.clear();
  for (const auto& m : methods) {
    if (!std::regex_match(m.id, safe_id)) invalid(fmt::format("method id '{}' has unsupported characters", m.id));
    if (!seen.insert(m.id).second) invalid(fmt::format("method id '{}' is not unique", m.id));
  }
  if (probe.empty()) invalid("probe method id is empty");
  try {
    convergence.validate();
  } catch (const Error& e) {
    invalid(e.what());
  }
}

json BenchmarkPlan::to_json() const {
  json probs = json::array();
  for (const auto& p : problems) probs.push_back({{"id", p.id}, {"budget", p.budget}});
  json meths = json::array();
  for (const auto& m : methods) {
    json params = json::object();
    for (const auto& [k, v] : m.parameters) params[k] = v;
    json entry = {{"id", m.id}, {"parameters", params}, {"scope", to_string(m.scope)}, {"kind", to_string(m.kind)}};
    if (m.is_external()) entry["command"] = m.command;
    meths.push_back(std::move(entry));
  }
  const auto& c = convergence;
  return {
      {"problems", std::move(probs)},
      {"methods", std::move(meths)},
      {"convergence",
       {{"batch_size", c.batch_size},
        {"window", c.window},
        {"eps", c.eps},
        {"min_runs", c.min_runs},
        {"max_runs", c.max_runs},
        {"min_trials", c.min_trials},
        {"max_trials", c.max_trials}}},
      {"seed", master_seed},
      {"probe", probe},
      {"output", output.string()},
  };
}

BenchmarkPlan BenchmarkPlan::from_json(const json& j) {
  try {
    BenchmarkPlan plan;
    for (const auto& p : j.at("problems")) plan.problems.push_back({p.at("id"), p.at("budget")});
    for (const auto& m : j.at("methods")) {
      const auto id = m.at("id").get<std::string>();
      if (m.contains("command")) {
        plan.methods.push_back(make_external(id, m.at("command").get<std::string>(),
                                             m.at("scope") == "local" ? Scope::Local : Scope::Global,
                                             m.at("kind") == "deterministic" ? Kind::Deterministic : Kind::Stochastic));
      } else {
        plan.methods.push_back(make_optimizer(id, m.at("parameters").get<std::map<std::string, double>>()));
      }
    }
    const auto& c = j.at("convergence");
    plan.convergence.batch_size = c.at("batch_size");
    plan.convergence.window = c.at("window");
    plan.convergence.eps = c.at("eps");
    plan.convergence.min_runs = c.at("min_runs");
    plan.convergence.max_runs = c.at("max_runs");
    plan.convergence.min_trials = c.at("min_trials");
    plan.convergence.max_trials = c.at("max_trials");
    plan.master_seed = j.at("seed");
    plan.probe = j.at("probe");
    plan.output = j.at("output").get<std::string>();
    return plan;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidPlan, e.what());
  }
}

double g_of_record(const RunTrace& record, Stage stage, const ResultStore& store) {
  return store.gmap(record.problem_id)(record.at(stage));
}

TimingRecord time_evaluations(const Problem& problem, std::uint64_t seed) {
  constexpr std::size_t kMinSamples = 50;
  constexpr std::size_t kMaxSamples = 20000;
  constexpr double kTarget = 0.05;  // seconds
  auto samples = sample_uniform(problem, kMinSamples, seed);
  TimingRecord t;
  t.problem = problem.id();
  Stopwatch clock;
  volatile double sink = 0.0;
  std::size_t n = 0;
  while (n < kMinSamples || (clock.seconds() < kTarget && n < kMaxSamples)) {
    sink = sink + problem.evaluate(samples[n % samples.size()].point);
    ++n;
  }
  const double total = clock.seconds();
  t.samples = n;
  t.eval_seconds = total / static_cast<double>(n);
  t.low_confidence = total < kTimerFloor;
  return t;
}

MethodTiming measure_timing(const TimingRecord& evaluation, std::span<const RunTrace> runs) {
  MethodTiming m;
  m.eval_seconds = evaluation.eval_seconds;
  m.low_confidence = evaluation.low_confidence;
  double sum = 0.0;
  for (const auto& r : runs) {
    if (r.failed || r.evaluations == 0) continue;
    sum += std::max(0.0, r.wall_total / static_cast<double>(r.evaluations) - evaluation.eval_seconds);
    if (r.wall_total < kTimerFloor) m.low_confidence = true;
    ++m.runs;
  }
  if (m.runs < 3) {
    throw Error(ErrorKind::InvalidInput, fmt::format("timing needs at least 3 runs, got {}", m.runs));
  }
  m.overhead_per_eval = sum / static_cast<double>(m.runs);
  return m;
}

namespace {

class Runner {
 public:
  Runner(const BenchmarkPlan& plan, ResultStore& store, const ExecuteOptions& options)
      : plan_(plan), store_(store), opt_(options), cfg_(plan.convergence) {}

  ExecuteSummary run() {
    ensure_reference_timing();
    for (const auto& entry : plan_.problems) {
      const Problem problem = find_problem(entry.id);
      ensure_references(problem, entry.budget);
      for (const auto& method : plan_.methods) run_cell(problem, entry.budget, method);
    }
    return summary_;
  }

 private:
  void log(const std::string& line) const {
    if (opt_.log) opt_.log(line);
  }

  void ensure_reference_timing() {
    if (store_.timing(kReferenceProblem) == nullptr) {
      const Problem ref = find_problem(kReferenceProblem);
      store_.write_timing(time_evaluations(ref, derive_seed(ref.id(), "timing", 0, plan_.master_seed)));
    }
  }

  void ensure_references(const Problem& problem, std::uint64_t budget) {
    const auto& id = problem.id();
    if (store_.timing(id) == nullptr) {
      store_.write_timing(time_evaluations(problem, derive_seed(id, "timing", 0, plan_.master_seed)));
    }
    if (store_.reference(id) != nullptr) return;

    log(fmt::format("{}: estimating references", id));
    const auto fp = estimate_f_plus(problem, cfg_, derive_seed(id, "fplus", 0, plan_.master_seed));
    const auto fc = estimate_f_circ(problem, budget, cfg_, derive_seed(id, "fcirc", 0, plan_.master_seed), opt_.jobs);

    ReferenceRecord r;
    r.problem = id;
    r.dimension = problem.dimension();
    r.budget = budget;
    r.known_best = problem.known_best();
    r.f_plus = fp.f_plus;
    r.f_plus_trials = fp.trials;
    r.f_plus_degenerate = fp.degenerate;
    r.f_plus_converged = fp.converged;
    r.f_plus_range = fp.final_range;
    r.f_plus_best = fp.best_sample;
    r.f_circ = fc.f_circ;
    r.f_circ_runs = fc.runs;
    r.f_circ_converged = fc.converged;
    r.f_circ_range = fc.final_range;
    r.f_circ_best = std::numeric_limits<double>::infinity();
    for (const auto& t : fc.traces) r.f_circ_best = std::min(r.f_circ_best, t.best());
    r.batch_size = cfg_.batch_size;
    r.window = cfg_.window;
    r.eps = cfg_.eps;
    r.min_runs = cfg_.min_runs;
    r.min_trials = cfg_.min_trials;
    store_.write_reference(r);
    log(fmt::format("{}: f+ = {} ({} trials), f° = {} ({} runs{})", id, r.f_plus, r.f_plus_trials, r.f_circ[2],
                    r.f_circ_runs, r.f_circ_converged ? "" : ", not converged"));
  }

  // Best value for the problem from the references and the cells before this
  // one in plan order, which is what an uninterrupted execution has seen.
  double base_f_minus(const std::string& problem, const std::string& method) const {
    const auto* r = store_.reference(problem);
    double best = std::min(r->f_plus_best, r->f_circ_best);
    if (r->known_best) best = std::min(best, *r->known_best);
    for (const auto& m : plan_.methods) {
      if (m.id == method) break;
      for (const auto& t : store_.runs(problem, m.id)) {
        if (!t.failed) best = std::min(best, t.best());
      }
    }
    return best;
  }

  void finish(CellRecord cell) {
    ++summary_.cells;
    switch (cell.status) {
      case CellStatus::Converged: ++summary_.converged; break;
      case CellStatus::MaxRuns: ++summary_.max_runs; break;
      case CellStatus::Failed:
        ++summary_.failed;
        summary_.failures.push_back(fmt::format("{} / {}: {}", cell.problem, cell.method, cell.reason));
        break;
    }
    if (opt_.progress) {
      opt_.progress({cell.problem, cell.method, cell.runs, cell.median_g, cell.range, true, cell.status});
    }
    store_.write_cell(cell);
  }

  void run_cell(const Problem& problem, std::uint64_t budget, const OptimizerSpec& method) {
    const auto& pid = problem.id();
    if (const auto* done = store_.cell(pid, method.id)) {
      ++summary_.cells;
      if (done->status == CellStatus::Failed) {
        ++summary_.failed;
        summary_.failures.push_back(fmt::format("{} / {}: {}", pid, method.id, done->reason));
      } else {
        ++(done->status == CellStatus::Converged ? summary_.converged : summary_.max_runs);
      }
      return;
    }

    CellRecord cell;
    cell.problem = pid;
    cell.method = method.id;
    cell.batch_size = cfg_.batch_size;
    cell.window = cfg_.window;
    cell.eps = cfg_.eps;
    cell.min_runs = cfg_.min_runs;

    if (const auto need = minimum_budget(method, problem); budget < need) {
      cell.status = CellStatus::Failed;
      cell.reason = fmt::format("budget {} is below the method minimum {}", budget, need);
      finish(std::move(cell));
      return;
    }

    // Drop a torn trailing batch so batch boundaries match a clean run.
    const std::size_t stored = store_.runs(pid, method.id).size();
    const std::size_t kept = std::min(stored / cfg_.batch_size * cfg_.batch_size, cfg_.max_runs);
    if (kept != stored) store_.truncate_runs(pid, method.id, kept);

    const auto* ref = store_.reference(pid);
    const double base = base_f_minus(pid, method.id);
    double f_minus = base;
    MedianTracker tracker;
    std::vector<double> bests;

    // Replays convergence at each stored batch boundary, then extends.
    auto check_batch = [&](std::span<const RunTrace> batch) -> bool {
      for (const auto& t : batch) {
        if (t.failed) {
          cell.status = CellStatus::Failed;
          cell.reason = fmt::format("run seed {}: {}", t.seed, t.failure);
          return true;
        }
        f_minus = std::min(f_minus, t.best());
        bests.push_back(t.best());
      }
      const GMap map(ReferencePoints{f_minus, ref->f_circ[2], ref->f_plus});
      tracker.clear();
      for (double b : bests) tracker.push(map(b));
      cell.runs = bests.size();
      cell.median_g = tracker.median();
      cell.range = tracker.range(cfg_.window);
      cell.history.push_back({cell.runs, cell.median_g, cell.range});
      if (opt_.progress) {
        opt_.progress({pid, method.id, cell.runs, cell.median_g, cell.range, false, CellStatus::Converged});
      }
      if (converged(tracker, cfg_)) {
        cell.status = CellStatus::Converged;
        return true;
      }
      if (cell.runs >= cfg_.max_runs) {
        cell.status = CellStatus::MaxRuns;
        return true;
      }
      return false;
    };

    try {
      const auto existing = store_.runs(pid, method.id);
      for (std::size_t at = 0; at < existing.size(); at += cfg_.batch_size) {
        if (check_batch(existing.subspan(at, std::min(cfg_.batch_size, existing.size() - at)))) {
          if (at + cfg_.batch_size < existing.size()) store_.truncate_runs(pid, method.id, at + cfg_.batch_size);
          finish(std::move(cell));
          return;
        }
      }
      for (;;) {
        const std::size_t first = bests.size();
        const std::size_t n = std::min(cfg_.batch_size, cfg_.max_runs - first);
        std::vector<RunTrace> batch(n);
        parallel_for(n, opt_.jobs, [&](std::size_t i) {
          const auto seed = derive_seed(pid, "method:" + method.id, first + i, plan_.master_seed);
          try {
            batch[i] = optimize(method, problem, budget, seed);
          } catch (const std::exception& e) {
            RunTrace t;
            t.problem_id = pid;
            t.method_id = method.id;
            t.seed = seed;
            t.budget = budget;
            t.stage_best.fill(std::numeric_limits<double>::infinity());
            t.failed = true;
            t.failure = e.what();
            batch[i] = std::move(t);
          }
        });
        store_.append_runs(pid, method.id, batch);
        summary_.new_runs += n;
        if (check_batch(batch)) break;
      }
    } catch (const Error& e) {
      cell.status = CellStatus::Failed;
      cell.reason = e.what();
    }
    finish(std::move(cell));
  }

  const BenchmarkPlan& plan_;
  ResultStore& store_;
  const ExecuteOptions& opt_;
  const ConvergenceConfig& cfg_;
  ExecuteSummary summary_;
};

}  // namespace

ExecuteSummary execute(const BenchmarkPlan& plan, ResultStore& store, const ExecuteOptions& options) {
  plan.validate();
  const json doc = plan.to_json();
  if (const auto existing = store.plan()) {
    if (!options.resume) {
      throw Error(ErrorKind::InvalidInput,
                  fmt::format("{} already holds results; resume or choose another output", store.root().string()));
    }
    if (*existing != doc) {
      throw Error(ErrorKind::InvalidPlan, fmt::format("plan differs from the one stored in {}", store.root().string()));
    }
  } else {
    store.write_plan(doc);
  }
  return Runner(plan, store, options).run();
}

}  // namespace gbench
