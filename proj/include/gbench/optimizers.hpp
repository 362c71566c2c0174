#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "gbench/harness.hpp"
#include "gbench/problem.hpp"
#include "gbench/rng.hpp"

namespace gbench {

// ---------------------------------------------------------------------------
// Built-in methods. Each consumes evaluations from the Objective until its
// budget is spent; none of them ever asks beyond it.

/// Uniform batches of `batch_size` points (0 means D).
void random_search(Objective& obj, Rng& rng, std::size_t batch_size = 0);

struct LocalSearchStats {
  std::size_t restarts = 0;
};

/// Nelder-Mead with dimension-adaptive coefficients (Gao & Han 2012):
/// reflection 1, expansion 1 + 2/n, contraction 0.75 - 1/(2n),
/// shrink 1 - 1/n. Restarts from a uniform random point when the simplex
/// diameter, measured in units of the bound range, drops below 1e-12.
struct NelderMeadParams {
  double step_init = 0.4;  // fraction of (ub - lb)
  double collapse_tol = 1e-12;
};
LocalSearchStats nelder_mead(Objective& obj, Rng& rng, const NelderMeadParams& params = {});

/// Multi-scale grid descent: coordinate probes at +-h_s with
/// h_s = (ub - lb) / (divisions * base^s), refining s on a sweep without
/// improvement and restarting once s passes scale_max.
struct GridDescentParams {
  std::size_t divisions = 10;
  std::size_t base = 4;
  std::size_t scale_max = 15;
};
LocalSearchStats grid_descent(Objective& obj, Rng& rng, const GridDescentParams& params = {});

struct ParticleSwarmParams {
  std::size_t swarm_size = 0;  // 0 means max(10, D)
  double inertia = 0.72;
  double cognitive = 1.0;
  double social = 1.0;
  double velocity_clamp = 0.5;  // fraction of (ub - lb)

  std::size_t resolved_swarm(std::size_t dimension) const;
};
void particle_swarm(Objective& obj, Rng& rng, const ParticleSwarmParams& params = {});

struct LshadeParams {
  std::size_t pop_init = 0;  // 0 means max(30, 5 D)
  std::size_t pop_min = 4;
  double archive_rate = 2.6;
  std::size_t memory_size = 6;
  double p_best = 0.11;

  std::size_t resolved_pop_init(std::size_t dimension) const;
};

struct LshadeGeneration {
  std::size_t generation = 0;
  std::size_t population = 0;
  std::size_t archive = 0;
  std::size_t archive_capacity = 0;
  std::uint64_t evaluations = 0;
};

struct LshadeStats {
  std::size_t generations = 0;
  std::size_t final_population = 0;
};

LshadeStats lshade(Objective& obj, Rng& rng, const LshadeParams& params = {},
                   const std::function<void(const LshadeGeneration&)>& on_generation = {});

/// Population size planned by linear reduction after `evaluations` of `budget`.
std::size_t lshade_population(std::size_t pop_init, std::size_t pop_min, std::uint64_t evaluations,
                              std::uint64_t budget);

// ---------------------------------------------------------------------------
// Subprocess methods speaking the ask/tell line protocol:
//   harness -> method: INIT <D> <budget> <seed> <lb...> <ub...>
//   method -> harness: ASK <x_1> ... <x_D>   answered by   TELL <fitness>
//   method -> harness: DONE
//   harness -> method: STOP   (sent right after the TELL that spends the budget)
// Any malformed line, premature exit or ASK after STOP fails the run.
RunTrace external_run(const std::string& command, const Problem& problem, std::uint64_t budget,
                      std::uint64_t seed, const std::string& method_id = "external");

// ---------------------------------------------------------------------------
// Registry.

enum class Scope { Local, Global };
enum class Kind { Deterministic, Stochastic };

struct OptimizerSpec {
  std::string id;
  std::map<std::string, double> parameters;
  Scope scope = Scope::Global;
  Kind kind = Kind::Stochastic;
  /// Non-empty for methods run through external_run.
  std::string command;

  bool is_external() const { return !command.empty(); }
};

std::vector<std::string> builtin_methods();

/// Built-in spec with Table-style defaults, overridden by `overrides`.
/// Throws Error(UnknownMethod) / Error(InvalidInput) on unknown ids or
/// parameter names.
OptimizerSpec make_optimizer(const std::string& id, const std::map<std::string, double>& overrides = {});
OptimizerSpec make_external(const std::string& id, const std::string& command, Scope scope = Scope::Global,
                            Kind kind = Kind::Stochastic);

std::uint64_t minimum_budget(const OptimizerSpec& method, const Problem& problem);

/// One run. The evaluation cap is enforced here; a built-in that asks
/// beyond it is cut off and its trace flagged truncated. Deterministic for
/// built-ins given (method, problem, budget, seed).
RunTrace optimize(const OptimizerSpec& method, const Problem& problem, std::uint64_t budget, std::uint64_t seed);

}  // namespace gbench
