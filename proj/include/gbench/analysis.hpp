#pragma once

// Post-hoc scores computed from a result store. Every G value is derived
// from raw fitness under the store's current references.

#include <array>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "gbench/harness.hpp"
#include "gbench/metric.hpp"
#include "gbench/store.hpp"

namespace gbench {

inline constexpr double kSolvedThreshold = 0.9;
inline constexpr std::size_t kRepeatCount = 10;

/// Median G of the stage bests over non-failed runs.
std::array<double, 3> staged_g(std::span<const RunTrace> runs, const GMap& map);

/// Stage s is scored against a map whose middle anchor is f_circ[s].
std::array<double, 3> relative_g(std::span<const RunTrace> runs, double f_minus, const std::array<double, 3>& f_circ,
                                 double f_plus);

/// Expected G over 10 repeated runs: quantiles at 0.5^(1/i), weights 1/i.
double grw(std::span<const double> g_samples);

/// (1 - G_probe) / 2 clamped to [0, 1].
double multimodality(double g_probe);

double local_weight(double g_probe);
double low_dimension_weight(std::size_t dimension);
/// Stage weights (1, 0.5, 0) and (0, 0.5, 1) over the relative stage G.
double fast_blend(const std::array<double, 3>& relative);
double exhaustive_blend(const std::array<double, 3>& relative);

/// sum(v w) / sum(w); nullopt when the weights sum to zero.
std::optional<double> weighted_mean(std::span<const double> values, std::span<const double> weights);

struct AttributeScores {
  std::optional<double> local, global, fast, exhaustive, low_d, high_d;
};

/// One row per method, problems solved under G and under G_RW.
struct SolvedSets {
  std::vector<std::string> methods;
  std::map<std::string, std::set<std::string>> by_g;
  std::map<std::string, std::set<std::string>> by_grw;
};

struct OverlapMatrix {
  std::vector<std::string> methods;
  /// values[a][b] = |solved(a) & solved(b)| / |solved(a)|; nullopt for an
  /// empty solved(a).
  std::vector<std::vector<std::optional<double>>> values;
  /// Rows forced to 1 by convention (the random search row).
  std::vector<bool> forced;
};

OverlapMatrix overlap_matrix(const std::vector<std::string>& methods,
                             const std::map<std::string, std::set<std::string>>& solved,
                             const std::string& random_search_id = "RS");

struct BestSet {
  std::size_t size = 0;
  std::vector<std::string> methods;
  std::size_t solved = 0;     // union of G > 0.9
  std::size_t solved_rw = 0;  // union of G_RW > 0.9
};

struct BestSets {
  std::vector<BestSet> by_g;    // best per size ranked by `solved`
  std::vector<BestSet> by_grw;  // best per size ranked by `solved_rw`
};

/// Exhaustive search over subsets of each size up to max_size; ties go to
/// the lexicographically first sorted id list.
BestSets best_sets(const SolvedSets& solved, std::size_t max_size = 5);

/// 1 - max over other methods of the shared share of solved problems;
/// nullopt when the method solved nothing.
std::optional<double> uniqueness(const std::string& method, const std::vector<std::string>& methods,
                                 const std::map<std::string, std::set<std::string>>& solved);

/// Pearson r of (M, G) pairs, only with at least 3 distinct M values.
std::optional<double> multimodality_sensitivity(std::span<const double> m, std::span<const double> g);

// ---------------------------------------------------------------------------

struct CellResult {
  std::string problem;
  std::string method;
  std::size_t dimension = 0;
  std::string status;
  std::size_t runs = 0;
  std::size_t failed_runs = 0;
  std::array<double, 3> g{};
  std::array<double, 3> relative{};
  double grw = 0.0;
  std::vector<double> g_samples;  // per-run G at 100 %
};

struct ProblemResult {
  std::string id;
  std::size_t dimension = 0;
  bool simulation = false;
  FMinusEntry f_minus;
  std::array<double, 3> f_circ{};
  double f_plus = 0.0;
  double rho_circ = 0.0;
  std::optional<double> alpha;
  std::optional<double> multimodality;
  std::size_t f_plus_trials = 0;
  std::size_t f_circ_runs = 0;
};

struct MethodProperties {
  std::optional<double> stability, exploitation, speed, uniqueness, sensitivity;
};

struct ComplexityRow {
  std::string method;
  std::optional<double> relative;  // C_m
  std::size_t problems = 0;
  bool low_confidence = false;
};

struct Report {
  std::string probe;
  std::vector<std::string> methods;
  std::vector<ProblemResult> problems;
  std::vector<CellResult> cells;
  std::map<std::string, AttributeScores> attributes;
  std::map<std::string, MethodProperties> properties;
  SolvedSets solved;
  OverlapMatrix overlap;
  BestSets sets;
  std::vector<ComplexityRow> complexity;
  std::optional<double> reference_eval_seconds;

  const CellResult* cell(const std::string& problem, const std::string& method) const;
};

struct AnalysisOptions {
  std::string probe;  // empty: taken from the stored plan, else "NM"
  std::size_t max_set_size = 5;
};

/// Throws Error(MissingReferences) naming the problem when runs exist for a
/// problem without references.
Report analyze(const ResultStore& store, const AnalysisOptions& options = {});

}  // namespace gbench
