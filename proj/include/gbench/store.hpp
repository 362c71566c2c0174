#pragma once

// On-disk result store:
//   plan.json                      resolved plan
//   refs/<problem>.json            reference estimation record
//   runs/<problem>/<method>.jsonl  one run per line, appended per batch
//   cells/<problem>/<method>.json  cell status once a cell is finished
//   timings/<problem>.json         bare evaluation time
// Only raw fitness is stored; every G value is derived on read.

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "gbench/harness.hpp"
#include "gbench/metric.hpp"

namespace gbench {

struct ReferenceRecord {
  std::string problem;
  std::size_t dimension = 0;
  std::uint64_t budget = 0;
  std::optional<double> known_best;

  double f_plus = 0.0;
  std::size_t f_plus_trials = 0;
  bool f_plus_degenerate = false;
  bool f_plus_converged = false;
  double f_plus_range = 0.0;
  double f_plus_best = 0.0;  // lowest uniform sample

  std::array<double, 3> f_circ{};
  std::size_t f_circ_runs = 0;
  bool f_circ_converged = false;
  double f_circ_range = 0.0;
  double f_circ_best = 0.0;  // lowest reference run best

  // Protocol settings in force when the record was made.
  std::size_t batch_size = 0;
  std::size_t window = 0;
  double eps = 0.0;
  std::size_t min_runs = 0;
  std::size_t min_trials = 0;
};

struct BatchRecord {
  std::size_t runs = 0;
  double median_g = 0.0;
  double range = 0.0;  // of running medians over the last window runs
};

enum class CellStatus { Converged, MaxRuns, Failed };
std::string_view to_string(CellStatus s) noexcept;

struct CellRecord {
  std::string problem;
  std::string method;
  CellStatus status = CellStatus::Converged;
  std::size_t runs = 0;
  double median_g = 0.0;
  double range = 0.0;
  std::string reason;
  std::vector<BatchRecord> history;
  std::size_t batch_size = 0;
  std::size_t window = 0;
  double eps = 0.0;
  std::size_t min_runs = 0;
};

struct TimingRecord {
  std::string problem;
  double eval_seconds = 0.0;
  std::size_t samples = 0;
  bool low_confidence = false;
};

struct FMinusEntry {
  double value = 0.0;
  std::string source;
};

nlohmann::json to_json(const ReferenceRecord& r);
ReferenceRecord reference_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CellRecord& c);
CellRecord cell_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TimingRecord& t);
TimingRecord timing_from_json(const nlohmann::json& j);

class ResultStore {
 public:
  /// Opens (and loads) the store at root; the directory is created on the
  /// first write.
  explicit ResultStore(std::filesystem::path root);

  const std::filesystem::path& root() const noexcept { return root_; }
  bool empty() const;

  std::optional<nlohmann::json> plan() const { return plan_; }
  void write_plan(const nlohmann::json& plan);

  const ReferenceRecord* reference(const std::string& problem) const;
  void write_reference(const ReferenceRecord& r);

  /// Runs of a cell in run-index order (empty if none).
  std::span<const RunTrace> runs(const std::string& problem, const std::string& method) const;
  void append_runs(const std::string& problem, const std::string& method, std::span<const RunTrace> runs);
  /// Keeps only the first n runs of a cell.
  void truncate_runs(const std::string& problem, const std::string& method, std::size_t n);

  const CellRecord* cell(const std::string& problem, const std::string& method) const;
  void write_cell(const CellRecord& c);

  const TimingRecord* timing(const std::string& problem) const;
  void write_timing(const TimingRecord& t);

  /// Problems with a reference record, sorted.
  std::vector<std::string> problems() const;
  /// Problems with stored runs or cell records, sorted.
  std::vector<std::string> problems_with_runs() const;
  /// Methods with stored runs or a cell record for a problem, sorted.
  std::vector<std::string> methods(const std::string& problem) const;

  /// Best value seen for a problem: known optimum, reference samples and
  /// every stored non-failed run. Throws Error(MissingReferences).
  FMinusEntry f_minus(const std::string& problem) const;
  /// Map for a stage under the current best value. Throws
  /// Error(MissingReferences) or Error(DegenerateReferences).
  GMap gmap(const std::string& problem, Stage stage = Stage::Full) const;

 private:
  void load();
  std::filesystem::path runs_path(const std::string& problem, const std::string& method) const;

  std::filesystem::path root_;
  std::optional<nlohmann::json> plan_;
  std::map<std::string, ReferenceRecord> refs_;
  std::map<std::pair<std::string, std::string>, std::vector<RunTrace>> runs_;
  std::map<std::pair<std::string, std::string>, CellRecord> cells_;
  std::map<std::string, TimingRecord> timings_;
};

/// Writes through a temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

}  // namespace gbench
