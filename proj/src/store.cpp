#include "gbench/store.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <fmt/core.h>

#include "gbench/error.hpp"
#include "gbench/serialization.hpp"

namespace gbench {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json optional_real(const std::optional<double>& v) { return v ? real_to_json(*v) : json(nullptr); }

std::optional<double> optional_real_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return real_from_json(j);
}

json load_json(const fs::path& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Io, fmt::format("{}: {}", path.string(), e.what()));
  }
}

template <typename Fn>
auto guarded(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Io, fmt::format("malformed {} record: {}", what, e.what()));
  }
}

}  // namespace

std::string_view to_string(CellStatus s) noexcept {
  switch (s) {
    case CellStatus::Converged: return "converged";
    case CellStatus::MaxRuns: return "max_runs";
    case CellStatus::Failed: return "failed";
  }
  return "?";
}

json to_json(const ReferenceRecord& r) {
  return {
      {"problem", r.problem},
      {"dimension", r.dimension},
      {"budget", r.budget},
      {"known_best", optional_real(r.known_best)},
      {"f_plus",
       {{"value", real_to_json(r.f_plus)},
        {"trials", r.f_plus_trials},
        {"degenerate", r.f_plus_degenerate},
        {"converged", r.f_plus_converged},
        {"range", real_to_json(r.f_plus_range)},
        {"best_sample", real_to_json(r.f_plus_best)}}},
      {"f_circ",
       {{"stages", json::array({real_to_json(r.f_circ[0]), real_to_json(r.f_circ[1]), real_to_json(r.f_circ[2])})},
        {"runs", r.f_circ_runs},
        {"converged", r.f_circ_converged},
        {"range", real_to_json(r.f_circ_range)},
        {"best_run", real_to_json(r.f_circ_best)}}},
      {"protocol",
       {{"batch_size", r.batch_size},
        {"window", r.window},
        {"eps", r.eps},
        {"min_runs", r.min_runs},
        {"min_trials", r.min_trials}}},
  };
}

ReferenceRecord reference_from_json(const json& j) {
  return guarded("reference", [&] {
    ReferenceRecord r;
    r.problem = j.at("problem").get<std::string>();
    r.dimension = j.at("dimension").get<std::size_t>();
    r.budget = j.at("budget").get<std::uint64_t>();
    r.known_best = optional_real_from(j.at("known_best"));
    const auto& fp = j.at("f_plus");
    r.f_plus = real_from_json(fp.at("value"));
    r.f_plus_trials = fp.at("trials").get<std::size_t>();
    r.f_plus_degenerate = fp.at("degenerate").get<bool>();
    r.f_plus_converged = fp.at("converged").get<bool>();
    r.f_plus_range = real_from_json(fp.at("range"));
    r.f_plus_best = real_from_json(fp.at("best_sample"));
    const auto& fc = j.at("f_circ");
    for (std::size_t i = 0; i < 3; ++i) r.f_circ[i] = real_from_json(fc.at("stages").at(i));
    r.f_circ_runs = fc.at("runs").get<std::size_t>();
    r.f_circ_converged = fc.at("converged").get<bool>();
    r.f_circ_range = real_from_json(fc.at("range"));
    r.f_circ_best = real_from_json(fc.at("best_run"));
    const auto& p = j.at("protocol");
    r.batch_size = p.at("batch_size").get<std::size_t>();
    r.window = p.at("window").get<std::size_t>();
    r.eps = p.at("eps").get<double>();
    r.min_runs = p.at("min_runs").get<std::size_t>();
    r.min_trials = p.at("min_trials").get<std::size_t>();
    return r;
  });
}

json to_json(const CellRecord& c) {
  json history = json::array();
  for (const auto& b : c.history) {
    history.push_back({{"runs", b.runs}, {"median_g", real_to_json(b.median_g)}, {"range", real_to_json(b.range)}});
  }
  json j = {
      {"problem", c.problem},
      {"method", c.method},
      {"status", std::string(to_string(c.status))},
      {"runs", c.runs},
      {"median_g", real_to_json(c.median_g)},
      {"range", real_to_json(c.range)},
      {"protocol", {{"batch_size", c.batch_size}, {"window", c.window}, {"eps", c.eps}, {"min_runs", c.min_runs}}},
      {"history", std::move(history)},
  };
  if (!c.reason.empty()) j["reason"] = c.reason;
  return j;
}

CellRecord cell_from_json(const json& j) {
  return guarded("cell", [&] {
    CellRecord c;
    c.problem = j.at("problem").get<std::string>();
    c.method = j.at("method").get<std::string>();
    const auto status = j.at("status").get<std::string>();
    if (status == "converged") {
      c.status = CellStatus::Converged;
    } else if (status == "max_runs") {
      c.status = CellStatus::MaxRuns;
    } else if (status == "failed") {
      c.status = CellStatus::Failed;
    } else {
      throw Error(ErrorKind::Io, "unknown cell status " + status);
    }
    c.runs = j.at("runs").get<std::size_t>();
    c.median_g = real_from_json(j.at("median_g"));
    c.range = real_from_json(j.at("range"));
    c.reason = j.value("reason", std::string{});
    const auto& p = j.at("protocol");
    c.batch_size = p.at("batch_size").get<std::size_t>();
    c.window = p.at("window").get<std::size_t>();
    c.eps = p.at("eps").get<double>();
    c.min_runs = p.at("min_runs").get<std::size_t>();
    for (const auto& b : j.at("history")) {
      c.history.push_back(
          {b.at("runs").get<std::size_t>(), real_from_json(b.at("median_g")), real_from_json(b.at("range"))});
    }
    return c;
  });
}

json to_json(const TimingRecord& t) {
  return {{"problem", t.problem},
          {"eval_seconds", real_to_json(t.eval_seconds)},
          {"samples", t.samples},
          {"low_confidence", t.low_confidence}};
}

TimingRecord timing_from_json(const json& j) {
  return guarded("timing", [&] {
    TimingRecord t;
    t.problem = j.at("problem").get<std::string>();
    t.eval_seconds = real_from_json(j.at("eval_seconds"));
    t.samples = j.at("samples").get<std::size_t>();
    t.low_confidence = j.at("low_confidence").get<bool>();
    return t;
  });
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    out.flush();
    if (!out) throw Error(ErrorKind::Io, fmt::format("cannot write {}", tmp.string()));
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, fmt::format("cannot read {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ResultStore::ResultStore(fs::path root) : root_(std::move(root)) { load(); }

bool ResultStore::empty() const { return !plan_ && refs_.empty() && runs_.empty() && cells_.empty(); }

void ResultStore::load() {
  if (!fs::exists(root_)) return;
  if (fs::exists(root_ / "plan.json")) plan_ = load_json(root_ / "plan.json");

  auto sorted_files = [](const fs::path& dir, const std::string& ext) {
    std::vector<fs::path> out;
    if (fs::is_directory(dir)) {
      for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ext) out.push_back(e.path());
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  auto sorted_dirs = [](const fs::path& dir) {
    std::vector<fs::path> out;
    if (fs::is_directory(dir)) {
      for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_directory()) out.push_back(e.path());
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  };

  for (const auto& f : sorted_files(root_ / "refs", ".json")) {
    auto r = reference_from_json(load_json(f));
    refs_[r.problem] = std::move(r);
  }
  for (const auto& f : sorted_files(root_ / "timings", ".json")) {
    auto t = timing_from_json(load_json(f));
    timings_[t.problem] = std::move(t);
  }
  for (const auto& d : sorted_dirs(root_ / "cells")) {
    for (const auto& f : sorted_files(d, ".json")) {
      auto c = cell_from_json(load_json(f));
      cells_[{c.problem, c.method}] = std::move(c);
    }
  }
  for (const auto& d : sorted_dirs(root_ / "runs")) {
    for (const auto& f : sorted_files(d, ".jsonl")) {
      const std::string text = read_file(f);
      std::vector<RunTrace> runs;
      std::size_t pos = 0;
      bool torn = false;
      while (pos < text.size()) {
        const auto nl = text.find('\n', pos);
        if (nl == std::string::npos) {
          torn = true;  // interrupted append
          break;
        }
        const std::string_view line(text.data() + pos, nl - pos);
        pos = nl + 1;
        if (line.empty()) continue;
        try {
          runs.push_back(run_from_json(json::parse(line)));
        } catch (const json::exception&) {
          torn = true;
          break;
        }
      }
      if (runs.empty()) continue;
      const auto key = std::make_pair(runs.front().problem_id, runs.front().method_id);
      runs_[key] = std::move(runs);
      if (torn) truncate_runs(key.first, key.second, runs_[key].size());
    }
  }
}

void ResultStore::write_plan(const json& plan) {
  write_file_atomic(root_ / "plan.json", plan.dump(2) + "\n");
  plan_ = plan;
}

const ReferenceRecord* ResultStore::reference(const std::string& problem) const {
  const auto it = refs_.find(problem);
  return it == refs_.end() ? nullptr : &it->second;
}

void ResultStore::write_reference(const ReferenceRecord& r) {
  write_file_atomic(root_ / "refs" / (r.problem + ".json"), to_json(r).dump(2) + "\n");
  refs_[r.problem] = r;
}

fs::path ResultStore::runs_path(const std::string& problem, const std::string& method) const {
  return root_ / "runs" / problem / (method + ".jsonl");
}

std::span<const RunTrace> ResultStore::runs(const std::string& problem, const std::string& method) const {
  const auto it = runs_.find({problem, method});
  if (it == runs_.end()) return {};
  return it->second;
}

void ResultStore::append_runs(const std::string& problem, const std::string& method, std::span<const RunTrace> runs) {
  if (runs.empty()) return;
  const auto path = runs_path(problem, method);
  fs::create_directories(path.parent_path());
  std::string chunk;
  for (const auto& r : runs) chunk += to_json(r).dump() + "\n";
  std::ofstream out(path, std::ios::binary | std::ios::app);
  out << chunk;
  out.flush();
  if (!out) throw Error(ErrorKind::Io, fmt::format("cannot append to {}", path.string()));
  auto& cell = runs_[{problem, method}];
  cell.insert(cell.end(), runs.begin(), runs.end());
}

void ResultStore::truncate_runs(const std::string& problem, const std::string& method, std::size_t n) {
  auto& cell = runs_[{problem, method}];
  if (n < cell.size()) cell.resize(n);
  std::string content;
  for (const auto& r : cell) content += to_json(r).dump() + "\n";
  write_file_atomic(runs_path(problem, method), content);
}

const CellRecord* ResultStore::cell(const std::string& problem, const std::string& method) const {
  const auto it = cells_.find({problem, method});
  return it == cells_.end() ? nullptr : &it->second;
}

void ResultStore::write_cell(const CellRecord& c) {
  write_file_atomic(root_ / "cells" / c.problem / (c.method + ".json"), to_json(c).dump(2) + "\n");
  cells_[{c.problem, c.method}] = c;
}

const TimingRecord* ResultStore::timing(const std::string& problem) const {
  const auto it = timings_.find(problem);
  return it == timings_.end() ? nullptr : &it->second;
}

void ResultStore::write_timing(const TimingRecord& t) {
  write_file_atomic(root_ / "timings" / (t.problem + ".json"), to_json(t).dump(2) + "\n");
  timings_[t.problem] = t;
}

std::vector<std::string> ResultStore::problems() const {
  std::vector<std::string> out;
  for (const auto& [p, _] : refs_) out.push_back(p);
  return out;
}

std::vector<std::string> ResultStore::problems_with_runs() const {
  std::set<std::string> out;
  for (const auto& [key, _] : runs_) out.insert(key.first);
  for (const auto& [key, _] : cells_) out.insert(key.first);
  return {out.begin(), out.end()};
}

std::vector<std::string> ResultStore::methods(const std::string& problem) const {
  std::set<std::string> out;
  for (const auto& [key, _] : runs_) {
    if (key.first == problem) out.insert(key.second);
  }
  for (const auto& [key, _] : cells_) {
    if (key.first == problem) out.insert(key.second);
  }
  return {out.begin(), out.end()};
}

FMinusEntry ResultStore::f_minus(const std::string& problem) const {
  const auto* r = reference(problem);
  if (r == nullptr) {
    throw Error(ErrorKind::MissingReferences, fmt::format("no references for problem '{}'", problem));
  }
  FMinusEntry best{r->f_plus_best, "uniform sample"};
  if (r->f_circ_best < best.value) best = {r->f_circ_best, "reference random search"};
  if (r->known_best && *r->known_best < best.value) best = {*r->known_best, "known optimum"};
  for (const auto& [key, runs] : runs_) {
    if (key.first != problem) continue;
    for (std::size_t i = 0; i < runs.size(); ++i) {
      if (!runs[i].failed && runs[i].best() < best.value) {
        best = {runs[i].best(), fmt::format("{} run {}", key.second, i)};
      }
    }
  }
  return best;
}

GMap ResultStore::gmap(const std::string& problem, Stage stage) const {
  const auto fm = f_minus(problem);
  const auto* r = reference(problem);
  return GMap(ReferencePoints{fm.value, r->f_circ[static_cast<std::size_t>(stage)], r->f_plus});
}

}  // namespace gbench
