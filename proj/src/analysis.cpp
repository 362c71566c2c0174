#include "gbench/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/core.h>

#include "gbench/engine.hpp"
#include "gbench/error.hpp"
#include "gbench/problems/catalog.hpp"
#include "gbench/stats.hpp"

namespace gbench {

std::array<double, 3> staged_g(std::span<const RunTrace> runs, const GMap& map) {
  std::array<double, 3> out{};
  for (auto s : kStages) {
    std::vector<double> g;
    for (const auto& r : runs) {
      if (!r.failed) g.push_back(map(r.at(s)));
    }
    if (g.empty()) throw Error(ErrorKind::InvalidInput, "no successful runs to score");
    out[static_cast<std::size_t>(s)] = stats::median(g);
  }
  return out;
}

std::array<double, 3> relative_g(std::span<const RunTrace> runs, double f_minus, const std::array<double, 3>& f_circ,
                                 double f_plus) {
  std::array<double, 3> out{};
  for (auto s : kStages) {
    const auto i = static_cast<std::size_t>(s);
    const GMap map(ReferencePoints{f_minus, f_circ[i], f_plus});
    std::vector<double> g;
    for (const auto& r : runs) {
      if (!r.failed) g.push_back(map(r.at(s)));
    }
    if (g.empty()) throw Error(ErrorKind::InvalidInput, "no successful runs to score");
    out[i] = stats::median(g);
  }
  return out;
}

double grw(std::span<const double> g_samples) {
  if (g_samples.empty()) throw Error(ErrorKind::InvalidInput, "G_RW of an empty sample");
  std::vector<double> sorted(g_samples.begin(), g_samples.end());
  std::sort(sorted.begin(), sorted.end());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 1; i <= kRepeatCount; ++i) {
    const double w = 1.0 / static_cast<double>(i);
    num += w * stats::quantile_sorted(sorted, std::pow(0.5, w));
    den += w;
  }
  return num / den;
}

double multimodality(double g_probe) { return std::clamp(0.5 * (1.0 - g_probe), 0.0, 1.0); }

double local_weight(double g_probe) { return std::clamp(g_probe, 0.0, 1.0); }

double low_dimension_weight(std::size_t dimension) {
  if (dimension <= 10) return 1.0;
  if (dimension >= 30) return 0.0;
  return 1.0 - (static_cast<double>(dimension) - 10.0) / 20.0;
}

double fast_blend(const std::array<double, 3>& relative) { return (relative[0] + 0.5 * relative[1]) / 1.5; }

double exhaustive_blend(const std::array<double, 3>& relative) { return (0.5 * relative[1] + relative[2]) / 1.5; }

std::optional<double> weighted_mean(std::span<const double> values, std::span<const double> weights) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    num += values[i] * weights[i];
    den += weights[i];
  }
  if (den <= 0.0) return std::nullopt;
  return num / den;
}

OverlapMatrix overlap_matrix(const std::vector<std::string>& methods,
                             const std::map<std::string, std::set<std::string>>& solved,
                             const std::string& random_search_id) {
  static const std::set<std::string> none;
  auto of = [&](const std::string& m) -> const std::set<std::string>& {
    const auto it = solved.find(m);
    return it == solved.end() ? none : it->second;
  };
  OverlapMatrix out;
  out.methods = methods;
  for (const auto& a : methods) {
    const auto& sa = of(a);
    std::vector<std::optional<double>> row;
    const bool forced = a == random_search_id;
    for (const auto& b : methods) {
      if (forced) {
        row.emplace_back(1.0);
      } else if (sa.empty()) {
        row.emplace_back(std::nullopt);
      } else {
        const auto& sb = of(b);
        const auto shared = std::count_if(sa.begin(), sa.end(), [&](const auto& p) { return sb.count(p) > 0; });
        row.emplace_back(static_cast<double>(shared) / static_cast<double>(sa.size()));
      }
    }
    out.values.push_back(std::move(row));
    out.forced.push_back(forced);
  }
  return out;
}

BestSets best_sets(const SolvedSets& solved, std::size_t max_size) {
  std::vector<std::string> ids = solved.methods;
  std::sort(ids.begin(), ids.end());
  auto union_size = [&](const std::map<std::string, std::set<std::string>>& table,
                        const std::vector<std::string>& set) {
    std::set<std::string> u;
    for (const auto& m : set) {
      if (const auto it = table.find(m); it != table.end()) u.insert(it->second.begin(), it->second.end());
    }
    return u.size();
  };

  BestSets out;
  const std::size_t n = ids.size();
  for (std::size_t k = 1; k <= std::min(max_size, n); ++k) {
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::optional<BestSet> best_g, best_rw;
    for (;;) {
      BestSet cand;
      cand.size = k;
      for (auto i : idx) cand.methods.push_back(ids[i]);
      cand.solved = union_size(solved.by_g, cand.methods);
      cand.solved_rw = union_size(solved.by_grw, cand.methods);
      if (!best_g || cand.solved > best_g->solved) best_g = cand;
      if (!best_rw || cand.solved_rw > best_rw->solved_rw) best_rw = cand;
      // Next combination in lexicographic order.
      std::size_t i = k;
      while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    out.by_g.push_back(*best_g);
    out.by_grw.push_back(*best_rw);
  }
  return out;
}

std::optional<double> uniqueness(const std::string& method, const std::vector<std::string>& methods,
                                 const std::map<std::string, std::set<std::string>>& solved) {
  const auto own = solved.find(method);
  if (own == solved.end() || own->second.empty()) return std::nullopt;
  double worst = 0.0;
  for (const auto& other : methods) {
    if (other == method) continue;
    const auto it = solved.find(other);
    if (it == solved.end()) continue;
    const auto shared =
        std::count_if(own->second.begin(), own->second.end(), [&](const auto& p) { return it->second.count(p) > 0; });
    worst = std::max(worst, static_cast<double>(shared) / static_cast<double>(own->second.size()));
  }
  return 1.0 - worst;
}

std::optional<double> multimodality_sensitivity(std::span<const double> m, std::span<const double> g) {
  std::set<double> distinct(m.begin(), m.end());
  if (distinct.size() < 3) return std::nullopt;
  return stats::pearson(m, g);
}

const CellResult* Report::cell(const std::string& problem, const std::string& method) const {
  for (const auto& c : cells) {
    if (c.problem == problem && c.method == method) return &c;
  }
  return nullptr;
}

namespace {

std::vector<std::string> method_order(const ResultStore& store, const std::vector<std::string>& problems) {
  std::vector<std::string> order;
  if (const auto plan = store.plan()) {
    for (const auto& m : plan->at("methods")) order.push_back(m.at("id").get<std::string>());
  }
  std::set<std::string> extra;
  for (const auto& p : problems) {
    for (const auto& m : store.methods(p)) {
      if (std::find(order.begin(), order.end(), m) == order.end()) extra.insert(m);
    }
  }
  order.insert(order.end(), extra.begin(), extra.end());
  return order;
}

}  // namespace

Report analyze(const ResultStore& store, const AnalysisOptions& options) {
  Report rep;
  rep.probe = options.probe;
  if (rep.probe.empty()) {
    const auto plan = store.plan();
    rep.probe = plan && plan->contains("probe") ? plan->at("probe").get<std::string>() : "NM";
  }

  // Problems in plan order when known; every one of them needs references.
  std::vector<std::string> problems;
  if (const auto plan = store.plan()) {
    for (const auto& p : plan->at("problems")) problems.push_back(p.at("id").get<std::string>());
  }
  for (const auto& p : store.problems_with_runs()) {
    if (std::find(problems.begin(), problems.end(), p) == problems.end()) problems.push_back(p);
  }
  for (const auto& p : store.problems()) {
    if (std::find(problems.begin(), problems.end(), p) == problems.end()) problems.push_back(p);
  }
  for (const auto& p : problems) {
    if (store.reference(p) == nullptr) {
      throw Error(ErrorKind::MissingReferences, fmt::format("no references for problem '{}'", p));
    }
  }
  rep.methods = method_order(store, problems);

  for (const auto& pid : problems) {
    const auto* ref = store.reference(pid);
    ProblemResult pr;
    pr.id = pid;
    pr.dimension = ref->dimension;
    try {
      pr.simulation = find_problem(pid).is_simulation();
    } catch (const Error&) {
      pr.simulation = false;
    }
    pr.f_minus = store.f_minus(pid);
    pr.f_circ = ref->f_circ;
    pr.f_plus = ref->f_plus;
    const GMap map = store.gmap(pid);
    pr.rho_circ = map.rho_circ();
    pr.alpha = map.alpha();
    pr.f_plus_trials = ref->f_plus_trials;
    pr.f_circ_runs = ref->f_circ_runs;

    for (const auto& mid : rep.methods) {
      const auto runs = store.runs(pid, mid);
      CellResult c;
      c.problem = pid;
      c.method = mid;
      c.dimension = ref->dimension;
      const auto* rec = store.cell(pid, mid);
      c.status = rec ? std::string(to_string(rec->status)) : "incomplete";
      for (const auto& r : runs) {
        if (r.failed) {
          ++c.failed_runs;
        } else {
          c.g_samples.push_back(map(r.best()));
        }
      }
      c.runs = c.g_samples.size();
      if (c.runs == 0) continue;
      c.g = staged_g(runs, map);
      c.relative = relative_g(runs, pr.f_minus.value, ref->f_circ, ref->f_plus);
      c.grw = grw(c.g_samples);
      rep.cells.push_back(std::move(c));
    }
    if (const auto* probe = rep.cell(pid, rep.probe)) pr.multimodality = multimodality(probe->g[2]);
    rep.problems.push_back(std::move(pr));
  }

  // Solved sets.
  rep.solved.methods = rep.methods;
  for (const auto& m : rep.methods) {
    rep.solved.by_g[m];
    rep.solved.by_grw[m];
  }
  for (const auto& c : rep.cells) {
    if (c.g[2] > kSolvedThreshold) rep.solved.by_g[c.method].insert(c.problem);
    if (c.grw > kSolvedThreshold) rep.solved.by_grw[c.method].insert(c.problem);
  }
  rep.overlap = overlap_matrix(rep.methods, rep.solved.by_g);
  rep.sets = best_sets(rep.solved, options.max_set_size);

  // Attributes and properties.
  for (const auto& m : rep.methods) {
    std::vector<double> g, w_loc, w_glob, w_low, w_high, fast, exhaustive, ones, mm, g_mm, speed_terms, grw_minus_g;
    for (const auto& pr : rep.problems) {
      const auto* c = rep.cell(pr.id, m);
      if (c == nullptr) continue;
      g.push_back(c->g[2]);
      const auto* probe = rep.cell(pr.id, rep.probe);
      if (probe != nullptr) {
        const double wl = local_weight(probe->g[2]);
        w_loc.push_back(wl);
        w_glob.push_back(1.0 - wl);
      }
      const double wd = low_dimension_weight(pr.dimension);
      w_low.push_back(wd);
      w_high.push_back(1.0 - wd);
      fast.push_back(fast_blend(c->relative));
      exhaustive.push_back(exhaustive_blend(c->relative));
      ones.push_back(1.0);
      speed_terms.push_back(1.0 - (c->g[2] - c->g[0]));
      grw_minus_g.push_back(c->grw - c->g[2]);
      if (pr.multimodality) {
        mm.push_back(*pr.multimodality);
        g_mm.push_back(c->g[2]);
      }
    }
    AttributeScores a;
    if (!g.empty()) {
      // Local/global weights only exist where the probe ran.
      std::vector<double> g_probed;
      for (const auto& pr : rep.problems) {
        const auto* c = rep.cell(pr.id, m);
        if (c != nullptr && rep.cell(pr.id, rep.probe) != nullptr) g_probed.push_back(c->g[2]);
      }
      a.local = weighted_mean(g_probed, w_loc);
      a.global = weighted_mean(g_probed, w_glob);
      a.fast = weighted_mean(fast, ones);
      a.exhaustive = weighted_mean(exhaustive, ones);
      a.low_d = weighted_mean(g, w_low);
      a.high_d = weighted_mean(g, w_high);
    }
    rep.attributes[m] = a;

    MethodProperties p;
    if (!g.empty()) {
      p.stability = 1.0 - stats::stddev(g);
      p.exploitation = stats::mean(grw_minus_g);
      p.speed = stats::mean(speed_terms);
    }
    p.uniqueness = uniqueness(m, rep.methods, rep.solved.by_g);
    p.sensitivity = multimodality_sensitivity(mm, g_mm);
    rep.properties[m] = p;
  }

  // Relative complexity against the reference function's evaluation time.
  if (const auto* tref = store.timing(kReferenceProblem)) rep.reference_eval_seconds = tref->eval_seconds;
  for (const auto& m : rep.methods) {
    ComplexityRow row;
    row.method = m;
    std::vector<double> ratios;
    for (const auto& pr : rep.problems) {
      if (pr.simulation) continue;
      const auto* tf = store.timing(pr.id);
      const auto runs = store.runs(pr.id, m);
      if (tf == nullptr || !rep.reference_eval_seconds || *rep.reference_eval_seconds <= 0.0) continue;
      try {
        const auto t = measure_timing(*tf, runs);
        ratios.push_back(t.overhead_per_eval / *rep.reference_eval_seconds);
        row.low_confidence = row.low_confidence || t.low_confidence;
      } catch (const Error&) {
        continue;
      }
    }
    row.problems = ratios.size();
    if (!ratios.empty()) row.relative = stats::mean(ratios);
    rep.complexity.push_back(row);
  }
  return rep;
}

}  // namespace gbench
