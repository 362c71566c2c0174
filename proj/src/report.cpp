#include "gbench/report.hpp"

#include <cmath>
#include <numbers>

#include <fmt/core.h>
#include <json.hpp>

#include "gbench/serialization.hpp"
#include "gbench/store.hpp"

namespace gbench {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{}", v);
}
std::string num(const std::optional<double>& v) { return v ? num(*v) : ""; }
json jnum(const std::optional<double>& v) { return v ? real_to_json(*v) : json(nullptr); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += csv_field(fields[i]);
  }
  return line + "\n";
}

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

class Writer {
 public:
  explicit Writer(fs::path dir) : dir_(std::move(dir)) {}
  void put(const std::string& name, const std::string& content) {
    write_file_atomic(dir_ / name, content);
    written_.push_back(dir_ / name);
  }
  void put(const std::string& name, const json& j) { put(name, j.dump(2) + "\n"); }
  std::vector<fs::path> written() const { return written_; }

 private:
  fs::path dir_;
  std::vector<fs::path> written_;
};

const std::array<const char*, 6> kAttributeNames = {"local", "global", "fast", "exhaustive", "low_d", "high_d"};

std::array<std::optional<double>, 6> attribute_values(const AttributeScores& a) {
  return {a.local, a.global, a.fast, a.exhaustive, a.low_d, a.high_d};
}

const std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                             "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string radar_svg(const Report& rep) {
  constexpr double size = 480, cx = 240, cy = 250, radius = 170;
  std::string s = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"sans-serif\" "
      "font-size=\"12\">\n",
      size + 140, size + 20);
  auto point = [&](std::size_t axis, double value) {
    const double angle = -std::numbers::pi / 2 + 2 * std::numbers::pi * static_cast<double>(axis) / 6.0;
    const double r = radius * std::clamp((value + 1.0) / 2.0, 0.0, 1.0);
    return std::make_pair(cx + r * std::cos(angle), cy + r * std::sin(angle));
  };
  for (double level : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
    std::string pts;
    for (std::size_t a = 0; a < 6; ++a) {
      const auto [x, y] = point(a, level);
      pts += fmt::format("{:.2f},{:.2f} ", x, y);
    }
    s += fmt::format("<polygon points=\"{}\" fill=\"none\" stroke=\"#ccc\"/>\n", pts);
  }
  for (std::size_t a = 0; a < 6; ++a) {
    const auto [x, y] = point(a, 1.0);
    s += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#ccc\"/>\n", cx, cy, x, y);
    const auto [lx, ly] = point(a, 1.18);
    s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n", lx, ly, kAttributeNames[a]);
  }
  for (std::size_t i = 0; i < rep.methods.size(); ++i) {
    const auto& m = rep.methods[i];
    const auto values = attribute_values(rep.attributes.at(m));
    std::string pts;
    for (std::size_t a = 0; a < 6; ++a) {
      const auto [x, y] = point(a, values[a].value_or(-1.0));
      pts += fmt::format("{:.2f},{:.2f} ", x, y);
    }
    const char* color = kPalette[i % kPalette.size()];
    s += fmt::format("<polygon points=\"{}\" fill=\"{}\" fill-opacity=\"0.12\" stroke=\"{}\"/>\n", pts, color, color);
    s += fmt::format("<text x=\"{}\" y=\"{}\" fill=\"{}\">{}</text>\n", size + 20, 30 + 18 * i, color, m);
  }
  return s + "</svg>\n";
}

std::string scatter_svg(const Report& rep) {
  constexpr double w = 520, h = 380, left = 50, top = 20, pw = 360, ph = 320;
  std::string s = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"sans-serif\" "
      "font-size=\"12\">\n",
      w, h);
  auto px = [&](double m) { return left + pw * std::clamp(m, 0.0, 1.0); };
  auto py = [&](double g) { return top + ph * (1.0 - (std::clamp(g, -1.0, 1.0) + 1.0) / 2.0); };
  s += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#888\"/>\n", left, top,
                   pw, ph);
  s += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#888\" stroke-dasharray=\"3,3\"/>\n", left,
                   py(0), left + pw, py(0));
  s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">M</text>\n", left + pw / 2, top + ph + 30);
  s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">G</text>\n", left - 30, top + ph / 2);
  for (double t : {0.0, 0.5, 1.0}) {
    s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", px(t), top + ph + 15, t);
  }
  for (double t : {-1.0, 0.0, 1.0}) {
    s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", left - 5, py(t) + 4, t);
  }
  for (std::size_t i = 0; i < rep.methods.size(); ++i) {
    const auto& m = rep.methods[i];
    const char* color = kPalette[i % kPalette.size()];
    for (const auto& pr : rep.problems) {
      const auto* c = rep.cell(pr.id, m);
      if (c == nullptr || !pr.multimodality) continue;
      s += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"4\" fill=\"{}\"><title>{} {}</title></circle>\n",
                       px(*pr.multimodality), py(c->g[2]), color, m, pr.id);
    }
    s += fmt::format("<text x=\"{}\" y=\"{}\" fill=\"{}\">{}</text>\n", left + pw + 20, top + 12 + 18 * i, color, m);
  }
  return s + "</svg>\n";
}

}  // namespace

bool is_timing_file(const fs::path& file) { return file.stem() == "complexity"; }

std::vector<fs::path> write_report(const Report& rep, const fs::path& dir) {
  Writer out(dir);

  out.put("meta.json", json{{"probe", rep.probe},
                            {"solved_threshold", kSolvedThreshold},
                            {"repeat_count", kRepeatCount},
                            {"quantile_rule", "linear between order statistics, position p (n - 1)"},
                            {"speed_stage_metric", "absolute"},
                            {"low_dimension_weight", "1 for D <= 10, 1 - (D - 10) / 20 between, 0 for D >= 30"},
                            {"forced_overlap_rows", "RS"}});

  {
    std::string csv = csv_row({"problem", "dimension", "f_minus", "f_minus_source", "f_circ_10", "f_circ_50",
                               "f_circ_100", "f_plus", "rho_circ", "alpha", "multimodality", "f_plus_trials",
                               "f_circ_runs"});
    json arr = json::array();
    for (const auto& p : rep.problems) {
      csv += csv_row({p.id, std::to_string(p.dimension), num(p.f_minus.value), p.f_minus.source, num(p.f_circ[0]),
                      num(p.f_circ[1]), num(p.f_circ[2]), num(p.f_plus), num(p.rho_circ), num(p.alpha),
                      num(p.multimodality), std::to_string(p.f_plus_trials), std::to_string(p.f_circ_runs)});
      arr.push_back({{"problem", p.id},
                     {"dimension", p.dimension},
                     {"f_minus", real_to_json(p.f_minus.value)},
                     {"f_minus_source", p.f_minus.source},
                     {"f_circ", {real_to_json(p.f_circ[0]), real_to_json(p.f_circ[1]), real_to_json(p.f_circ[2])}},
                     {"f_plus", real_to_json(p.f_plus)},
                     {"rho_circ", real_to_json(p.rho_circ)},
                     {"alpha", jnum(p.alpha)},
                     {"multimodality", jnum(p.multimodality)},
                     {"f_plus_trials", p.f_plus_trials},
                     {"f_circ_runs", p.f_circ_runs}});
    }
    out.put("problems.csv", csv);
    out.put("problems.json", arr);
  }

  {
    std::string csv = csv_row({"problem", "method", "dimension", "status", "runs", "failed_runs", "g_10", "g_50",
                               "g_100", "rel_10", "rel_50", "rel_100", "g_rw"});
    json arr = json::array();
    for (const auto& c : rep.cells) {
      csv += csv_row({c.problem, c.method, std::to_string(c.dimension), c.status, std::to_string(c.runs),
                      std::to_string(c.failed_runs), num(c.g[0]), num(c.g[1]), num(c.g[2]), num(c.relative[0]),
                      num(c.relative[1]), num(c.relative[2]), num(c.grw)});
      arr.push_back({{"problem", c.problem},
                     {"method", c.method},
                     {"dimension", c.dimension},
                     {"status", c.status},
                     {"runs", c.runs},
                     {"failed_runs", c.failed_runs},
                     {"g", {real_to_json(c.g[0]), real_to_json(c.g[1]), real_to_json(c.g[2])}},
                     {"relative", {real_to_json(c.relative[0]), real_to_json(c.relative[1]), real_to_json(c.relative[2])}},
                     {"g_rw", real_to_json(c.grw)}});
    }
    out.put("cells.csv", csv);
    out.put("cells.json", arr);
  }

  {
    std::vector<std::string> header = {"method"};
    header.insert(header.end(), kAttributeNames.begin(), kAttributeNames.end());
    std::string csv = csv_row(header);
    json obj = json::object();
    for (const auto& m : rep.methods) {
      const auto values = attribute_values(rep.attributes.at(m));
      std::vector<std::string> row = {m};
      json entry = json::object();
      for (std::size_t a = 0; a < 6; ++a) {
        row.push_back(num(values[a]));
        entry[kAttributeNames[a]] = jnum(values[a]);
      }
      csv += csv_row(row);
      obj[m] = entry;
    }
    out.put("attributes.csv", csv);
    out.put("attributes.json", obj);
  }

  {
    std::string csv = csv_row({"method", "stability", "exploitation", "speed", "uniqueness", "sensitivity"});
    json obj = json::object();
    for (const auto& m : rep.methods) {
      const auto& p = rep.properties.at(m);
      csv += csv_row({m, num(p.stability), num(p.exploitation), num(p.speed), num(p.uniqueness), num(p.sensitivity)});
      obj[m] = {{"stability", jnum(p.stability)},
                {"exploitation", jnum(p.exploitation)},
                {"speed", jnum(p.speed)},
                {"uniqueness", jnum(p.uniqueness)},
                {"sensitivity", jnum(p.sensitivity)}};
    }
    out.put("properties.csv", csv);
    out.put("properties.json", obj);
  }

  {
    std::vector<std::string> header = {"method"};
    header.insert(header.end(), rep.overlap.methods.begin(), rep.overlap.methods.end());
    header.push_back("forced");
    std::string csv = csv_row(header);
    json rows = json::array();
    for (std::size_t a = 0; a < rep.overlap.methods.size(); ++a) {
      std::vector<std::string> row = {rep.overlap.methods[a]};
      json values = json::array();
      for (const auto& v : rep.overlap.values[a]) {
        row.push_back(num(v));
        values.push_back(jnum(v));
      }
      row.push_back(rep.overlap.forced[a] ? "yes" : "no");
      csv += csv_row(row);
      rows.push_back({{"method", rep.overlap.methods[a]}, {"values", values}, {"forced", bool(rep.overlap.forced[a])}});
    }
    out.put("overlap.csv", csv);
    out.put("overlap.json", json{{"methods", rep.overlap.methods}, {"rows", rows}});
  }

  {
    std::string csv = csv_row({"criterion", "size", "methods", "solved", "solved_given_10_runs"});
    json obj = {{"by_g", json::array()}, {"by_g_rw", json::array()}};
    auto emit = [&](const char* name, const char* key, const std::vector<BestSet>& sets) {
      for (const auto& s : sets) {
        csv += csv_row({name, std::to_string(s.size), join(s.methods, " "), std::to_string(s.solved),
                        std::to_string(s.solved_rw)});
        obj[key].push_back(
            {{"size", s.size}, {"methods", s.methods}, {"solved", s.solved}, {"solved_given_10_runs", s.solved_rw}});
      }
    };
    emit("g", "by_g", rep.sets.by_g);
    emit("g_rw", "by_g_rw", rep.sets.by_grw);
    out.put("best_sets.csv", csv);
    out.put("best_sets.json", obj);
  }

  out.put("radar.svg", radar_svg(rep));
  out.put("scatter.svg", scatter_svg(rep));

  {
    std::string csv = csv_row({"method", "relative_complexity", "problems", "low_confidence"});
    json obj = {{"reference_problem", "REF-10D"},
                {"reference_eval_seconds", jnum(rep.reference_eval_seconds)},
                {"methods", json::object()}};
    for (const auto& c : rep.complexity) {
      csv += csv_row({c.method, num(c.relative), std::to_string(c.problems), c.low_confidence ? "yes" : "no"});
      obj["methods"][c.method] = {
          {"relative_complexity", jnum(c.relative)}, {"problems", c.problems}, {"low_confidence", c.low_confidence}};
    }
    out.put("complexity.csv", csv);
    out.put("complexity.json", obj);
  }
  return out.written();
}

}  // namespace gbench
