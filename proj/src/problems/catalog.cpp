#include "gbench/problems/catalog.hpp"

#include <regex>

#include <fmt/format.h>

#include "gbench/error.hpp"
#include "gbench/problems/ergodic_coverage.hpp"
#include "gbench/problems/packing.hpp"
#include "gbench/problems/shortest_path.hpp"
#include "gbench/problems/synthetic.hpp"

namespace gbench {

Family parse_family(std::string_view name) {
  if (name == "SP") return Family::SP;
  if (name == "EC") return Family::EC;
  if (name == "PP") return Family::PP;
  if (name == "SYNTH") return Family::SYNTH;
  throw Error(ErrorKind::UnknownFamily, std::string(name));
}

std::string_view to_string(Family family) {
  switch (family) {
    case Family::SP: return "SP";
    case Family::EC: return "EC";
    case Family::PP: return "PP";
    case Family::SYNTH: return "SYNTH";
  }
  return "?";
}

namespace {

void reject_unknown_keys(const nlohmann::json& params, std::initializer_list<std::string_view> known) {
  if (!params.is_object()) {
    throw Error(ErrorKind::InvalidInput, "family params must be an object");
  }
  for (const auto& [key, _] : params.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw Error(ErrorKind::InvalidInput, fmt::format("unknown family parameter '{}'", key));
    }
  }
}

std::vector<Problem> synth_family(const nlohmann::json& params) {
  reject_unknown_keys(params, {"sphere_dimensions", "ripple_dimensions", "reference_dimension"});
  const auto spheres = params.value("sphere_dimensions", std::vector<std::size_t>{3, 10, 30});
  const auto ripples = params.value("ripple_dimensions", std::vector<std::size_t>{10});
  const auto ref_dim = params.value("reference_dimension", std::size_t{10});
  std::vector<Problem> out;
  for (auto d : spheres) out.push_back(synth::make_sphere(d));
  for (auto d : ripples) out.push_back(synth::make_ripple(d));
  out.push_back(synth::make_reference(ref_dim));
  return out;
}

std::vector<Problem> sp_family(const nlohmann::json& params) {
  reject_unknown_keys(params, {"zigzag_segments"});
  const auto zig = params.value("zigzag_segments", std::size_t{20});
  const geom::Vec2 a{0.0, 0.0}, b{1.0, 0.0};
  std::vector<Problem> out;
  out.push_back(sp::make_problem("SP-open-5D", sp::make_instance(a, b, {}, 5)));
  out.push_back(sp::make_problem("SP-single-5D", sp::make_instance(a, b, {{{0.5, 0.0}, 0.15}}, 5)));
  // Obstacles alternate above and below the straight line, forcing a weave.
  std::vector<sp::Obstacle> zigzag;
  for (int i = 0; i < 4; ++i) {
    const double y = (i % 2 == 0) ? 0.05 : -0.05;
    zigzag.push_back({{0.2 + 0.2 * i, y}, 0.09});
  }
  out.push_back(sp::make_problem(fmt::format("SP-zigzag-{}D", zig), sp::make_instance(a, b, std::move(zigzag), zig)));
  return out;
}

std::vector<Problem> ec_family(const nlohmann::json& params) {
  reject_unknown_keys(params, {"segments", "grid", "spectral_order"});
  const auto segments = params.value("segments", std::size_t{20});
  const auto grid = params.value("grid", std::size_t{20});
  const auto order = params.value("spectral_order", std::size_t{8});
  const std::vector<ec::Blob> blobs = {{{0.3, 0.35}, 0.12, 1.0}, {{0.7, 0.65}, 0.1, 0.8}};
  ec::ECInstance base;
  base.start = {0.5, 0.5};
  base.segments = segments;
  base.segment_length = 3.0 / static_cast<double>(segments);
  base.goal = ec::gaussian_mixture(grid, grid, blobs);
  base.spectral_order = order;
  std::vector<Problem> out;
  auto direct = base;
  direct.metric = ec::MetricKind::Direct;
  out.push_back(ec::make_problem(fmt::format("EC-gauss-direct-{}D", segments), direct));
  auto spectral = base;
  spectral.metric = ec::MetricKind::Spectral;
  out.push_back(ec::make_problem(fmt::format("EC-gauss-spectral-{}D", segments), spectral));
  return out;
}

std::vector<Problem> pp_family(const nlohmann::json& params) {
  reject_unknown_keys(params, {});
  std::vector<pp::ShapeSpec> shapes;
  for (int i = 0; i < 3; ++i) shapes.push_back({0, 1.0});
  for (int i = 0; i < 3; ++i) shapes.push_back({3, 1.2});
  for (int i = 0; i < 3; ++i) shapes.push_back({4, 1.0});
  std::vector<Problem> out;
  out.push_back(pp::make_problem("PP-ctr3c3t3s-24D", pp::make_instance(12.0, 12.0, std::move(shapes))));
  out.push_back(pp::make_problem("PP-ctr2c-4D", pp::make_instance(10.0, 10.0, {{0, 1.0}, {0, 1.0}})));
  return out;
}

}  // namespace

std::vector<Problem> make_family(Family family, const nlohmann::json& params) {
  switch (family) {
    case Family::SYNTH: return synth_family(params);
    case Family::SP: return sp_family(params);
    case Family::EC: return ec_family(params);
    case Family::PP: return pp_family(params);
  }
  throw Error(ErrorKind::UnknownFamily, "unhandled family");
}

std::vector<Problem> default_catalog() {
  std::vector<Problem> all;
  for (auto f : {Family::SYNTH, Family::SP, Family::EC, Family::PP}) {
    auto part = make_family(f);
    all.insert(all.end(), part.begin(), part.end());
  }
  return all;
}

Problem find_problem(std::string_view id) {
  // Synthetic functions are available in any dimension.
  static const std::regex parametric(R"(^(sphere|ripple|REF)-([0-9]+)D$)");
  std::match_results<std::string_view::const_iterator> m;
  if (std::regex_match(id.begin(), id.end(), m, parametric)) {
    const auto d = static_cast<std::size_t>(std::stoul(m[2].str()));
    if (d >= 1 && d <= 1000) {
      if (m[1] == "sphere") return synth::make_sphere(d);
      if (m[1] == "ripple") return synth::make_ripple(d);
      return synth::make_reference(d);
    }
  }
  for (auto& p : default_catalog()) {
    if (p.id() == id) {
      return p;
    }
  }
  throw Error(ErrorKind::UnknownProblem, std::string(id));
}

nlohmann::json catalog_json(const std::vector<Problem>& problems) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& p : problems) {
    doc.push_back(describe(p));
  }
  return doc;
}

}  // namespace gbench
