#include "dhopf/pipeline.hpp"

#include "dhopf/errors.hpp"
#include "dhopf/generators.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <functional>
#include <map>
#include <stdexcept>

namespace dhopf {

using nlohmann::json;

namespace {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

json vec(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

json violations_json(const ValidationReport& r, std::size_t limit = 20) {
  json out = json::array();
  for (std::size_t i = 0; i < r.violations.size() && i < limit; ++i) {
    const auto& v = r.violations[i];
    out.push_back({{"code", v.code}, {"simplex", v.simplex}, {"message", v.message}});
  }
  return out;
}

std::string first_violation(const ValidationReport& r) {
  if (r.passed()) return "";
  const auto& v = r.violations.front();
  return v.code + " at " + v.simplex + ": " + v.message;
}

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

bool check_swap(const NeighborComplex& cx, const ResolvedComplex& rc) {
  for (std::size_t t = 0; t < rc.triangles.size(); ++t) {
    const std::size_t s = rc.swap_triangle[t];
    if (s == npos || rc.swap_triangle[s] != t) return false;
    if (cx.triangles[s].first != cx.triangles[t].second || cx.triangles[s].second != cx.triangles[t].first)
      return false;
    for (int k = 0; k < 3; ++k)
      if (rc.swap_vertex[rc.triangles[t][k]] != rc.triangles[s][k]) return false;
  }
  for (std::size_t v = 0; v < rc.swap_vertex.size(); ++v)
    if (rc.swap_vertex[v] == npos || rc.swap_vertex[rc.swap_vertex[v]] != v) return false;
  return true;
}

struct ValidationFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Runs one stage, timing it and turning exceptions into a recorded failure.
bool run_stage(RunReport& report, const std::string& name, const std::function<void()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body();
  } catch (const ValidationFailed& e) {
    report.failure = StageFailure{name, FailureKind::Validation, e.what()};
  } catch (const ParseError& e) {
    report.failure = StageFailure{name, FailureKind::Io, e.what()};
  } catch (const IoError& e) {
    report.failure = StageFailure{name, FailureKind::Io, e.what()};
  } catch (const std::exception& e) {
    report.failure = StageFailure{name, FailureKind::Pipeline, e.what()};
  }
  report.timings.emplace_back(name, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  if (report.failure) return false;
  report.completed.push_back(name);
  return true;
}

}  // namespace

std::string DeltaSpec::str() const {
  json j = value;
  return j.dump() + (relative ? "D" : "");
}

DeltaSpec parse_delta(const std::string& text) {
  std::string s = text;
  DeltaSpec spec;
  if (!s.empty() && (s.back() == 'D' || s.back() == 'd')) {
    spec.relative = true;
    s.pop_back();
  }
  std::size_t used = 0;
  try {
    spec.value = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed delta '" + text + "'");
  }
  if (used != s.size() || !(spec.value > 0.0) || !std::isfinite(spec.value))
    throw std::invalid_argument("malformed delta '" + text + "'");
  return spec;
}

std::string to_string(Stage s) {
  switch (s) {
    case Stage::Validate: return "validate";
    case Stage::Triangulate: return "triangulate";
    case Stage::Complex: return "complex";
    case Stage::Hopf: return "hopf";
    case Stage::Levelset: return "levelset";
    case Stage::All: break;
  }
  return "all";
}

Stage parse_stage(const std::string& name) {
  for (auto s : {Stage::Validate, Stage::Triangulate, Stage::Complex, Stage::Hopf, Stage::Levelset, Stage::All})
    if (to_string(s) == name) return s;
  throw std::invalid_argument("unknown stage '" + name + "'");
}

void RunConfig::validate() const {
  if (!mesh_path && hull_points == 0) throw std::invalid_argument("no mesh: give a mesh file or a hull size");
  if (!mesh_path && hull_points < 4) throw std::invalid_argument("hull size must be at least 4");
  if (!map_path && generator.empty()) throw std::invalid_argument("no map: give a map file or a generator");
  if (!map_path && generator != "projection" && generator != "random-images")
    throw std::invalid_argument("unknown generator '" + generator + "'");
  if (!(tol_residual > 0.0)) throw std::invalid_argument("residual tolerance must be positive");
  if (tol_level < 0.0) throw std::invalid_argument("level tolerance must be positive (or 0 for the default)");
  if (max_depth > 20) throw std::invalid_argument("max depth must be at most 20");
  if ((svg || obj || report) && !out_dir) throw std::invalid_argument("exports need an output directory");
}

json RunConfig::to_json() const {
  json deltas_json = json::array();
  for (const auto& d : deltas) deltas_json.push_back(d.str());
  return {{"stage", to_string(stage)},
          {"mesh", mesh_path ? json(mesh_path->generic_string()) : json(nullptr)},
          {"map", map_path ? json(map_path->generic_string()) : json(nullptr)},
          {"generator", generator},
          {"hull_points", hull_points},
          {"seed", seed},
          {"deltas", deltas_json},
          {"tol_residual", tol_residual},
          {"tol_level", tol_level},
          {"max_depth", max_depth},
          {"oracle_samples", oracle_samples}};
}

bool RunReport::reached(const std::string& stage) const {
  return std::find(completed.begin(), completed.end(), stage) != completed.end();
}

RunReport run_pipeline(const RunConfig& config) {
  config.validate();
  RunReport report;
  report.config = config;
  report.timestamp = utc_now();
  const Stage stage = config.stage;
  auto wants = [&](Stage s) { return static_cast<int>(stage) >= static_cast<int>(s); };

  if (!run_stage(report, "mesh", [&] {
        report.mesh = config.mesh_path ? load_surface_mesh(*config.mesh_path)
                                       : random_sphere_hull(config.hull_points, config.seed);
        report.mesh_validation = validate_surface(report.mesh);
        if (!report.mesh_validation.passed())
          throw ValidationFailed("surface check failed: " + first_violation(report.mesh_validation));
      }))
    return report;

  if (!run_stage(report, "map", [&] {
        report.map = config.map_path ? load_planar_map(*config.map_path)
                                     : generate_map(config.generator, report.mesh, config.seed);
        report.map_validation = check_general_position(report.mesh, report.map);
        if (!report.map_validation.passed())
          throw ValidationFailed("general position violated: " + first_violation(report.map_validation));
      }))
    return report;
  if (!wants(Stage::Triangulate)) return report;

  if (!run_stage(report, "arrangement", [&] { report.pslg = build_pslg(report.mesh, report.map); })) return report;
  if (!run_stage(report, "cdt", [&] {
        report.tri = restrict_to_image(constrained_delaunay(report.pslg), report.mesh, report.map);
        report.expected_pair_triangles = 0;
        for (std::size_t t = 0; t < report.tri.triangles.size(); ++t) {
          const std::size_t m = report.tri.multiplicity(t);
          report.expected_pair_triangles += m * (m > 0 ? m - 1 : 0);
        }
      }))
    return report;
  if (!run_stage(report, "induced", [&] {
        report.ind = pull_back(report.tri, report.mesh, report.map);
        report.induced_validation = validate_surface(induced_surface(report.ind), {false, true});
        if (!report.induced_validation.passed())
          throw GeometryError("induced triangulation is not a closed surface: " +
                              first_violation(report.induced_validation));
      }))
    return report;
  if (!wants(Stage::Complex)) return report;

  if (!run_stage(report, "complex", [&] {
        report.cx = build_complex(report.ind);
        if (report.cx.triangles.size() != report.expected_pair_triangles)
          throw GeometryError("pair triangle count " + std::to_string(report.cx.triangles.size()) +
                              " differs from the multiplicity sum " +
                              std::to_string(report.expected_pair_triangles));
        report.manifold = verify_edge_manifold(report.ind, report.cx);
        if (!report.manifold.passed())
          throw GeometryError("edge-manifold check failed: " + report.manifold.violations.front());
        report.rc = resolve_singularities(report.ind, report.cx);
        analyze_components(report.ind, report.cx, report.rc);
        report.swap_involution = check_swap(report.cx, report.rc);
        if (!report.swap_involution) throw GeometryError("swap is not an involution on the resolution");
      }))
    return report;
  if (config.oracle_samples > 0) {
    if (!run_stage(report, "oracle", [&] {
          report.oracle = oracle_check(report.mesh, report.map, report.tri, report.ind, report.cx,
                                       config.oracle_samples, config.seed);
          if (!report.oracle->passed())
            throw GeometryError("oracle disagreement: " + report.oracle->counterexamples.front());
        }))
      return report;
  }
  if (!wants(Stage::Hopf)) return report;

  if (!run_stage(report, "hopf", [&] {
        report.base = find_base_component(report.ind, report.cx, report.rc);
        std::vector<Eigen::Vector3d> extra;
        extra.reserve(report.ind.vertices.size());
        for (std::size_t v = 0; v < report.ind.vertices.size(); ++v) extra.push_back(report.ind.position(v));
        CenterOptions copt;
        copt.seed = config.seed;
        report.center = estimate_center(report.mesh, extra, copt);
        SearchOptions sopt;
        sopt.tolerance = config.tol_residual;
        auto witness = find_equivariant_pair(report.ind, report.cx, report.rc, report.base->component,
                                             report.center->center, sopt);
        path_to_diagonal(report.ind, report.cx, report.rc, witness);
        report.witness = std::move(witness);
      }))
    return report;
  if (!wants(Stage::Levelset)) return report;

  std::vector<DeltaSpec> deltas = config.deltas;
  if (deltas.empty() && stage == Stage::Levelset) deltas.push_back({0.5, true});
  if (deltas.empty()) return report;
  run_stage(report, "levelset", [&] {
    const std::size_t component = report.base->component;
    const double max_distance = lift_distance(report.ind, report.cx, report.rc, component).max;
    LevelSetOptions lopt;
    lopt.eps_level = config.tol_level;
    lopt.scale = report.center->d_hat;
    lopt.max_depth = config.max_depth;
    for (const auto& spec : deltas) {
      const double delta = spec.relative ? spec.value * report.center->d_hat : spec.value;
      LevelSetRun run{spec, analyze_level_set(report.ind, report.cx, report.rc, component, delta, lopt),
                      max_distance};
      report.level_sets.push_back(std::move(run));
    }
  });
  return report;
}

json report_json(const RunReport& r) {
  json j;
  j["config"] = r.config.to_json();
  json failure = nullptr;
  if (r.failure) {
    const char* kind = r.failure->kind == FailureKind::Validation ? "validation"
                       : r.failure->kind == FailureKind::Io      ? "io"
                                                                 : "pipeline";
    failure = {{"stage", r.failure->stage}, {"kind", kind}, {"message", r.failure->message}};
  }
  j["status"] = {{"ok", r.ok()}, {"completed", r.completed}, {"failure", failure}};

  json timings = json::object();
  for (const auto& [name, seconds] : r.timings) timings[name] = seconds;
  j["timestamps"] = {{"started", r.timestamp}, {"stage_seconds", timings}};

  if (r.reached("mesh") || r.mesh.num_vertices() > 0)
    j["mesh"] = {{"vertices", r.mesh.num_vertices()},
                 {"triangles", r.mesh.num_triangles()},
                 {"edges", r.mesh.num_edges()},
                 {"flipped_on_load", r.mesh.flipped_on_load()},
                 {"valid", r.mesh_validation.passed()},
                 {"violations", violations_json(r.mesh_validation)}};
  if (r.reached("map") || !r.map.images.empty())
    j["map"] = {{"images", r.map.images.size()},
                {"general_position", r.map_validation.passed()},
                {"violations", violations_json(r.map_validation)}};
  if (r.reached("arrangement")) {
    std::size_t crossings = 0;
    for (const auto& p : r.pslg.points)
      if (!p.mesh_vertex) ++crossings;
    j["arrangement"] = {{"points", r.pslg.points.size()},
                        {"crossing_points", crossings},
                        {"constraints", r.pslg.constraints.size()}};
  }
  if (r.reached("cdt")) {
    json histogram = json::object();
    std::map<std::size_t, std::size_t> counts;
    for (std::size_t t = 0; t < r.tri.triangles.size(); ++t)
      if (r.tri.inside[t]) ++counts[r.tri.multiplicity(t)];
    for (const auto& [m, c] : counts) histogram[std::to_string(m)] = c;
    j["image_triangulation"] = {{"points", r.tri.points.size()},
                                {"triangles", r.tri.triangles.size()},
                                {"inside", r.tri.num_inside()},
                                {"multiplicity_histogram", histogram},
                                {"sum_m_m_minus_1", r.expected_pair_triangles}};
  }
  if (r.reached("induced"))
    j["induced"] = {{"vertices", r.ind.vertices.size()},
                    {"triangles", r.ind.triangles.size()},
                    {"closed_surface", r.induced_validation.passed()}};
  if (r.reached("complex") || !r.cx.triangles.empty()) {
    json lemma = {{"passed", r.manifold.passed()},
                  {"diagonal", r.manifold.diagonal},
                  {"no_folding", r.manifold.no_folding},
                  {"one_folding", r.manifold.one_folding},
                  {"violations", json::array()}};
    for (std::size_t i = 0; i < r.manifold.violations.size() && i < 20; ++i)
      lemma["violations"].push_back(r.manifold.violations[i]);
    j["complex"] = {{"vertices", r.cx.vertices.size()},
                    {"edges", r.cx.edges.size()},
                    {"triangles", r.cx.triangles.size()},
                    {"diagonal_vertices", r.cx.num_diagonal_vertices()},
                    {"euler", r.cx.euler_characteristic()},
                    {"counting_identity", r.cx.triangles.size() == r.expected_pair_triangles},
                    {"edge_manifold", lemma}};
  }
  if (r.reached("complex")) {
    json comps = json::array();
    for (std::size_t c = 0; c < r.rc.components.size(); ++c) {
      const auto& info = r.rc.components[c];
      comps.push_back({{"id", c},
                       {"vertices", info.num_vertices},
                       {"edges", info.num_edges},
                       {"triangles", info.num_triangles},
                       {"euler", info.euler},
                       {"orientable", info.orientable},
                       {"genus", info.genus ? json(*info.genus) : json(nullptr)},
                       {"degree_mod2", info.degree_mod2},
                       {"signed_degree", info.signed_degree ? json(*info.signed_degree) : json(nullptr)},
                       {"meets_diagonal", info.meets_diagonal},
                       {"swap_partner", info.swap_partner}});
    }
    j["resolution"] = {{"vertices", r.rc.num_vertices()},
                       {"edges", r.rc.edges.size()},
                       {"triangles", r.rc.triangles.size()},
                       {"split_vertices", r.rc.split_vertices},
                       {"generic_triangle", r.rc.generic_triangle},
                       {"swap_involution", r.swap_involution},
                       {"components", comps}};
  }
  if (r.oracle) {
    j["oracle"] = {{"passed", r.oracle->passed()},
                   {"samples", r.oracle->samples},
                   {"skipped", r.oracle->skipped},
                   {"multi_preimage", r.oracle->multi_preimage},
                   {"pairs_checked", r.oracle->pairs_checked},
                   {"converse_checked", r.oracle->converse_checked},
                   {"failures", r.oracle->failures},
                   {"counterexamples", r.oracle->counterexamples}};
  }
  if (r.base || r.center) {
    json hopf;
    if (r.base) {
      hopf["base_component"] = r.base->component;
      hopf["folding_pair"] = r.base->folding ? json(*r.base->folding) : json(nullptr);
      hopf["fallback"] = r.base->fallback;
    }
    if (r.center) {
      hopf["center"] = vec(r.center->center);
      hopf["d_hat"] = r.center->d_hat;
      hopf["center_converged"] = r.center->converged;
      hopf["center_samples"] = r.center->num_samples;
    }
    if (r.witness) {
      const auto& w = *r.witness;
      const Eigen::Vector3d p = r.center->center;
      json path = json::array();
      for (const auto& pp : w.path)
        path.push_back({{"vertex", pp.vertex ? json(*pp.vertex) : json(nullptr)},
                        {"a", vec(pp.a)},
                        {"b", vec(pp.b)},
                        {"distance", (pp.a - pp.b).norm()},
                        {"diagonal", pp.diagonal}});
      hopf["witness"] = {{"triangle", w.triangle},
                         {"barycentric", w.barycentric},
                         {"a", vec(w.a)},
                         {"b", vec(w.b)},
                         {"distance", (w.a - w.b).norm()},
                         {"residual", w.residual},
                         {"collinearity_deviation", collinearity_deviation(w.a, w.b, p)},
                         {"center_between", (w.a - p).dot(w.b - p) < 0.0}};
      hopf["path"] = path;
      hopf["path_reaches_diagonal"] = !w.path.empty() && w.path.back().diagonal;
    }
    j["hopf"] = hopf;
  }
  if (!r.level_sets.empty()) {
    json sets = json::array();
    for (const auto& run : r.level_sets) {
      const auto& ls = run.result;
      json sizes = json::array();
      for (const auto& loop : ls.loops) sizes.push_back(loop.size());
      sets.push_back({{"delta_spec", run.spec.str()},
                      {"delta", ls.delta},
                      {"loops", ls.loops.size()},
                      {"loop_sizes", sizes},
                      {"total_length", ls.total_length},
                      {"below_components", ls.below_components},
                      {"above_components", ls.above_components},
                      {"separated", ls.separated},
                      {"refined_triangles", ls.refined_triangles},
                      {"depth_used", ls.depth_used},
                      {"perturbed", ls.perturbed},
                      {"eps_level", ls.eps_level},
                      {"max_lifted_distance", run.max_distance}});
    }
    j["level_sets"] = sets;
  }
  return j;
}

int exit_code(const RunReport& report) {
  if (!report.failure) return 0;
  switch (report.failure->kind) {
    case FailureKind::Validation: return 1;
    case FailureKind::Pipeline: return 2;
    case FailureKind::Io: return 3;
  }
  return 2;
}

}  // namespace dhopf
