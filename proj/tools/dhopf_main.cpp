// Command-line driver: each subcommand runs the pipeline up to that stage.

#include "dhopf/errors.hpp"
#include "dhopf/pipeline.hpp"

#include "CLI11.hpp"

#include <iostream>

namespace {

void print_summary(const dhopf::RunReport& r) {
  const auto j = dhopf::report_json(r);
  std::cout << "completed:";
  for (const auto& s : r.completed) std::cout << ' ' << s;
  std::cout << "\n";
  if (r.reached("mesh"))
    std::cout << "mesh: " << r.mesh.num_vertices() << " vertices, " << r.mesh.num_triangles() << " triangles\n";
  if (r.reached("cdt"))
    std::cout << "image triangulation: " << r.tri.triangles.size() << " triangles, " << r.tri.num_inside()
              << " inside, sum m(m-1) = " << r.expected_pair_triangles << "\n";
  if (r.reached("induced"))
    std::cout << "induced triangulation: " << r.ind.vertices.size() << " vertices, " << r.ind.triangles.size()
              << " triangles\n";
  if (r.reached("complex")) {
    std::cout << "complex: V=" << r.cx.vertices.size() << " E=" << r.cx.edges.size() << " F=" << r.cx.triangles.size()
              << " chi=" << r.cx.euler_characteristic() << ", edge-manifold " << (r.manifold.passed() ? "ok" : "FAILED")
              << " (diagonal " << r.manifold.diagonal << ", no folding " << r.manifold.no_folding << ", one folding "
              << r.manifold.one_folding << ")\n";
    std::cout << "resolution: " << r.rc.components.size() << " component(s), " << r.rc.split_vertices
              << " split vertices\n";
    for (const auto& c : j["resolution"]["components"])
      std::cout << "  component " << c["id"] << ": chi=" << c["euler"] << " orientable=" << c["orientable"]
                << " degree_mod2=" << c["degree_mod2"] << " meets_diagonal=" << c["meets_diagonal"] << "\n";
  }
  if (r.oracle)
    std::cout << "oracle: " << (r.oracle->passed() ? "pass" : "FAIL") << " (" << r.oracle->pairs_checked
              << " preimage pairs, " << r.oracle->converse_checked << " pair points)\n";
  if (r.center) std::cout << "center: D_hat = " << r.center->d_hat << "\n";
  if (r.witness)
    std::cout << "witness: residual " << r.witness->residual << ", |a-b| = " << (r.witness->a - r.witness->b).norm()
              << ", path of " << r.witness->path.size() << " points to the diagonal\n";
  for (const auto& run : r.level_sets)
    std::cout << "level set delta=" << run.result.delta << " (" << run.spec.str() << "): " << run.result.loops.size()
              << " loop(s), below " << run.result.below_components << ", above " << run.result.above_components
              << ", separated " << (run.result.separated ? "yes" : "no") << "\n";
  if (r.failure) std::cerr << "error in stage '" << r.failure->stage << "': " << r.failure->message << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Antipodal f-neighbors on convex polyhedral surfaces"};
  app.set_config("--config", "", "TOML file with option values; command-line flags take precedence");
  app.require_subcommand(1);

  dhopf::RunConfig config;
  std::string mesh, map, out_dir;
  std::vector<std::string> deltas;
  app.add_option("--mesh", mesh, "surface mesh (.off or .json)");
  app.add_option("--map", map, "vertex images (.json or text)");
  app.add_option("--gen", config.generator, "map generator when no map file is given")
      ->check(CLI::IsMember({"projection", "random-images"}));
  app.add_option("--hull", config.hull_points, "points of the random hull used when no mesh file is given");
  app.add_option("--seed", config.seed, "seed for the generators and the center search");
  app.add_option("--delta", deltas, "level values, absolute or as a fraction of D_hat (\"0.5D\")")->delimiter(',');
  app.add_option("--out-dir", out_dir, "directory for exported files");
  app.add_flag("--svg", config.svg, "write the image triangulation and level sets as SVG");
  app.add_flag("--obj", config.obj, "write the induced surface and complex projections as OBJ");
  app.add_flag("--report", config.report, "write report.json and level-set JSON");
  app.add_option("--tol-residual", config.tol_residual, "tolerance of the equivariant search");
  app.add_option("--tol-level", config.tol_level, "level-set resolution (0 = 1e-4 D_hat)");
  app.add_option("--max-depth", config.max_depth, "level-set subdivision cap")->check(CLI::Range(0, 20));
  app.add_option("--oracle-samples", config.oracle_samples, "brute-force check sample count (0 = off)");

  const std::vector<std::pair<std::string, std::string>> stages = {
      {"validate", "check the mesh and the general position of the map"},
      {"triangulate", "image triangulation and induced triangulation"},
      {"complex", "complex of f-neighbors, its edge-manifold check and components"},
      {"hopf", "center estimate, equivariant pair and path to the diagonal"},
      {"levelset", "level sets of the pair distance and their separation"},
      {"all", "every stage"}};
  for (const auto& [name, help] : stages) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code == 0) return 0;
    if (dynamic_cast<const CLI::FileError*>(&e) || dynamic_cast<const CLI::ConfigError*>(&e)) return 3;
    return 1;
  }

  try {
    config.stage = dhopf::parse_stage(app.get_subcommands().front()->get_name());
    if (!mesh.empty()) config.mesh_path = mesh;
    if (!map.empty()) config.map_path = map;
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (config.generator.empty() && !config.map_path) config.generator = "projection";
    for (const auto& d : deltas) config.deltas.push_back(dhopf::parse_delta(d));
    config.validate();
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 1;
  }

  const auto report = dhopf::run_pipeline(config);
  print_summary(report);
  try {
    for (const auto& path : dhopf::export_artifacts(report, config)) std::cout << "wrote " << path.string() << "\n";
  } catch (const dhopf::IoError& e) {
    std::cerr << "export failed: " << e.what() << "\n";
    return 3;
  }
  return dhopf::exit_code(report);
}
