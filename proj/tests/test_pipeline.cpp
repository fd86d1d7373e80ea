#include "dhopf/errors.hpp"
#include "dhopf/io.hpp"
#include "dhopf/pipeline.hpp"
#include "support.hpp"

#include "catch_amalgamated.hpp"

#include <filesystem>
#include <set>

using namespace dhopf;
using dhopf::testing::fixture;

namespace {

RunConfig tetra_config() {
  RunConfig c;
  c.mesh_path = fixture("tetrahedron.off");
  c.map_path = fixture("tetrahedron_map.json");
  return c;
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("dhopf_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

nlohmann::json without_timestamps(nlohmann::json j) {
  j.erase("timestamps");
  return j;
}

}  // namespace

TEST_CASE("delta specs") {
  CHECK(parse_delta("0.5D").relative);
  CHECK(parse_delta("0.5d").value == 0.5);
  CHECK_FALSE(parse_delta("2").relative);
  CHECK(parse_delta("0.25D").str() == "0.25D");
  CHECK_THROWS_AS(parse_delta("-1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_delta("x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_delta("1DD"), std::invalid_argument);
  CHECK(parse_stage("hopf") == Stage::Hopf);
  CHECK_THROWS_AS(parse_stage("bogus"), std::invalid_argument);
}

TEST_CASE("config validation") {
  RunConfig c = tetra_config();
  c.svg = true;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = RunConfig{};
  c.generator = "bogus";
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.generator = "projection";
  c.hull_points = 3;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("full run on the tetrahedron") {
  auto c = tetra_config();
  c.deltas = {{1.0, false}};
  c.oracle_samples = 500;
  const auto r = run_pipeline(c);
  REQUIRE(r.ok());
  CHECK(exit_code(r) == 0);
  const auto j = report_json(r);
  CHECK(j["complex"]["vertices"] == 5);
  CHECK(j["complex"]["edges"] == 9);
  CHECK(j["complex"]["triangles"] == 6);
  CHECK(j["complex"]["counting_identity"] == true);
  CHECK(j["resolution"]["components"].size() == 1);
  CHECK(j["oracle"]["passed"] == true);
  CHECK(j["hopf"]["path_reaches_diagonal"] == true);
  CHECK(j["hopf"]["witness"]["residual"].get<double>() <= 1e-6);
  REQUIRE(j["level_sets"].size() == 1);
  CHECK(j["level_sets"][0]["loops"] == 2);
  CHECK(j["level_sets"][0]["separated"] == true);
}

TEST_CASE("stages stop where requested") {
  auto c = tetra_config();
  c.stage = Stage::Triangulate;
  const auto r = run_pipeline(c);
  CHECK(r.ok());
  CHECK(r.reached("induced"));
  CHECK_FALSE(r.reached("complex"));
  CHECK_FALSE(report_json(r).contains("complex"));
}

TEST_CASE("collinear images fail validation at the map stage") {
  const auto dir = scratch("collinear");
  std::filesystem::create_directories(dir);
  const auto map = dir / "map.json";
  write_text_file(map, R"({"images": [[0,0],[1,1],[2,2],[0,3]]})");
  auto c = tetra_config();
  c.map_path = map;
  const auto r = run_pipeline(c);
  REQUIRE(r.failure);
  CHECK(r.failure->stage == "map");
  CHECK(r.failure->kind == FailureKind::Validation);
  CHECK(exit_code(r) == 1);
  CHECK_FALSE(r.reached("map"));
  CHECK(r.reached("mesh"));
  CHECK(report_json(r)["map"]["violations"][0]["simplex"] == "triple (0,1,2)");
}

TEST_CASE("unreadable inputs are I/O failures") {
  auto c = tetra_config();
  c.mesh_path = fixture("missing.off");
  const auto r = run_pipeline(c);
  REQUIRE(r.failure);
  CHECK(exit_code(r) == 3);
  c.mesh_path = fixture("quad_face.off");
  CHECK(exit_code(run_pipeline(c)) == 3);
}

TEST_CASE("generated instance runs through and exports") {
  RunConfig c;
  c.generator = "random-images";
  c.seed = 7;
  c.hull_points = 20;
  c.deltas = {{0.5, true}};
  const auto dir = scratch("export");
  c.out_dir = dir;
  c.svg = c.obj = c.report = true;
  const auto r = run_pipeline(c);
  REQUIRE(r.ok());
  const auto j = report_json(r);
  CHECK(j["complex"]["counting_identity"] == true);
  CHECK(j["complex"]["edge_manifold"]["passed"] == true);
  const auto files = export_artifacts(r, c);
  for (const char* name : {"report.json", "image_triangulation.svg", "surface.obj", "surface.mtl", "complex_first.obj",
                           "complex_second.obj", "complex.json", "levelset_0.json", "levelset_0.svg"})
    CHECK(std::filesystem::exists(dir / name));
  const auto reread = nlohmann::json::parse(read_text_file(dir / "report.json"));
  CHECK(without_timestamps(reread) == without_timestamps(j));
}

TEST_CASE("no deltas means no level-set files") {
  auto c = tetra_config();
  const auto dir = scratch("nodelta");
  c.out_dir = dir;
  c.report = true;
  const auto r = run_pipeline(c);
  REQUIRE(r.ok());
  CHECK(r.level_sets.empty());
  export_artifacts(r, c);
  CHECK(std::filesystem::exists(dir / "report.json"));
  CHECK_FALSE(std::filesystem::exists(dir / "levelset_0.json"));

  c.stage = Stage::Levelset;
  const auto defaulted = run_pipeline(c);
  REQUIRE(defaulted.level_sets.size() == 1);
  CHECK(defaulted.level_sets[0].spec.str() == "0.5D");
}

TEST_CASE("identical configs give identical reports") {
  RunConfig c;
  c.generator = "projection";
  c.seed = 3;
  c.hull_points = 16;
  c.deltas = {{0.25, true}, {0.75, true}};
  const auto a = report_json(run_pipeline(c)).dump();
  const auto b = report_json(run_pipeline(c)).dump();
  CHECK(without_timestamps(nlohmann::json::parse(a)) == without_timestamps(nlohmann::json::parse(b)));
  CHECK(without_timestamps(nlohmann::json::parse(a)).dump() == without_timestamps(nlohmann::json::parse(b)).dump());
}

TEST_CASE("an unwritable output directory raises an I/O error") {
  auto c = tetra_config();
  c.stage = Stage::Validate;
  c.out_dir = "/dev/null/out";
  c.report = true;
  const auto r = run_pipeline(c);
  CHECK_THROWS_AS(export_artifacts(r, c), IoError);
}

TEST_CASE("tetrahedron SVG colors each image triangle by its two coverers") {
  auto c = tetra_config();
  c.stage = Stage::Triangulate;
  const auto dir = scratch("svg");
  c.out_dir = dir;
  c.svg = true;
  export_artifacts(run_pipeline(c), c);
  const auto svg = read_text_file(dir / "image_triangulation.svg");
  std::size_t polygons = 0, pos = 0;
  std::set<std::string> classes;
  while ((pos = svg.find("<polygon", pos)) != std::string::npos) {
    const auto end = svg.find("/>", pos);
    const auto tag = svg.substr(pos, end - pos);
    ++polygons;
    CHECK(tag.find("data-m=\"2\"") != std::string::npos);
    const auto k = tag.find("data-class=\"");
    REQUIRE(k != std::string::npos);
    classes.insert(tag.substr(k, tag.find('"', k + 12) - k));
    pos = end;
  }
  CHECK(polygons == 3);
  // Each image triangle is covered by the base and a different lateral face.
  CHECK(classes.size() == 3);
}
