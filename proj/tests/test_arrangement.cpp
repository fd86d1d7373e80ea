#include "dhopf/arrangement.hpp"
#include "dhopf/errors.hpp"
#include "dhopf/generators.hpp"
#include "support.hpp"

#include "catch_amalgamated.hpp"

#include <set>

using namespace dhopf;
using dhopf::testing::fixture;

namespace {

// Two closed segments meet in a point other than a shared endpoint.
bool proper_crossing(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
  if (a == c || a == d || b == c || b == d) return false;
  const int o1 = orient2d(a, b, c), o2 = orient2d(a, b, d), o3 = orient2d(c, d, a), o4 = orient2d(c, d, b);
  return o1 * o2 < 0 && o3 * o4 < 0;
}

}  // namespace

TEST_CASE("tetrahedron arrangement has no crossings") {
  const auto mesh = load_surface_mesh(fixture("tetrahedron.off"));
  const auto map = load_planar_map(fixture("tetrahedron_map.json"));
  CHECK(check_general_position(mesh, map).passed());
  const auto pslg = build_pslg(mesh, map);
  CHECK(pslg.points.size() == 4);
  CHECK(pslg.constraints.size() == 6);
}

TEST_CASE("map text format") {
  const auto map = parse_planar_map("# images\n1 4 0\n0 0 0\n2 0 4\n3 1/2 1.5\n");
  REQUIRE(map.images.size() == 4);
  CHECK(map.images[3].x == Rational(1, 2));
  CHECK(map.images[3].y == Rational(3, 2));
  CHECK_THROWS_AS(parse_planar_map("0 0 0\n2 1 1\n"), ParseError);
  CHECK_THROWS_AS(parse_planar_map("0 0 0\n0 1 1\n"), ParseError);
}

TEST_CASE("collinear images name the triple") {
  const auto mesh = load_surface_mesh(fixture("tetrahedron.off"));
  const auto map = parse_planar_map(R"({"images": [[0,0],[1,1],[2,2],[0,3]]})");
  const auto report = check_general_position(mesh, map);
  REQUIRE(report.has("collinear-images"));
  CHECK(report.violations.front().simplex == "triple (0,1,2)");

  const auto short_map = parse_planar_map(R"({"images": [[0,0],[1,0],[0,1]]})");
  CHECK(check_general_position(mesh, short_map).has("image-count"));
}

TEST_CASE("crossing points match a brute-force pair count") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const auto mesh = random_sphere_hull(10 + seed, seed);
    const auto map = generate_map(seed % 2 ? "projection" : "random-images", mesh, seed);
    const auto pslg = build_pslg(mesh, map);
    INFO("seed " << seed);

    const auto& E = mesh.edges();
    const auto& img = map.images;
    std::size_t crossings = 0;
    for (std::size_t i = 0; i < E.size(); ++i)
      for (std::size_t j = i + 1; j < E.size(); ++j)
        crossings += proper_crossing(img[E[i].v0], img[E[i].v1], img[E[j].v0], img[E[j].v1]);

    std::size_t crossing_points = 0, crossing_pairs = 0;
    for (const auto& p : pslg.points) {
      if (p.mesh_vertex) continue;
      ++crossing_points;
      crossing_pairs += p.crossings.size();
    }
    // General position: every crossing point is the meeting of exactly two edge images.
    CHECK(crossing_points == crossings);
    CHECK(crossing_pairs == crossings);
    // Each crossing splits two edges: constraints = edges + 2 * crossings.
    CHECK(pslg.constraints.size() == E.size() + 2 * crossings);

    // Constraints chain each edge image from v0 to v1.
    for (std::size_t e = 0; e < E.size(); ++e) {
      const auto& chain = pslg.edge_points[e];
      REQUIRE(chain.size() >= 2);
      CHECK(pslg.points[chain.front()].mesh_vertex == E[e].v0);
      CHECK(pslg.points[chain.back()].mesh_vertex == E[e].v1);
      for (std::size_t k = 1; k + 1 < chain.size(); ++k)
        CHECK(orient2d(img[E[e].v0], img[E[e].v1], pslg.points[chain[k]].position) == 0);
    }
  }
}
