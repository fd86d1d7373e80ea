#include "dhopf/cdt.hpp"
#include "dhopf/errors.hpp"
#include "support.hpp"

#include "catch_amalgamated.hpp"

#include <algorithm>
#include <map>
#include <set>

using namespace dhopf;
using dhopf::testing::fixture;

namespace {

ImagePSLG points_only(const std::vector<std::pair<long, long>>& xy) {
  ImagePSLG pslg;
  for (const auto& [x, y] : xy) pslg.points.push_back({Point2(Rational(x), Rational(y)), std::nullopt, {}});
  return pslg;
}

std::set<std::pair<std::size_t, std::size_t>> undirected_edges(const ImageTriangulation& tri) {
  std::set<std::pair<std::size_t, std::size_t>> out;
  for (const auto& t : tri.triangles)
    for (int k = 0; k < 3; ++k) out.insert(std::minmax(t[k], t[(k + 1) % 3]));
  return out;
}

// Convex hull by monotone chain (strict corners), then every point on its boundary.
struct Hull {
  Rational doubled_area;
  std::size_t boundary_points = 0;
};

Hull hull_of(const std::vector<Point2>& pts) {
  std::vector<Point2> p = pts;
  std::sort(p.begin(), p.end());
  std::vector<Point2> h;
  for (int pass = 0; pass < 2; ++pass) {
    const std::size_t base = h.size();
    for (const auto& q : p) {
      while (h.size() >= base + 2 && orient2d(h[h.size() - 2], h.back(), q) <= 0) h.pop_back();
      h.push_back(q);
    }
    h.pop_back();
    std::reverse(p.begin(), p.end());
  }
  Hull out;
  for (std::size_t i = 0; i < h.size(); ++i) out.doubled_area += h[i].x * h[(i + 1) % h.size()].y - h[(i + 1) % h.size()].x * h[i].y;
  for (const auto& q : pts) {
    for (std::size_t i = 0; i < h.size(); ++i) {
      const auto& a = h[i];
      const auto& b = h[(i + 1) % h.size()];
      if (orient2d(a, b, q) == 0 && std::min(a.x, b.x) <= q.x && q.x <= std::max(a.x, b.x) &&
          std::min(a.y, b.y) <= q.y && q.y <= std::max(a.y, b.y)) {
        ++out.boundary_points;
        break;
      }
    }
  }
  return out;
}

void check_triangulation(const ImagePSLG& pslg, const ImageTriangulation& tri) {
  const auto& P = tri.points;
  const std::size_t n = P.size();
  const auto hull = hull_of(P);
  CHECK(tri.triangles.size() == 2 * n - hull.boundary_points - 2);

  Rational area = 0;
  for (const auto& t : tri.triangles) {
    REQUIRE(orient2d(P[t[0]], P[t[1]], P[t[2]]) > 0);
    area += doubled_area(P[t[0]], P[t[1]], P[t[2]]);
  }
  CHECK(area == hull.doubled_area);

  const auto edges = undirected_edges(tri);
  std::set<std::pair<std::size_t, std::size_t>> constrained;
  for (const auto& c : pslg.constraints) {
    const auto e = std::minmax(c.a, c.b);
    constrained.insert(e);
    CHECK(edges.count(e) == 1);
  }

  // Empty circumcircle across every unconstrained interior edge.
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> opposite;
  for (const auto& t : tri.triangles)
    for (int k = 0; k < 3; ++k) opposite[std::minmax(t[k], t[(k + 1) % 3])].push_back(t[(k + 2) % 3]);
  std::size_t checked = 0;
  for (const auto& t : tri.triangles) {
    for (int k = 0; k < 3; ++k) {
      const auto e = std::minmax(t[k], t[(k + 1) % 3]);
      if (constrained.count(e)) continue;
      for (auto d : opposite[e]) {
        if (d == t[(k + 2) % 3]) continue;
        ++checked;
        CHECK(incircle(P[t[0]], P[t[1]], P[t[2]], P[d]) <= 0);
      }
    }
  }
  CHECK(checked > 0);
}

}  // namespace

TEST_CASE("tetrahedron image triangulation is the fan around the apex image") {
  const auto mesh = load_surface_mesh(fixture("tetrahedron.off"));
  const auto map = load_planar_map(fixture("tetrahedron_map.json"));
  const auto pslg = build_pslg(mesh, map);
  const auto tri = restrict_to_image(constrained_delaunay(pslg), mesh, map);
  REQUIRE(tri.triangles.size() == 3);
  CHECK(tri.num_inside() == 3);
  for (std::size_t t = 0; t < 3; ++t) {
    CHECK(tri.multiplicity(t) == 2);
    CHECK(std::count(tri.triangles[t].begin(), tri.triangles[t].end(), std::size_t{3}) == 1);
  }
}

TEST_CASE("cocircular ties prefer the diagonal with the smaller endpoint") {
  const auto a = constrained_delaunay(points_only({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
  CHECK(undirected_edges(a).count({0, 2}) == 1);
  const auto b = constrained_delaunay(points_only({{1, 0}, {0, 0}, {1, 1}, {0, 1}}));
  CHECK(undirected_edges(b).count({0, 3}) == 1);
}

TEST_CASE("a constraint overrides the Delaunay choice") {
  // Flat rhombus: Delaunay uses the short diagonal {1,3}; constrain the long one.
  auto pslg = points_only({{0, 0}, {4, -1}, {8, 0}, {4, 1}});
  CHECK(undirected_edges(constrained_delaunay(pslg)).count({1, 3}) == 1);
  pslg.constraints.push_back({0, 2, 0});
  const auto tri = constrained_delaunay(pslg);
  CHECK(undirected_edges(tri).count({0, 2}) == 1);
  CHECK(undirected_edges(tri).count({1, 3}) == 0);
}

TEST_CASE("degenerate point sets are rejected") {
  CHECK_THROWS_AS(constrained_delaunay(points_only({{0, 0}, {1, 1}, {2, 2}})), GeometryError);
  CHECK_THROWS_AS(constrained_delaunay(points_only({{0, 0}, {1, 0}, {1, 0}, {0, 1}})), GeometryError);
}

TEST_CASE("random instances: counts, area, constraints and the empty-circle property") {
  for (std::uint64_t seed = 0; seed < 25; seed += 3) {
    INFO("seed " << seed);
    const auto mesh = random_sphere_hull(testing::instance_size(seed), seed);
    const auto map = generate_map(testing::instance_kind(seed), mesh, seed);
    const auto pslg = build_pslg(mesh, map);
    const auto tri = restrict_to_image(constrained_delaunay(pslg), mesh, map);
    check_triangulation(pslg, tri);

    // Multiplicity recounted at a different interior point of each triangle.
    const auto& F = mesh.triangles();
    const auto& img = map.images;
    for (std::size_t t = 0; t < tri.triangles.size(); ++t) {
      const auto& v = tri.triangles[t];
      const Point2 q = affine_combination({Rational(1, 10), Rational(3, 10), Rational(6, 10)}, tri.points[v[0]],
                                          tri.points[v[1]], tri.points[v[2]]);
      std::size_t m = 0;
      for (const auto& f : F) {
        const int s = orient2d(img[f[0]], img[f[1]], img[f[2]]);
        m += orient2d(img[f[0]], img[f[1]], q) == s && orient2d(img[f[1]], img[f[2]], q) == s &&
             orient2d(img[f[2]], img[f[0]], q) == s;
      }
      REQUIRE(tri.multiplicity(t) == m);
      CHECK(static_cast<bool>(tri.inside[t]) == (m > 0));
    }
  }
}
