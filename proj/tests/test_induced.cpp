#include "dhopf/induced.hpp"
#include "support.hpp"

#include "catch_amalgamated.hpp"

#include <algorithm>

using namespace dhopf;

namespace {

std::array<Rational, 3> vector_area(const Point3& a, const Point3& b, const Point3& c) { return cross(a, b, c); }

}  // namespace

TEST_CASE("tetrahedron base splits at the point over the apex image") {
  const auto s = testing::tetrahedron();
  REQUIRE(s.ind.triangles.size() == 6);
  CHECK(s.ind.vertices.size() == 5);
  const Point3 split(1, 1, 0);
  const auto it = std::find_if(s.ind.vertices.begin(), s.ind.vertices.end(),
                               [&](const InducedVertex& v) { return v.position == split; });
  REQUIRE(it != s.ind.vertices.end());
  CHECK(s.tri.points[it->image_point] == Point2(1, 1));
  std::size_t base_children = 0;
  for (const auto& t : s.ind.triangles) base_children += t.parent == 0;
  CHECK(base_children == 3);
  CHECK(validate_surface(induced_surface(s.ind), {false, true}).passed());
}

TEST_CASE("induced triangles partition their parents exactly") {
  for (std::uint64_t seed = 0; seed < 25; seed += 2) {
    INFO("seed " << seed);
    const auto s = testing::instance(seed);
    const auto& P = s.mesh.vertices();
    const auto& F = s.mesh.triangles();
    const auto& img = s.map.images;

    std::vector<Rational> image_area(F.size());
    std::vector<std::array<Rational, 3>> area(F.size(), {Rational(0), Rational(0), Rational(0)});
    for (const auto& t : s.ind.triangles) {
      const auto& v = t.v;
      const auto& q = s.tri.triangles[t.image_triangle];
      // Corner k of the induced triangle maps to corner k of its image.
      const auto& f = F[t.parent];
      for (int k = 0; k < 3; ++k) {
        REQUIRE(s.ind.vertices[v[k]].image_point == q[k]);
        const auto w = barycentric(s.tri.points[q[k]], img[f[0]], img[f[1]], img[f[2]]);
        REQUIRE(affine_combination(w, P[f[0]], P[f[1]], P[f[2]]) == s.ind.vertices[v[k]].position);
      }
      image_area[t.parent] += abs(doubled_area(s.tri.points[q[0]], s.tri.points[q[1]], s.tri.points[q[2]]));
      const auto o = t.outward();
      const auto a = vector_area(s.ind.vertices[o[0]].position, s.ind.vertices[o[1]].position,
                                 s.ind.vertices[o[2]].position);
      for (int c = 0; c < 3; ++c) area[t.parent][c] += a[c];
    }
    for (std::size_t f = 0; f < F.size(); ++f) {
      CHECK(image_area[f] == abs(doubled_area(img[F[f][0]], img[F[f][1]], img[F[f][2]])));
      CHECK(area[f] == vector_area(P[F[f][0]], P[F[f][1]], P[F[f][2]]));
    }
    CHECK(validate_surface(induced_surface(s.ind), {false, true}).passed());
  }
}
