#include "dhopf/errors.hpp"
#include "dhopf/levelset.hpp"
#include "support.hpp"

#include "catch_amalgamated.hpp"

#include <algorithm>

using namespace dhopf;

namespace {

std::size_t vertex_at(const testing::Stack& s, const Point3& p) {
  for (std::size_t v = 0; v < s.ind.vertices.size(); ++v)
    if (s.ind.vertices[v].position == p) return v;
  FAIL("no induced vertex at the requested position");
  return 0;
}

void check_loops(const testing::Stack& s, const LevelSetResult& r, double delta) {
  for (const auto& loop : r.loops) {
    REQUIRE(loop.size() >= 3);
    for (const auto& q : loop) {
      CHECK((q.a - q.b).norm() == Catch::Approx(delta).epsilon(1e-6));
      CHECK(lifted_distance(s.ind, s.cx, q.triangle, q.barycentric) == Catch::Approx(delta).epsilon(1e-6));
    }
  }
}

}  // namespace

TEST_CASE("lifted distance on the tetrahedron") {
  const auto s = testing::tetrahedron();
  const std::size_t low = vertex_at(s, Point3(1, 1, 0)), high = vertex_at(s, Point3(1, 1, 4));
  const auto pv = s.cx.find_vertex(low, high);
  REQUIRE(pv);
  // A pair triangle with the off-diagonal vertex at some corner.
  for (std::size_t t = 0; t < s.cx.triangles.size(); ++t) {
    const auto& T = s.cx.triangles[t];
    for (int k = 0; k < 3; ++k) {
      std::array<double, 3> corner{0, 0, 0};
      corner[k] = 1.0;
      const double d = lifted_distance(s.ind, s.cx, t, corner);
      if (T.v[k] == *pv || s.cx.vertices[T.v[k]].a == high) CHECK(d == Catch::Approx(4.0));
      if (s.cx.vertices[T.v[k]].diagonal()) {
        CHECK(d == 0.0);
        // Midpoint of the edge from the diagonal corner to the off-diagonal one.
        for (int j = 0; j < 3; ++j) {
          if (s.cx.vertices[T.v[j]].diagonal()) continue;
          std::array<double, 3> mid{0, 0, 0};
          mid[k] = mid[j] = 0.5;
          CHECK(lifted_distance(s.ind, s.cx, t, mid) == Catch::Approx(2.0));
        }
      }
    }
  }
  const auto range = lift_distance(s.ind, s.cx, s.rc);
  CHECK(range.max == Catch::Approx(4.0));
}

TEST_CASE("tetrahedron level set at distance one") {
  const auto s = testing::tetrahedron();
  const auto r = analyze_level_set(s.ind, s.cx, s.rc, 0, 1.0);
  CHECK(r.loops.size() == 2);
  CHECK(r.below_components == 1);
  CHECK(r.above_components == 2);
  CHECK(r.separated);
  check_loops(s, r, 1.0);

  const auto only_loops = extract_level_set(s.ind, s.cx, s.rc, 0, 1.0);
  CHECK(only_loops.loops.size() == 2);
  const auto only_sep = separation_check(s.ind, s.cx, s.rc, 0, 1.0);
  CHECK(only_sep.loops.empty());
  CHECK(only_sep.separated);
}

TEST_CASE("level sets near both ends of the range") {
  const auto s = testing::tetrahedron();
  const double max = lift_distance(s.ind, s.cx, s.rc, 0).max;
  const auto low = analyze_level_set(s.ind, s.cx, s.rc, 0, 1e-3);
  CHECK(low.separated);
  CHECK_FALSE(low.loops.empty());
  check_loops(s, low, 1e-3);
  // Near the diagonal both factors are close to a common point.
  for (const auto& loop : low.loops)
    for (const auto& q : loop) CHECK((q.a - q.b).norm() < 2e-3);

  const auto high = analyze_level_set(s.ind, s.cx, s.rc, 0, max - 1e-6);
  CHECK(high.separated);
  CHECK(high.above_components >= 1);
  CHECK_THROWS_AS(analyze_level_set(s.ind, s.cx, s.rc, 0, max), GeometryError);
  CHECK_THROWS_AS(analyze_level_set(s.ind, s.cx, s.rc, 0, 0.0), GeometryError);
}

TEST_CASE("level sets on random instances") {
  for (std::uint64_t seed : {2, 5, 11, 20}) {
    INFO("seed " << seed);
    const auto s = testing::instance(seed);
    const auto base = find_base_component(s.ind, s.cx, s.rc);
    const auto range = lift_distance(s.ind, s.cx, s.rc, base.component);
    for (double f : {0.25, 0.5, 0.75}) {
      const double delta = f * range.max;
      const auto r = analyze_level_set(s.ind, s.cx, s.rc, base.component, delta);
      CHECK_FALSE(r.loops.empty());
      CHECK(r.separated);
      CHECK(r.below_components >= 1);
      CHECK(r.above_components >= 1);
      check_loops(s, r, delta);
      for (const auto& loop : r.loops)
        for (const auto& q : loop) CHECK(s.rc.triangle_component[q.triangle] == base.component);
    }
  }
}
