#include "dhopf/errors.hpp"
#include "dhopf/neighbor_complex.hpp"
#include "support.hpp"

#include "catch_amalgamated.hpp"

#include <map>
#include <set>

using namespace dhopf;

namespace {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

// Every link of a resolved vertex is one cycle, rebuilt from the triangle list alone.
bool links_are_single_cycles(const ResolvedComplex& rc, std::string& why) {
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> link(rc.num_vertices());
  for (const auto& t : rc.triangles)
    for (int k = 0; k < 3; ++k) link[t[k]].emplace_back(t[(k + 1) % 3], t[(k + 2) % 3]);
  for (std::size_t v = 0; v < link.size(); ++v) {
    std::map<std::size_t, std::vector<std::size_t>> adj;
    for (const auto& [a, b] : link[v]) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    if (adj.empty()) {
      why = "vertex " + std::to_string(v) + " has no triangles";
      return false;
    }
    for (const auto& [w, nb] : adj)
      if (nb.size() != 2) {
        why = "vertex " + std::to_string(v) + ": link vertex of degree " + std::to_string(nb.size());
        return false;
      }
    // Walk one cycle; it must visit every link vertex.
    const std::size_t start = adj.begin()->first;
    std::size_t prev = npos, cur = start, steps = 0;
    do {
      const auto& nb = adj[cur];
      const std::size_t next = nb[0] != prev ? nb[0] : nb[1];
      prev = cur;
      cur = next;
      ++steps;
    } while (cur != start && steps <= adj.size());
    if (steps != adj.size()) {
      why = "vertex " + std::to_string(v) + ": link has more than one cycle";
      return false;
    }
  }
  return true;
}

// Edge degrees counted from the triangle corners only.
std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_degrees(const NeighborComplex& cx) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> deg;
  for (const auto& t : cx.triangles)
    for (int k = 0; k < 3; ++k) ++deg[std::minmax(t.v[k], t.v[(k + 1) % 3])];
  return deg;
}

}  // namespace

TEST_CASE("tetrahedron complex matches the hand enumeration") {
  const auto s = testing::tetrahedron();
  CHECK(s.cx.vertices.size() == 5);
  CHECK(s.cx.edges.size() == 9);
  CHECK(s.cx.triangles.size() == 6);
  CHECK(s.cx.euler_characteristic() == 2);
  CHECK(s.cx.num_diagonal_vertices() == 3);
  const auto report = verify_edge_manifold(s.ind, s.cx);
  CHECK(report.passed());
  CHECK(report.diagonal + report.no_folding + report.one_folding == 9);
  REQUIRE(s.rc.components.size() == 1);
  CHECK(s.rc.components[0].euler == 2);
  CHECK(s.rc.components[0].orientable);
  CHECK(s.rc.components[0].degree_mod2 == 1);
  CHECK(s.rc.components[0].meets_diagonal);
  CHECK(s.rc.split_vertices == 0);
  const auto base = find_base_component(s.ind, s.cx, s.rc);
  CHECK(base.component == 0);
}

TEST_CASE("random instances: counting identity, edge manifold, links and the swap") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    INFO("seed " << seed);
    const auto s = testing::instance(seed);

    std::size_t expected = 0;
    for (std::size_t t = 0; t < s.tri.triangles.size(); ++t) {
      const std::size_t m = s.tri.multiplicity(t);
      expected += m * (m > 0 ? m - 1 : 0);
    }
    CHECK(s.cx.triangles.size() == expected);

    const auto report = verify_edge_manifold(s.ind, s.cx);
    CHECK(report.passed());
    for (const auto& e : report.edges) CHECK(e.kind != EdgeCase::Invalid);
    for (const auto& [e, deg] : edge_degrees(s.cx)) REQUIRE(deg == 2);
    CHECK(edge_degrees(s.cx).size() == s.cx.edges.size());

    std::string why;
    CHECK(links_are_single_cycles(s.rc, why));
    INFO(why);

    // The swap [A,B] -> [B,A] is a fixed-point free involution on triangles.
    for (std::size_t t = 0; t < s.cx.triangles.size(); ++t) {
      const auto& T = s.cx.triangles[t];
      const auto u = s.cx.find_triangle(T.second, T.first);
      REQUIRE(u);
      CHECK(*u != t);
      for (int k = 0; k < 3; ++k) {
        const auto& p = s.cx.vertices[T.v[k]];
        const auto& q = s.cx.vertices[s.cx.triangles[*u].v[k]];
        CHECK((p.a == q.b && p.b == q.a));
        CHECK(s.rc.swap_vertex[s.rc.triangles[t][k]] == s.rc.triangles[*u][k]);
      }
    }

    // Component bookkeeping adds up and the degree is the same over every induced triangle.
    long chi = 0;
    std::size_t triangles = 0;
    for (const auto& c : s.rc.components) {
      chi += c.euler;
      triangles += c.num_triangles;
      CHECK(c.euler <= 2);
      if (c.orientable) CHECK(c.euler % 2 == 0);
    }
    CHECK(triangles == s.cx.triangles.size());
    CHECK(chi == static_cast<long>(s.rc.num_vertices()) - static_cast<long>(s.rc.edges.size()) +
                     static_cast<long>(s.rc.triangles.size()));
    for (std::size_t c = 0; c < s.rc.components.size(); ++c) {
      std::vector<std::size_t> over(s.ind.triangles.size(), 0);
      for (std::size_t t = 0; t < s.cx.triangles.size(); ++t)
        if (s.rc.triangle_component[t] == c) ++over[s.cx.triangles[t].first];
      for (std::size_t x = 0; x < over.size(); ++x) REQUIRE(static_cast<int>(over[x] % 2) == s.rc.components[c].degree_mod2);
    }

    const auto base = find_base_component(s.ind, s.cx, s.rc);
    CHECK(s.rc.components[base.component].degree_mod2 == 1);
    CHECK(s.rc.components[base.component].meets_diagonal);
  }
}

TEST_CASE("a missing pair triangle is reported") {
  const auto s = testing::instance(3);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& t : s.cx.triangles) pairs.emplace_back(t.first, t.second);
  pairs.erase(pairs.begin() + static_cast<long>(pairs.size() / 2));
  const auto partial = assemble_complex(s.ind, pairs);
  CHECK(partial.triangles.size() + 1 == s.cx.triangles.size());
  const auto report = verify_edge_manifold(s.ind, partial);
  CHECK_FALSE(report.passed());
  CHECK(report.violations.size() >= 3);
  CHECK_THROWS_AS(resolve_singularities(s.ind, partial), GeometryError);
}

TEST_CASE("pairs must share an image triangle") {
  const auto s = testing::tetrahedron();
  std::size_t a = 0, b = 1;
  while (s.ind.triangles[a].image_triangle == s.ind.triangles[b].image_triangle) ++b;
  CHECK_THROWS_AS(assemble_complex(s.ind, {{a, b}}), GeometryError);
}

TEST_CASE("the torus fixture resolves to one torus") {
  const testing::Stack s(load_surface_mesh(testing::fixture("torus_resolution.off")),
                         load_planar_map(testing::fixture("torus_resolution_map.json")));
  CHECK(s.cx.triangles.size() == 196);
  CHECK(s.cx.euler_characteristic() == -2);
  CHECK(s.rc.split_vertices == 2);
  REQUIRE(s.rc.components.size() == 1);
  CHECK(s.rc.components[0].euler == 0);
  CHECK(s.rc.components[0].orientable);
  CHECK(s.rc.components[0].genus == 1);
  std::string why;
  CHECK(links_are_single_cycles(s.rc, why));
}
