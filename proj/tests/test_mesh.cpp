#include "dhopf/errors.hpp"
#include "dhopf/generators.hpp"
#include "dhopf/mesh.hpp"
#include "support.hpp"

#include "catch_amalgamated.hpp"

#include <set>

using namespace dhopf;
using dhopf::testing::fixture;

TEST_CASE("tetrahedron and octahedron load as valid convex surfaces") {
  const auto tet = load_surface_mesh(fixture("tetrahedron.off"));
  CHECK(tet.num_vertices() == 4);
  CHECK(tet.num_triangles() == 4);
  CHECK(tet.num_edges() == 6);
  CHECK(validate_surface(tet).passed());

  const auto oct = load_surface_mesh(fixture("octahedron.off"));
  CHECK(oct.num_vertices() == 6);
  CHECK(oct.num_triangles() == 8);
  CHECK(oct.num_edges() == 12);
  CHECK(validate_surface(oct).passed());
  for (const auto& e : oct.edges()) CHECK(e.faces.size() == 2);
}

TEST_CASE("windings end up outward") {
  for (const char* name : {"tetrahedron.off", "octahedron.off"}) {
    const auto mesh = load_surface_mesh(fixture(name));
    const Eigen::Vector3d c = mesh.centroid();
    const Point3 center(from_double(c.x()), from_double(c.y()), from_double(c.z()));
    for (const auto& f : mesh.triangles())
      CHECK(orient3d(mesh.vertices()[f[0]], mesh.vertices()[f[1]], mesh.vertices()[f[2]], center) < 0);
  }
}

TEST_CASE("inward windings are flipped on load") {
  const std::string inward =
      "OFF\n4 4 0\n0 0 0\n4 0 0\n0 4 0\n1 1 4\n3 0 1 2\n3 0 3 1\n3 1 3 2\n3 2 3 0\n";
  const auto mesh = parse_off(inward);
  CHECK(mesh.flipped_on_load());
  CHECK(validate_surface(mesh).passed());
}

TEST_CASE("malformed inputs are rejected with parse errors") {
  CHECK_THROWS_WITH(load_surface_mesh(fixture("quad_face.off")), Catch::Matchers::ContainsSubstring("non-triangular face"));
  CHECK_THROWS_AS(parse_off("OFF\n3 1 0\n0 0 0\n1 0 0\n"), ParseError);
  CHECK_THROWS_AS(parse_off("PLY\n"), ParseError);
  CHECK_THROWS_AS(parse_mesh_json("{\"vertices\": [[0,0,0]]}"), ParseError);
  CHECK_THROWS_AS(load_surface_mesh(fixture("does_not_exist.off")), IoError);
}

TEST_CASE("JSON meshes read decimals exactly") {
  const auto mesh = parse_mesh_json(
      R"({"vertices": [[0,0,0],[0.1,0,0],[0,0.1,0],[0,0,0.1]], "triangles": [[0,2,1],[0,1,3],[1,2,3],[2,0,3]]})");
  CHECK(mesh.vertices()[1].x == Rational(1, 10));
  CHECK(validate_surface(mesh).passed());
}

TEST_CASE("surface checks name the offending simplex") {
  const auto dented = load_surface_mesh(fixture("dented.off"));
  const auto report = validate_surface(dented);
  REQUIRE(report.has("non-convex"));
  bool named = false;
  for (const auto& v : report.violations)
    if (v.code == "non-convex" && v.simplex.rfind("face ", 0) == 0) named = true;
  CHECK(named);
  CHECK(validate_surface(dented, {false, true}).passed());

  // Drop one face of the tetrahedron: three boundary edges.
  const auto tet = load_surface_mesh(fixture("tetrahedron.off"));
  auto faces = tet.triangles();
  faces.pop_back();
  const auto open = validate_surface(SurfaceMesh(tet.vertices(), faces));
  CHECK(open.has("boundary-edge"));
  std::size_t boundary = 0;
  for (const auto& v : open.violations) boundary += v.code == "boundary-edge";
  CHECK(boundary == 3);
}

TEST_CASE("ray casting from interior points") {
  const auto tet = load_surface_mesh(fixture("tetrahedron.off"));
  const Eigen::Vector3d c(1.25, 1.25, 1.0);
  const auto hits = surface_raycast(tet, c, Eigen::Vector3d(0, 0, 1));
  CHECK(hits[0].point.z() == Catch::Approx(0.0).margin(1e-12));
  CHECK(hits[0].t < 0.0);
  CHECK(hits[1].t > 0.0);
  // The base is face 0 ({0,2,1}).
  CHECK(hits[0].triangle == 0);

  const auto oct = load_surface_mesh(fixture("octahedron.off"));
  const auto x = surface_raycast(oct, Eigen::Vector3d::Zero(), Eigen::Vector3d(1, 0, 0));
  CHECK(x[0].point.x() == Catch::Approx(-1.0));
  CHECK(x[1].point.x() == Catch::Approx(1.0));
  CHECK_THROWS_WITH(surface_raycast(oct, Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 0, 1)),
                    Catch::Matchers::ContainsSubstring("origin not interior"));

  // Reversing the direction swaps the two hits.
  const Eigen::Vector3d p(0.1, -0.2, 0.05), u = Eigen::Vector3d(0.3, 0.7, -0.2).normalized();
  const auto fwd = surface_raycast(oct, p, u);
  const auto back = surface_raycast(oct, p, -u);
  CHECK((fwd[0].point - back[1].point).norm() < 1e-12);
  CHECK((fwd[1].point - back[0].point).norm() < 1e-12);

  // Hit points lie on the plane |x| + |y| + |z| = 1.
  for (const auto& h : fwd) CHECK(h.point.cwiseAbs().sum() == Catch::Approx(1.0));
  const ConvexRaycaster caster(oct);
  CHECK(caster.chord_length(p, u) == Catch::Approx((fwd[1].point - fwd[0].point).norm()));
  CHECK((caster.antipode(p, fwd[1].point) - fwd[0].point).norm() < 1e-12);
}

TEST_CASE("convex hulls of random sphere points are valid surfaces") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto mesh = random_sphere_hull(8 + seed * 3, seed);
    INFO("seed " << seed);
    CHECK(validate_surface(mesh).passed());
    CHECK(static_cast<long>(mesh.num_vertices()) - static_cast<long>(mesh.num_edges()) +
              static_cast<long>(mesh.num_triangles()) ==
          2);
  }
}
