#include "dhopf/errors.hpp"
#include "dhopf/hopf.hpp"
#include "support.hpp"

#include "catch_amalgamated.hpp"

#include <Eigen/Geometry>

#include <cmath>

using namespace dhopf;
using dhopf::testing::fixture;

namespace {

// Angle between a - p and p - b from the dot product, independent of collinearity_deviation.
double bend_angle(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& p) {
  const Eigen::Vector3d u = (a - p).normalized(), v = (p - b).normalized();
  return std::atan2(u.cross(v).norm(), u.dot(v));
}

void check_witness(const testing::Stack& s, std::uint64_t seed) {
  std::vector<Eigen::Vector3d> extra;
  for (std::size_t v = 0; v < s.ind.vertices.size(); ++v) extra.push_back(s.ind.position(v));
  CenterOptions copt;
  copt.seed = seed;
  const auto center = estimate_center(s.mesh, extra, copt);
  const auto base = find_base_component(s.ind, s.cx, s.rc);
  auto w = find_equivariant_pair(s.ind, s.cx, s.rc, base.component, center.center);
  path_to_diagonal(s.ind, s.cx, s.rc, w);
  const Eigen::Vector3d& p = center.center;

  CHECK(w.residual <= 1e-6);
  CHECK(bend_angle(w.a, w.b, p) <= 1e-5);
  CHECK((w.a - p).dot(w.b - p) < 0.0);
  const ConvexRaycaster caster(s.mesh);
  CHECK((caster.antipode(p, w.a) - w.b).norm() <= 1e-5 * center.d_hat);

  // The witness sits in its pair triangle at the stated weights.
  const auto corners = pair_corners(s.ind, s.cx, w.triangle);
  Eigen::Vector3d a = Eigen::Vector3d::Zero(), b = Eigen::Vector3d::Zero();
  for (int k = 0; k < 3; ++k) {
    CHECK(w.barycentric[k] >= -1e-12);
    a += w.barycentric[k] * corners.a[k];
    b += w.barycentric[k] * corners.b[k];
  }
  CHECK((a - w.a).norm() < 1e-9);
  CHECK((b - w.b).norm() < 1e-9);
  CHECK(s.rc.triangle_component[w.triangle] == base.component);

  // The path walks edges of the complex and ends on the diagonal.
  REQUIRE(w.path.size() >= 2);
  CHECK(w.path.back().diagonal);
  CHECK(w.path.back().a == w.path.back().b);
  for (std::size_t i = 1; i < w.path.size(); ++i) {
    REQUIRE(w.path[i].vertex);
    if (i >= 2) CHECK(s.rc.find_edge(*w.path[i - 1].vertex, *w.path[i].vertex));
  }
}

}  // namespace

TEST_CASE("octahedron center and minimal chord") {
  const auto oct = load_surface_mesh(fixture("octahedron.off"));
  const auto center = estimate_center(oct, {});
  CHECK(center.d_hat == Catch::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-3));
  // Opposite faces are parallel, so the maximiser is a plateau around the origin,
  // not a single point. Check the returned center by a dense sweep of directions.
  const ConvexRaycaster caster(oct);
  REQUIRE(caster.interior(center.center));
  double sweep = 1e9;
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < 20000; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / 20000.0, r = std::sqrt(1.0 - z * z);
    sweep = std::min(sweep, caster.chord_length(center.center, Eigen::Vector3d(r * std::cos(golden * i), r * std::sin(golden * i), z)));
  }
  CHECK(sweep >= center.d_hat * (1.0 - 1e-3));
  CHECK(sweep <= 2.0 / std::sqrt(3.0) * (1.0 + 1e-4));
  // Minimal chord through the origin is along a body diagonal.
  CHECK(caster.chord_length(Eigen::Vector3d::Zero(), Eigen::Vector3d(1, 1, 1)) == Catch::Approx(2.0 / std::sqrt(3.0)));
  CHECK(refined_min_chord(caster, Eigen::Vector3d::Zero(), {Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0.4, 0.3, 0.3)}) ==
        Catch::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-6));
}

TEST_CASE("collinearity deviation") {
  const Eigen::Vector3d p(0, 0, 0);
  CHECK(collinearity_deviation({1, 0, 0}, {-2, 0, 0}, p) == Catch::Approx(0.0).margin(1e-15));
  CHECK(collinearity_deviation({1, 0, 0}, {0, 1, 0}, p) == Catch::Approx(1.0));
}

TEST_CASE("tetrahedron witness and path") {
  const auto s = testing::tetrahedron();
  check_witness(s, 0);
  std::vector<Eigen::Vector3d> extra;
  const auto center = estimate_center(s.mesh, extra);
  auto w = find_equivariant_pair(s.ind, s.cx, s.rc, 0, center.center);
  path_to_diagonal(s.ind, s.cx, s.rc, w);
  CHECK(w.path.size() <= 4);
}

TEST_CASE("witness on random instances") {
  for (std::uint64_t seed : {1, 2, 9, 14}) {
    INFO("seed " << seed);
    check_witness(testing::instance(seed), seed);
  }
}

TEST_CASE("an unreachable tolerance raises a search error") {
  const auto s = testing::tetrahedron();
  const auto center = estimate_center(s.mesh, {});
  SearchOptions opt;
  opt.tolerance = 1e-300;
  opt.max_depth = 2;
  opt.grid = 2;
  opt.candidates = 1;
  CHECK_THROWS_AS(find_equivariant_pair(s.ind, s.cx, s.rc, 0, center.center, opt), SearchError);
}
