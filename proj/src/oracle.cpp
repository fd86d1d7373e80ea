#include "dhopf/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace dhopf {

namespace {

constexpr std::size_t kMaxCounterexamples = 10;

struct Box {
  double x0, y0, x1, y1;
  bool contains(double x, double y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }
};

Box box_of(const Point2& a, const Point2& b, const Point2& c) {
  const double slack = 1e-9 * (1 + std::max({std::abs(a.ax), std::abs(a.ay), std::abs(b.ax), std::abs(b.ay),
                                             std::abs(c.ax), std::abs(c.ay)}));
  return {std::min({a.ax, b.ax, c.ax}) - slack, std::min({a.ay, b.ay, c.ay}) - slack,
          std::max({a.ax, b.ax, c.ax}) + slack, std::max({a.ay, b.ay, c.ay}) + slack};
}

std::string describe(const Point2& q) { return "(" + to_string(q.x) + ", " + to_string(q.y) + ")"; }

// Projection that drops the dominant axis of the normal, keeping a nondegenerate triangle.
Point2 drop_axis(const Point3& p, int axis) {
  if (axis == 0) return {p.y, p.z};
  if (axis == 1) return {p.x, p.z};
  return {p.x, p.y};
}

void fail(OracleReport& report, std::string message) {
  ++report.failures;
  if (report.counterexamples.size() < kMaxCounterexamples) report.counterexamples.push_back(std::move(message));
}

}  // namespace

bool evaluate_map(const SurfaceMesh& mesh, const PlanarMap& map, const Point3& x, Point2& image) {
  const auto& P = mesh.vertices();
  for (const auto& f : mesh.triangles()) {
    const double slack = 1e-9;
    bool near = true;
    for (int c = 0; c < 3 && near; ++c) {
      const double lo = std::min({P[f[0]].approx()[c], P[f[1]].approx()[c], P[f[2]].approx()[c]});
      const double hi = std::max({P[f[0]].approx()[c], P[f[1]].approx()[c], P[f[2]].approx()[c]});
      const double xc = x.approx()[c];
      near = xc >= lo - slack * (1 + std::abs(lo)) && xc <= hi + slack * (1 + std::abs(hi));
    }
    if (!near) continue;
    if (orient3d(P[f[0]], P[f[1]], P[f[2]], x) != 0) continue;
    const auto n = cross(P[f[0]], P[f[1]], P[f[2]]);
    int axis = 0;
    for (int c = 1; c < 3; ++c)
      if (abs(n[c]) > abs(n[axis])) axis = c;
    const auto w = barycentric(drop_axis(x, axis), drop_axis(P[f[0]], axis), drop_axis(P[f[1]], axis),
                               drop_axis(P[f[2]], axis));
    if (sgn(w[0]) < 0 || sgn(w[1]) < 0 || sgn(w[2]) < 0) continue;
    image = affine_combination(w, map.images[f[0]], map.images[f[1]], map.images[f[2]]);
    return true;
  }
  return false;
}

OracleReport oracle_check(const SurfaceMesh& mesh, const PlanarMap& map, const ImageTriangulation& tri,
                          const InducedTriangulation& ind, const NeighborComplex& cx, std::size_t n,
                          std::uint64_t seed) {
  OracleReport report;
  std::mt19937_64 rng(seed);
  const auto& P = mesh.vertices();
  const auto& F = mesh.triangles();
  const auto& img = map.images;

  std::vector<Box> face_box(F.size());
  std::vector<int> face_sign(F.size());
  for (std::size_t i = 0; i < F.size(); ++i) {
    face_box[i] = box_of(img[F[i][0]], img[F[i][1]], img[F[i][2]]);
    face_sign[i] = orient2d(img[F[i][0]], img[F[i][1]], img[F[i][2]]);
  }
  std::vector<Box> tri_box(tri.triangles.size());
  for (std::size_t t = 0; t < tri.triangles.size(); ++t) {
    const auto& v = tri.triangles[t];
    tri_box[t] = box_of(tri.points[v[0]], tri.points[v[1]], tri.points[v[2]]);
  }
  std::vector<std::vector<std::size_t>> pairs_over(tri.triangles.size());
  for (std::size_t T = 0; T < cx.triangles.size(); ++T) pairs_over[cx.triangles[T].image_triangle].push_back(T);

  Rational x0 = from_double(img.front().ax), x1 = x0, y0 = from_double(img.front().ay), y1 = y0;
  for (const auto& p : img) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  constexpr std::uint64_t kGrid = std::uint64_t{1} << 24;
  std::uniform_int_distribution<std::uint64_t> coord(0, kGrid);
  const Rational grid(static_cast<unsigned long>(kGrid));

  // Preimage pairs of random image points.
  const std::size_t max_draws = 100 * n + 100;
  for (std::size_t draw = 0; report.samples < n && draw < max_draws; ++draw) {
    const Rational u(static_cast<unsigned long>(coord(rng)));
    const Rational v(static_cast<unsigned long>(coord(rng)));
    const Point2 q(x0 + (x1 - x0) * u / grid, y0 + (y1 - y0) * v / grid);

    std::vector<std::size_t> faces;
    bool on_edge_image = false;
    for (std::size_t i = 0; i < F.size() && !on_edge_image; ++i) {
      if (!face_box[i].contains(q.ax, q.ay)) continue;
      const auto& a = img[F[i][0]];
      const auto& b = img[F[i][1]];
      const auto& c = img[F[i][2]];
      const int s = face_sign[i];
      const int o0 = orient2d(b, c, q), o1 = orient2d(c, a, q), o2 = orient2d(a, b, q);
      const bool closed = (o0 == s || o0 == 0) && (o1 == s || o1 == 0) && (o2 == s || o2 == 0);
      if (!closed) continue;
      if (o0 == 0 || o1 == 0 || o2 == 0) on_edge_image = true;
      else faces.push_back(i);
    }
    if (on_edge_image) {
      ++report.skipped;
      continue;
    }
    ++report.samples;
    if (faces.size() < 2) continue;
    ++report.multi_preimage;

    std::vector<Point3> pre;
    for (auto i : faces)
      pre.push_back(affine_combination(barycentric(q, img[F[i][0]], img[F[i][1]], img[F[i][2]]), P[F[i][0]],
                                       P[F[i][1]], P[F[i][2]]));

    // Pair triangles over q, with the points of both factors at q's weights.
    struct Candidate {
      std::size_t a, b;  // indices into points
    };
    std::vector<Candidate> candidates;
    std::vector<Point3> points;
    for (std::size_t t = 0; t < tri.triangles.size(); ++t) {
      if (pairs_over[t].empty() || !tri_box[t].contains(q.ax, q.ay)) continue;
      const auto& tv = tri.triangles[t];
      if (!in_closed_triangle(q, tri.points[tv[0]], tri.points[tv[1]], tri.points[tv[2]])) continue;
      const auto w = barycentric(q, tri.points[tv[0]], tri.points[tv[1]], tri.points[tv[2]]);
      std::vector<std::pair<std::size_t, std::size_t>> point_of;  // induced triangle -> points index
      const auto at = [&](std::size_t induced) {
        for (const auto& [k, idx] : point_of)
          if (k == induced) return idx;
        const auto& c = ind.triangles[induced].v;
        points.push_back(affine_combination(w, ind.vertices[c[0]].position, ind.vertices[c[1]].position,
                                            ind.vertices[c[2]].position));
        point_of.emplace_back(induced, points.size() - 1);
        return points.size() - 1;
      };
      for (auto T : pairs_over[t]) candidates.push_back({at(cx.triangles[T].first), at(cx.triangles[T].second)});
    }
    for (std::size_t i = 0; i < pre.size(); ++i) {
      for (std::size_t j = 0; j < pre.size(); ++j) {
        if (i == j) continue;
        ++report.pairs_checked;
        const bool covered = std::any_of(candidates.begin(), candidates.end(), [&](const Candidate& c) {
          return points[c.a] == pre[i] && points[c.b] == pre[j];
        });
        if (!covered)
          fail(report, "image point " + describe(q) + ": preimages on mesh triangles " + std::to_string(faces[i]) +
                           " and " + std::to_string(faces[j]) + " lie in no pair triangle");
      }
    }
  }

  // Random points of pair triangles.
  if (!cx.triangles.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, cx.triangles.size() - 1);
    std::uniform_int_distribution<unsigned long> weight(1, 1UL << 16);
    for (std::size_t s = 0; s < n; ++s) {
      const std::size_t T = pick(rng);
      const Rational k0(weight(rng)), k1(weight(rng)), k2(weight(rng));
      const Rational sum = k0 + k1 + k2;
      const std::array<Rational, 3> w{k0 / sum, k1 / sum, k2 / sum};
      const auto& A = ind.triangles[cx.triangles[T].first].v;
      const auto& B = ind.triangles[cx.triangles[T].second].v;
      const Point3 a = affine_combination(w, ind.vertices[A[0]].position, ind.vertices[A[1]].position,
                                          ind.vertices[A[2]].position);
      const Point3 b = affine_combination(w, ind.vertices[B[0]].position, ind.vertices[B[1]].position,
                                          ind.vertices[B[2]].position);
      ++report.converse_checked;
      Point2 fa, fb;
      if (!evaluate_map(mesh, map, a, fa) || !evaluate_map(mesh, map, b, fb)) {
        fail(report, "pair triangle " + std::to_string(T) + ": sampled point is off the surface");
        continue;
      }
      if (fa != fb)
        fail(report, "pair triangle " + std::to_string(T) + ": f(a) = " + describe(fa) + " but f(b) = " +
                         describe(fb));
    }
  }
  return report;
}

}  // namespace dhopf
