#include "dhopf/generators.hpp"

#include "dhopf/errors.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <unordered_map>

namespace dhopf {

SurfaceMesh convex_hull(const std::vector<Point3>& points) {
  const std::size_t n = points.size();
  if (n < 4) throw GeometryError("convex hull needs at least 4 points");

  // Initial tetrahedron: 0, 1, the first point off line 01, the first off that plane.
  std::size_t i2 = 2;
  auto collinear = [&](std::size_t k) {
    const auto c = cross(points[0], points[1], points[k]);
    return c[0] == 0 && c[1] == 0 && c[2] == 0;
  };
  while (i2 < n && collinear(i2)) ++i2;
  if (i2 == n) throw GeometryError("convex hull: points are collinear");
  std::size_t i3 = 2;
  while (i3 < n && (i3 == i2 || orient3d(points[0], points[1], points[i2], points[i3]) == 0)) ++i3;
  if (i3 == n) throw GeometryError("convex hull: points are coplanar");

  std::vector<TriangleIndices> faces;
  std::vector<char> alive;
  std::unordered_map<std::uint64_t, std::size_t> dedge;
  auto add = [&](std::size_t a, std::size_t b, std::size_t c) {
    const std::size_t f = faces.size();
    faces.push_back({a, b, c});
    alive.push_back(1);
    dedge[directed_key(a, b)] = f;
    dedge[directed_key(b, c)] = f;
    dedge[directed_key(c, a)] = f;
  };
  std::size_t a = 0, b = 1, c = i2, d = i3;
  if (orient3d(points[a], points[b], points[c], points[d]) > 0) std::swap(b, c);
  // Now d is on the negative (inner) side of (a, b, c).
  add(a, b, c);
  add(a, d, b);
  add(b, d, c);
  add(c, d, a);

  for (std::size_t p = 2; p < n; ++p) {
    if (p == i2 || p == i3) continue;
    std::vector<std::size_t> visible;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (!alive[f]) continue;
      const int s = orient3d(points[faces[f][0]], points[faces[f][1]], points[faces[f][2]], points[p]);
      if (s == 0) throw GeometryError("convex hull: point " + std::to_string(p) + " is coplanar with a face");
      if (s > 0) visible.push_back(f);
    }
    if (visible.empty()) continue;
    std::vector<char> is_visible(faces.size(), 0);
    for (auto f : visible) is_visible[f] = 1;
    std::vector<std::pair<std::size_t, std::size_t>> horizon;
    for (auto f : visible) {
      for (int k = 0; k < 3; ++k) {
        const std::size_t u = faces[f][k], v = faces[f][(k + 1) % 3];
        const std::size_t g = dedge.at(directed_key(v, u));
        if (!is_visible[g]) horizon.emplace_back(u, v);
      }
    }
    for (auto f : visible) {
      alive[f] = 0;
      for (int k = 0; k < 3; ++k) dedge.erase(directed_key(faces[f][k], faces[f][(k + 1) % 3]));
    }
    for (auto [u, v] : horizon) add(u, v, p);
  }

  // No input point may sit on a final face plane (it would make the face non-strict).
  std::vector<std::size_t> remap(n, static_cast<std::size_t>(-1));
  std::vector<Point3> used;
  std::vector<TriangleIndices> out;
  for (std::size_t f = 0; f < faces.size(); ++f) {
    if (!alive[f]) continue;
    for (std::size_t q = 0; q < n; ++q) {
      if (q == faces[f][0] || q == faces[f][1] || q == faces[f][2]) continue;
      if (orient3d(points[faces[f][0]], points[faces[f][1]], points[faces[f][2]], points[q]) == 0)
        throw GeometryError("convex hull: point " + std::to_string(q) + " is coplanar with a face");
    }
    TriangleIndices t;
    for (int k = 0; k < 3; ++k) {
      auto& r = remap[faces[f][k]];
      if (r == static_cast<std::size_t>(-1)) {
        r = used.size();
        used.push_back(points[faces[f][k]]);
      }
      t[k] = r;
    }
    out.push_back(t);
  }
  return SurfaceMesh(std::move(used), std::move(out));
}

SurfaceMesh random_sphere_hull(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<Point3> pts;
    for (std::size_t i = 0; i < n; ++i) {
      double x = normal(rng), y = normal(rng), z = normal(rng);
      const double r = std::sqrt(x * x + y * y + z * z);
      auto grid = [&](double v) {
        Rational q(static_cast<long>(std::lround(v / r * 256.0)), 256);
        q.canonicalize();
        return q;
      };
      pts.emplace_back(grid(x), grid(y), grid(z));
    }
    try {
      return convex_hull(pts);
    } catch (const GeometryError&) {
      continue;
    }
  }
  throw GeometryError("could not draw a hull in general position");
}

bool map_in_general_position(const SurfaceMesh& mesh, const PlanarMap& map) {
  if (!check_general_position(mesh, map).passed()) return false;
  try {
    build_pslg(mesh, map);
  } catch (const GeometryError&) {
    return false;
  }
  return true;
}

PlanarMap projection_map(const SurfaceMesh& mesh, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> component(-64, 64);
  for (int attempt = 0; attempt < 100; ++attempt) {
    const long w = component(rng), x = component(rng), y = component(rng), z = component(rng);
    const long norm = w * w + x * x + y * y + z * z;
    if (norm == 0) continue;
    const Rational s(1, norm);
    // First two rows of the rotation matrix of the unit quaternion q / |q|.
    const Rational r00 = s * (w * w + x * x - y * y - z * z), r01 = s * 2 * (x * y - w * z),
                   r02 = s * 2 * (x * z + w * y);
    const Rational r10 = s * 2 * (x * y + w * z), r11 = s * (w * w - x * x + y * y - z * z),
                   r12 = s * 2 * (y * z - w * x);
    PlanarMap map;
    for (const auto& p : mesh.vertices())
      map.images.emplace_back(r00 * p.x + r01 * p.y + r02 * p.z, r10 * p.x + r11 * p.y + r12 * p.z);
    if (map_in_general_position(mesh, map)) return map;
  }
  throw GeometryError("projection generator: no general-position rotation in 100 draws");
}

PlanarMap random_image_map(const SurfaceMesh& mesh, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> coord(0, 1L << 16);
  for (int attempt = 0; attempt < 100; ++attempt) {
    PlanarMap map;
    for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
      const long u = coord(rng);
      const long w = coord(rng);
      Rational x(u, 1L << 16), y(w, 1L << 16);
      x.canonicalize();
      y.canonicalize();
      map.images.emplace_back(x, y);
    }
    if (map_in_general_position(mesh, map)) return map;
  }
  throw GeometryError("random-images generator: no general-position map in 100 draws");
}

PlanarMap generate_map(const std::string& kind, const SurfaceMesh& mesh, std::uint64_t seed) {
  if (kind == "projection") return projection_map(mesh, seed);
  if (kind == "random-images") return random_image_map(mesh, seed);
  throw std::invalid_argument("unknown map generator '" + kind + "'");
}

}  // namespace dhopf
