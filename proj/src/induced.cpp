#include "dhopf/induced.hpp"

#include "dhopf/errors.hpp"

namespace dhopf {

const std::vector<std::size_t>& InducedTriangulation::triangles_on_edge(std::size_t a,
                                                                        std::size_t b) const {
  static const std::vector<std::size_t> none;
  const auto it = edge_triangles.find(undirected_key(a, b));
  return it == edge_triangles.end() ? none : it->second;
}

std::optional<std::size_t> InducedTriangulation::across(std::size_t t, std::size_t a,
                                                        std::size_t b) const {
  for (auto s : triangles_on_edge(a, b))
    if (s != t) return s;
  return std::nullopt;
}

InducedTriangulation pull_back(const ImageTriangulation& tri, const SurfaceMesh& mesh,
                               const PlanarMap& map) {
  const auto& img = map.images;
  const auto& faces = mesh.triangles();
  if (tri.coverers.size() != tri.triangles.size())
    throw GeometryError("pull_back needs a restricted image triangulation");

  std::vector<int> face_sign(faces.size());
  for (std::size_t f = 0; f < faces.size(); ++f) {
    face_sign[f] = orient2d(img[faces[f][0]], img[faces[f][1]], img[faces[f][2]]);
    if (face_sign[f] == 0)
      throw GeometryError("image of mesh triangle " + std::to_string(f) + " is degenerate");
  }

  InducedTriangulation out;
  out.by_image.assign(tri.triangles.size(), {});
  std::unordered_map<Point3, std::size_t, Point3Hash> vertex_of;
  std::unordered_map<std::uint64_t, std::size_t> cache;  // (image point, parent) -> vertex

  auto lift = [&](std::size_t point, std::size_t parent) {
    const std::uint64_t key = directed_key(point, parent);
    if (const auto it = cache.find(key); it != cache.end()) return it->second;
    const auto& face = faces[parent];
    const Point2& q = tri.points[point];
    Point3 p;
    bool corner = false;
    for (int k = 0; k < 3; ++k) {
      if (img[face[k]] == q) {
        p = mesh.vertices()[face[k]];
        corner = true;
      }
    }
    if (!corner) {
      const auto w = barycentric(q, img[face[0]], img[face[1]], img[face[2]]);
      p = affine_combination(w, mesh.vertices()[face[0]], mesh.vertices()[face[1]],
                             mesh.vertices()[face[2]]);
    }
    auto [it, inserted] = vertex_of.try_emplace(p, out.vertices.size());
    if (inserted) out.vertices.push_back({std::move(p), point});
    cache.emplace(key, it->second);
    return it->second;
  };

  for (std::size_t t = 0; t < tri.triangles.size(); ++t) {
    if (tri.inside.empty() || !tri.inside[t]) continue;
    for (std::size_t parent : tri.coverers[t]) {
      InducedTriangle it;
      for (int k = 0; k < 3; ++k) it.v[k] = lift(tri.triangles[t][k], parent);
      it.parent = parent;
      it.image_triangle = t;
      it.reversed = face_sign[parent] < 0;
      const std::size_t id = out.triangles.size();
      out.triangles.push_back(it);
      out.by_image[t].push_back(id);
      for (int k = 0; k < 3; ++k)
        out.edge_triangles[undirected_key(it.v[k], it.v[(k + 1) % 3])].push_back(id);
    }
  }
  return out;
}

SurfaceMesh induced_surface(const InducedTriangulation& ind) {
  std::vector<Point3> vertices;
  vertices.reserve(ind.vertices.size());
  for (const auto& v : ind.vertices) vertices.push_back(v.position);
  std::vector<TriangleIndices> triangles;
  triangles.reserve(ind.triangles.size());
  for (const auto& t : ind.triangles) triangles.push_back(t.outward());
  return SurfaceMesh(std::move(vertices), std::move(triangles));
}

}  // namespace dhopf
