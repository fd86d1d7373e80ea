#pragma once

// Pull-back of the image triangulation to the surface: every inside image
// triangle t and every mesh triangle A covering it give the induced triangle
// (f|_A)^-1(t).

#include "dhopf/arrangement.hpp"
#include "dhopf/cdt.hpp"
#include "dhopf/mesh.hpp"

#include <array>
#include <unordered_map>
#include <vector>

namespace dhopf {

struct InducedVertex {
  Point3 position;
  std::size_t image_point;  // index into ImageTriangulation::points
};

struct InducedTriangle {
  /// Corner k maps to corner k of the image triangle (counter-clockwise in the plane).
  std::array<std::size_t, 3> v;
  std::size_t parent;          // mesh triangle
  std::size_t image_triangle;  // index into ImageTriangulation::triangles
  /// True when f reverses orientation on the parent, i.e. the corner order
  /// above is clockwise seen from outside the body.
  bool reversed;

  /// Corners in outward (counter-clockwise from outside) order.
  std::array<std::size_t, 3> outward() const { return reversed ? std::array{v[0], v[2], v[1]} : v; }
};

struct InducedTriangulation {
  std::vector<InducedVertex> vertices;
  std::vector<InducedTriangle> triangles;
  /// Induced triangles over each image triangle, in coverer order.
  std::vector<std::vector<std::size_t>> by_image;
  /// Undirected vertex pair -> incident induced triangles.
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> edge_triangles;

  const std::vector<std::size_t>& triangles_on_edge(std::size_t a, std::size_t b) const;
  /// The induced triangle across edge (a, b) from t, if any.
  std::optional<std::size_t> across(std::size_t t, std::size_t a, std::size_t b) const;
  Eigen::Vector3d position(std::size_t v) const {
    const auto& p = vertices[v].position;
    return {p.ax, p.ay, p.az};
  }
};

/// Exact pull-back. Vertices are merged by exact 3d equality.
/// Throws GeometryError when a parent's image is degenerate.
InducedTriangulation pull_back(const ImageTriangulation& tri, const SurfaceMesh& mesh,
                               const PlanarMap& map);

/// T_fP as a surface mesh with outward windings, for closed-surface validation.
SurfaceMesh induced_surface(const InducedTriangulation& ind);

}  // namespace dhopf
