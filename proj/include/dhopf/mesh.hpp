#pragma once

// Triangulated boundary of a convex polyhedron with exact coordinates.

#include "dhopf/exact.hpp"
#include "dhopf/validation.hpp"

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace dhopf {

using TriangleIndices = std::array<std::size_t, 3>;

/// Key of the unordered vertex pair {a, b}.
inline std::uint64_t undirected_key(std::size_t a, std::size_t b) {
  const std::uint64_t lo = a < b ? a : b;
  const std::uint64_t hi = a < b ? b : a;
  return (lo << 32) | hi;
}
inline std::uint64_t directed_key(std::size_t a, std::size_t b) {
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

struct MeshEdge {
  std::size_t v0, v1;  // v0 < v1
  std::vector<std::size_t> faces;
};

class SurfaceMesh {
 public:
  SurfaceMesh() = default;
  /// Builds adjacency. If the windings are consistent but inward, all
  /// triangles are flipped so that right-hand normals point outward.
  /// Throws GeometryError on out-of-range indices.
  SurfaceMesh(std::vector<Point3> vertices, std::vector<TriangleIndices> triangles);

  const std::vector<Point3>& vertices() const { return vertices_; }
  const std::vector<TriangleIndices>& triangles() const { return triangles_; }
  const std::vector<MeshEdge>& edges() const { return edges_; }
  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_triangles() const { return triangles_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  std::optional<std::size_t> find_edge(std::size_t a, std::size_t b) const;

  /// Every directed edge is used at most once, so windings agree across edges.
  bool consistently_oriented() const { return consistent_; }
  bool flipped_on_load() const { return flipped_; }

  Eigen::Vector3d position(std::size_t v) const {
    const auto& p = vertices_[v];
    return {p.ax, p.ay, p.az};
  }
  /// Vertex average; strictly interior for a nondegenerate convex surface.
  Eigen::Vector3d centroid() const;

 private:
  std::vector<Point3> vertices_;
  std::vector<TriangleIndices> triangles_;
  std::vector<MeshEdge> edges_;
  std::unordered_map<std::uint64_t, std::size_t> edge_index_;
  bool consistent_ = false;
  bool flipped_ = false;
};

struct SurfaceChecks {
  bool convexity = true;
  bool euler = true;
};

/// Closed, manifold, consistently wound, nondegenerate, genus-0 and convex
/// (exact orientation signs of every vertex against every face plane).
ValidationReport validate_surface(const SurfaceMesh& mesh, const SurfaceChecks& checks = {});

/// OFF ("OFF", counts, vertex lines, "3 i j k" faces) or JSON
/// {"vertices": [[x,y,z],...], "triangles": [[i,j,k],...]}. Decimal literals are
/// read as exact fractions. Throws ParseError / IoError.
SurfaceMesh load_surface_mesh(const std::filesystem::path& path);
SurfaceMesh parse_off(const std::string& text);
SurfaceMesh parse_mesh_json(const std::string& text);

struct RayHit {
  Eigen::Vector3d point;
  std::size_t triangle;
  double t;  // signed parameter along the direction
};

/// Floating-point line/convex-surface intersection against precomputed face
/// planes. The caller is responsible for the origin being interior.
class ConvexRaycaster {
 public:
  explicit ConvexRaycaster(const SurfaceMesh& mesh);

  /// Largest t with origin + t*direction inside the body.
  double exit_parameter(const Eigen::Vector3d& origin, const Eigen::Vector3d& direction) const;
  /// Exit point along direction, with the hit triangle (ties go to the
  /// smallest-index triangle that contains the point).
  RayHit exit_hit(const Eigen::Vector3d& origin, const Eigen::Vector3d& direction) const;
  /// Length of the chord through origin in the given direction.
  double chord_length(const Eigen::Vector3d& origin, const Eigen::Vector3d& direction) const;
  /// The other intersection of the line through center and x with the surface.
  Eigen::Vector3d antipode(const Eigen::Vector3d& center, const Eigen::Vector3d& x) const;
  /// Strict interior test in floating point with a relative margin.
  bool interior(const Eigen::Vector3d& point, double margin = 0.0) const;

  std::size_t num_faces() const { return offsets_.size(); }

 private:
  const SurfaceMesh* mesh_;
  std::vector<Eigen::Vector3d> normals_;  // unit, outward
  std::vector<double> offsets_;           // n . x = offset on the face plane
};

/// Exact check that origin lies strictly inside the body.
bool strictly_interior(const SurfaceMesh& mesh, const Eigen::Vector3d& origin);

/// The two intersections of the full line origin + t*direction with the
/// surface, ordered along direction. Throws GeometryError("origin not interior").
std::array<RayHit, 2> surface_raycast(const SurfaceMesh& mesh, const Eigen::Vector3d& origin,
                                      const Eigen::Vector3d& direction);

}  // namespace dhopf
