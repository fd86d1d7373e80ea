#pragma once

// Images of mesh vertices and edges under the planar map, and the planar
// straight-line graph cut out by the edge images.

#include "dhopf/exact.hpp"
#include "dhopf/mesh.hpp"
#include "dhopf/validation.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dhopf {

/// Per-vertex image points of a map that is affine on every mesh triangle.
struct PlanarMap {
  std::vector<Point2> images;
};

/// JSON {"images": [[u,v], ...]} or text lines "k u v". Throws ParseError/IoError.
PlanarMap load_planar_map(const std::filesystem::path& path);
PlanarMap parse_planar_map(const std::string& text);

/// Passes iff the map has one image per vertex and no three images are collinear.
ValidationReport check_general_position(const SurfaceMesh& mesh, const PlanarMap& map);

struct ArrangementPoint {
  Point2 position;
  std::optional<std::size_t> mesh_vertex;                 // vertex image of this mesh vertex
  std::vector<std::pair<std::size_t, std::size_t>> crossings;  // mesh edge pairs crossing here
};

struct Constraint {
  std::size_t a, b;       // arrangement point indices, ordered along the edge from v0 to v1
  std::size_t mesh_edge;  // index into SurfaceMesh::edges()
};

struct ImagePSLG {
  std::vector<ArrangementPoint> points;
  std::vector<Constraint> constraints;
  /// For each mesh edge, its arrangement points in order from v0 to v1.
  std::vector<std::vector<std::size_t>> edge_points;

  std::vector<Point2> positions() const;
};

/// All pairwise intersections of edge images (shared endpoints included) and
/// every edge image split at the arrangement points it contains. Exact.
/// Throws GeometryError("general position violated in arrangement") when two
/// edge images overlap or touch outside their endpoints.
ImagePSLG build_pslg(const SurfaceMesh& mesh, const PlanarMap& map);

}  // namespace dhopf
