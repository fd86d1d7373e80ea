#pragma once

// Seeded random instances: convex hulls of points near the unit sphere and
// maps into the plane.

#include "dhopf/arrangement.hpp"
#include "dhopf/mesh.hpp"

#include <cstdint>
#include <string>

namespace dhopf {

/// Exact convex hull of a point set. Points strictly inside the hull are
/// dropped and the rest reindexed. Throws GeometryError if a point lies on
/// the plane of a hull face or if all points are coplanar.
SurfaceMesh convex_hull(const std::vector<Point3>& points);

/// Hull of n random unit-sphere points rounded to the 1/256 grid, redrawn
/// until no point is coplanar with a hull face.
SurfaceMesh random_sphere_hull(std::size_t n, std::uint64_t seed);

/// Rotation by a random integer quaternion (exact rational matrix), then drop z.
/// Redraws up to 100 times until the map is in general position.
PlanarMap projection_map(const SurfaceMesh& mesh, std::uint64_t seed);

/// Independent uniform images in [0,1]^2 on the 2^-16 grid, redrawn up to 100
/// times until in general position.
PlanarMap random_image_map(const SurfaceMesh& mesh, std::uint64_t seed);

/// "projection" or "random-images"; throws std::invalid_argument otherwise.
PlanarMap generate_map(const std::string& kind, const SurfaceMesh& mesh, std::uint64_t seed);

/// General position of the vertex images plus a clean edge arrangement.
bool map_in_general_position(const SurfaceMesh& mesh, const PlanarMap& map);

}  // namespace dhopf
