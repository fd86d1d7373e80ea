#pragma once

// Constrained Delaunay triangulation of the image arrangement and its
// restriction to the image of the surface, with covering multiplicities.

#include "dhopf/arrangement.hpp"
#include "dhopf/mesh.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace dhopf {

struct ImageTriangulation {
  std::vector<Point2> points;                          // arrangement points, same indexing as the PSLG
  std::vector<std::array<std::size_t, 3>> triangles;   // counter-clockwise
  std::vector<std::uint8_t> inside;                    // empty until restrict_to_image
  std::vector<std::vector<std::size_t>> coverers;      // mesh triangles whose image contains t
  std::vector<std::array<std::size_t, 2>> constraint_edges;

  std::size_t multiplicity(std::size_t t) const { return coverers.empty() ? 0 : coverers[t].size(); }
  std::size_t num_inside() const;
};

/// Triangulates the convex hull of the PSLG points, conforming to every
/// constraint and constrained-Delaunay. Cocircular ties prefer the diagonal
/// whose smaller endpoint index is smaller. Throws GeometryError on
/// duplicate/collinear-only points or crossing constraints.
ImageTriangulation constrained_delaunay(const ImagePSLG& pslg);

/// Marks triangles whose barycenter lies in the image of at least one mesh
/// triangle and records the covering mesh triangles.
ImageTriangulation restrict_to_image(ImageTriangulation tri, const SurfaceMesh& mesh,
                                     const PlanarMap& map);

/// Twice the signed area, exact.
Rational doubled_area(const Point2& a, const Point2& b, const Point2& c);

}  // namespace dhopf
