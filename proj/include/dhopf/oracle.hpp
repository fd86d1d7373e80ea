#pragma once

// Brute-force check of the complex of f-neighbors against point location:
// preimage pairs of random image points must lie in pair triangles, and
// random points of pair triangles must be pairs with equal image.

#include "dhopf/neighbor_complex.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dhopf {

struct OracleReport {
  std::size_t samples = 0;           // image points drawn and kept
  std::size_t skipped = 0;           // redrawn because they hit an edge image
  std::size_t multi_preimage = 0;    // samples with at least two preimages
  std::size_t pairs_checked = 0;     // ordered preimage pairs
  std::size_t converse_checked = 0;  // points drawn from pair triangles
  std::size_t failures = 0;
  std::vector<std::string> counterexamples;  // the first few failures

  bool passed() const { return failures == 0; }
};

/// Exact f at a point of the surface, located by brute force over the mesh
/// triangles. Returns false if the point is not on the surface.
bool evaluate_map(const SurfaceMesh& mesh, const PlanarMap& map, const Point3& x, Point2& image);

/// n samples in each direction, drawn from mt19937_64(seed).
OracleReport oracle_check(const SurfaceMesh& mesh, const PlanarMap& map, const ImageTriangulation& tri,
                          const InducedTriangulation& ind, const NeighborComplex& cx, std::size_t n,
                          std::uint64_t seed);

}  // namespace dhopf
