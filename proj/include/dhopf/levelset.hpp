#pragma once

// Level sets of the lifted pair distance |a - b| on a component of the
// resolved complex, and the separation certificate for them.

#include "dhopf/hopf.hpp"

#include <array>
#include <vector>

namespace dhopf {

/// |a(x) - b(x)| at barycentric weights x of triangle t.
double lifted_distance(const InducedTriangulation& ind, const NeighborComplex& cx, std::size_t t,
                       const std::array<double, 3>& x);

struct DistanceRange {
  double max = 0.0;
  std::size_t argmax_vertex = 0;  // resolved vertex
};

/// The lifted distance is convex on each triangle, so its maximum over a
/// component is attained at a vertex. component = npos scans everything.
DistanceRange lift_distance(const InducedTriangulation& ind, const NeighborComplex& cx,
                            const ResolvedComplex& rc, std::size_t component = static_cast<std::size_t>(-1));

struct LoopPoint {
  std::size_t triangle;
  std::array<double, 3> barycentric;
  Eigen::Vector3d a, b;
};

struct LevelSetOptions {
  double eps_level = 0.0;       // 0 selects 1e-4 * scale
  double scale = 1.0;           // typically D_hat
  std::size_t max_depth = 8;    // midpoint subdivision levels, at most 20
};

struct LevelSetResult {
  double delta = 0.0;
  std::vector<std::vector<LoopPoint>> loops;  // closed: the last point connects to the first
  std::size_t below_components = 0;           // of {d <= delta}
  std::size_t above_components = 0;           // of {d > delta}
  bool separated = false;
  std::size_t total_loop_count = 0;
  double total_length = 0.0;                  // in P x P
  std::size_t refined_triangles = 0;          // leaves that straddle delta
  std::size_t depth_used = 0;                 // deepest subdivision level
  std::size_t perturbed = 0;                  // crossings nudged off grid vertices
  double eps_level = 0.0;
};

/// Loops of {d = delta} and the component counts of both sides, computed in
/// one refinement pass. Throws GeometryError("delta out of range") unless
/// 0 < delta < max of d on the component.
LevelSetResult analyze_level_set(const InducedTriangulation& ind, const NeighborComplex& cx,
                                 const ResolvedComplex& rc, std::size_t component, double delta,
                                 const LevelSetOptions& options = {});

/// Only the loops (component counts left at zero).
LevelSetResult extract_level_set(const InducedTriangulation& ind, const NeighborComplex& cx,
                                 const ResolvedComplex& rc, std::size_t component, double delta,
                                 const LevelSetOptions& options = {});

/// Only the separation fields (loops cleared).
LevelSetResult separation_check(const InducedTriangulation& ind, const NeighborComplex& cx,
                                const ResolvedComplex& rc, std::size_t component, double delta,
                                const LevelSetOptions& options = {});

}  // namespace dhopf
