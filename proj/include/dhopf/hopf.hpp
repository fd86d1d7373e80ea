#pragma once

// Center of the antipodal involution, the antipodal f-neighbor pair on the
// base component, and a path from it to the diagonal.

#include "dhopf/neighbor_complex.hpp"

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <vector>

namespace dhopf {

/// Corner positions of the pair triangle t: corner k is (a[k], b[k]).
struct PairCorners {
  std::array<Eigen::Vector3d, 3> a, b;
};
PairCorners pair_corners(const InducedTriangulation& ind, const NeighborComplex& cx, std::size_t t);

struct CenterOptions {
  std::size_t samples_per_face = 20;
  std::size_t iterations = 200;
  std::uint64_t seed = 0;
};

struct CenterResult {
  Eigen::Vector3d center;
  double d_hat = 0.0;               // estimate of the sup-inf of antipodal distances
  Eigen::Vector3d inner_argmin;     // surface point realising d_hat at the center
  bool converged = false;
  std::size_t num_samples = 0;
};

/// Minimal chord through p over the directions toward the given surface samples.
double min_chord(const ConvexRaycaster& caster, const Eigen::Vector3d& p,
                 const std::vector<Eigen::Vector3d>& samples, std::size_t* argmin = nullptr);

/// Derivative-free maximisation of the minimal chord over interior points,
/// starting at the vertex centroid. The outer search samples mesh vertices
/// and random face points; extra_samples (e.g. induced vertices) join the
/// final evaluation, which also refines the inner minimum locally so that
/// d_hat does not overestimate the minimal chord at the returned center.
CenterResult estimate_center(const SurfaceMesh& mesh, const std::vector<Eigen::Vector3d>& extra_samples,
                             const CenterOptions& options = {});

/// Minimal chord through p, refined from the best sampled directions.
double refined_min_chord(const ConvexRaycaster& caster, const Eigen::Vector3d& p,
                         const std::vector<Eigen::Vector3d>& samples, Eigen::Vector3d* argmin = nullptr);

struct PathPoint {
  std::optional<std::size_t> vertex;  // resolved vertex, unset for the witness itself
  Eigen::Vector3d a, b;
  bool diagonal = false;               // exact a = b (same induced vertex)
};

struct HopfWitness {
  std::size_t component = 0;
  std::size_t triangle = 0;                // resolved / complex triangle
  std::array<double, 3> barycentric{};     // weights of the triangle corners
  Eigen::Vector3d a, b;
  double residual = 0.0;                   // |u(a) + u(b)|, u(q) = (q - p)/|q - p|
  std::vector<PathPoint> path;
};

struct SearchOptions {
  std::size_t grid = 10;           // barycentric grid resolution per triangle
  double tolerance = 1e-6;
  std::size_t max_depth = 40;      // step halvings in the local search
  std::size_t candidates = 24;     // triangles refined from the grid stage
};

/// Minimises |u(a) + u(b)| over the component. Throws SearchError("equivariant
/// search failed") with the best residual when the tolerance is not met.
HopfWitness find_equivariant_pair(const InducedTriangulation& ind, const NeighborComplex& cx,
                                  const ResolvedComplex& rc, std::size_t component,
                                  const Eigen::Vector3d& center, const SearchOptions& options = {});

/// Appends the witness, the nearest corner of its triangle, and a shortest
/// edge path in the component to a diagonal vertex. Throws GeometryError if
/// the component has no diagonal vertex.
void path_to_diagonal(const InducedTriangulation& ind, const NeighborComplex& cx,
                      const ResolvedComplex& rc, HopfWitness& witness);

/// Sine of the angle between a - p and p - b; zero when p is on segment ab's line.
double collinearity_deviation(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& p);

}  // namespace dhopf
