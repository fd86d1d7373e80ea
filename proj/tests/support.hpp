#pragma once

// Shared construction of the full combinatorial stack for tests.

#include "dhopf/cdt.hpp"
#include "dhopf/generators.hpp"
#include "dhopf/induced.hpp"
#include "dhopf/neighbor_complex.hpp"

#include <filesystem>
#include <string>

namespace dhopf::testing {

inline std::filesystem::path fixture(const std::string& name) { return std::filesystem::path(DHOPF_FIXTURE_DIR) / name; }

struct Stack {
  SurfaceMesh mesh;
  PlanarMap map;
  ImagePSLG pslg;
  ImageTriangulation tri;
  InducedTriangulation ind;
  NeighborComplex cx;
  ResolvedComplex rc;

  Stack(SurfaceMesh m, PlanarMap f) : mesh(std::move(m)), map(std::move(f)) {
    pslg = build_pslg(mesh, map);
    tri = restrict_to_image(constrained_delaunay(pslg), mesh, map);
    ind = pull_back(tri, mesh, map);
    cx = build_complex(ind);
    rc = resolve_singularities(ind, cx);
    analyze_components(ind, cx, rc);
  }
};

inline Stack tetrahedron() {
  return Stack(load_surface_mesh(fixture("tetrahedron.off")), load_planar_map(fixture("tetrahedron_map.json")));
}

/// The seeded instance family: hulls of 8 to 40 points, odd seeds projected,
/// even seeds with random vertex images.
inline std::size_t instance_size(std::uint64_t seed) { return 8 + (seed * 7) % 33; }
inline std::string instance_kind(std::uint64_t seed) { return seed % 2 ? "projection" : "random-images"; }
inline Stack instance(std::uint64_t seed) {
  auto mesh = random_sphere_hull(instance_size(seed), seed);
  auto map = generate_map(instance_kind(seed), mesh, seed);
  return Stack(std::move(mesh), std::move(map));
}

}  // namespace dhopf::testing
