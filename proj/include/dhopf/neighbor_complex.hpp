#pragma once

// The complex of f-neighbors: ordered pairs [A, B] of distinct induced
// triangles with the same image, its edge-manifold check, the resolution of
// pinched vertices into a closed surface, and component topology.

#include "dhopf/induced.hpp"

#include <array>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace dhopf {

struct PairVertex {
  std::size_t a, b;  // induced vertices with equal image
  bool diagonal() const { return a == b; }
};

struct PairTriangle {
  std::size_t first, second;     // induced triangles A, B
  std::array<std::size_t, 3> v;  // pair vertices, corner k = (A.v[k], B.v[k])
  std::size_t image_triangle;
};

struct NeighborComplex {
  std::vector<PairVertex> vertices;
  std::vector<PairTriangle> triangles;
  std::vector<std::array<std::size_t, 2>> edges;          // pair-vertex ids, sorted
  std::vector<std::vector<std::size_t>> edge_triangles;   // per edge
  std::vector<std::array<std::size_t, 3>> triangle_edges; // edge k joins corners k, k+1
  std::unordered_map<std::uint64_t, std::size_t> edge_index;
  std::unordered_map<std::uint64_t, std::size_t> vertex_index;    // (a, b) -> id
  std::unordered_map<std::uint64_t, std::size_t> triangle_index;  // (A, B) -> id

  std::optional<std::size_t> find_vertex(std::size_t a, std::size_t b) const;
  std::optional<std::size_t> find_triangle(std::size_t first, std::size_t second) const;
  std::optional<std::size_t> find_edge(std::size_t p, std::size_t q) const;
  std::size_t num_diagonal_vertices() const;
  long euler_characteristic() const {
    return static_cast<long>(vertices.size()) - static_cast<long>(edges.size()) +
           static_cast<long>(triangles.size());
  }
};

/// All ordered pairs of distinct induced triangles over each image triangle.
NeighborComplex build_complex(const InducedTriangulation& ind);

/// Complex spanned by an explicit list of ordered pairs (A, B); both must
/// share an image triangle. Used for subsets and negative controls.
NeighborComplex assemble_complex(const InducedTriangulation& ind,
                                 const std::vector<std::pair<std::size_t, std::size_t>>& pairs);

enum class EdgeCase { Diagonal, NoFolding, OneFolding, Invalid };
std::string to_string(EdgeCase c);

struct EdgeClassification {
  EdgeCase kind = EdgeCase::Invalid;
  std::size_t degree = 0;  // incident triangles
  std::optional<std::size_t> predicted_partner;
};

struct ManifoldReport {
  std::vector<EdgeClassification> edges;  // indexed like NeighborComplex::edges
  std::size_t diagonal = 0, no_folding = 0, one_folding = 0;
  std::vector<std::string> violations;
  bool passed() const { return violations.empty(); }
};

/// Every edge must lie in exactly two triangles, and the second triangle must
/// be the one predicted by the local folding pattern of the induced
/// triangulation around the edge's two factor edges.
ManifoldReport verify_edge_manifold(const InducedTriangulation& ind, const NeighborComplex& cx);

struct ComponentInfo {
  std::size_t num_vertices = 0, num_edges = 0, num_triangles = 0;
  long euler = 0;
  bool orientable = false;
  std::optional<long> genus;          // orientable only
  int degree_mod2 = 0;                // of the first-factor projection
  std::optional<long> signed_degree;  // orientable only, normalised to be >= 0
  bool meets_diagonal = false;
  std::size_t swap_partner = 0;       // component of the swapped triangles
};

/// Resolution of the complex: vertices split by link cycles. Triangle
/// indices coincide with the NeighborComplex.
struct ResolvedComplex {
  std::vector<std::size_t> to_complex;          // resolved vertex -> complex vertex (the map i)
  std::vector<std::array<std::size_t, 3>> triangles;
  std::vector<std::array<std::size_t, 2>> edges;
  std::vector<std::vector<std::size_t>> edge_triangles;
  std::vector<std::array<std::size_t, 3>> triangle_edges;  // edge k joins corners k, k+1
  std::unordered_map<std::uint64_t, std::size_t> edge_index;
  std::vector<std::size_t> swap_vertex;
  std::vector<std::size_t> swap_triangle;
  std::vector<std::size_t> triangle_component;
  std::vector<std::size_t> vertex_component;
  std::vector<ComponentInfo> components;
  /// Orientation sign per triangle (+1 keeps corner order) from propagation;
  /// meaningful only inside orientable components.
  std::vector<int> triangle_orientation;
  std::size_t split_vertices = 0;  // complex vertices with more than one link cycle
  std::size_t generic_triangle = 0;  // induced triangle whose barycenter is the degree probe

  std::size_t num_vertices() const { return to_complex.size(); }
  std::optional<std::size_t> find_edge(std::size_t p, std::size_t q) const;
  /// The triangle across edge (p, q) from t, if any.
  std::optional<std::size_t> across(std::size_t t, std::size_t p, std::size_t q) const;
};

/// Throws GeometryError("not a closed pseudo-surface") if some link is not a
/// union of cycles.
ResolvedComplex resolve_singularities(const InducedTriangulation& ind, const NeighborComplex& cx);

/// Fills components, orientation and degrees.
void analyze_components(const InducedTriangulation& ind, const NeighborComplex& cx,
                        ResolvedComplex& rc);

struct BaseComponent {
  std::size_t component;
  std::optional<std::array<std::size_t, 2>> folding;  // adjacent induced triangles A, B
  bool fallback = false;
};

/// Throws GeometryError("no Hopf base component").
BaseComponent find_base_component(const InducedTriangulation& ind, const NeighborComplex& cx,
                                  const ResolvedComplex& rc);

}  // namespace dhopf
