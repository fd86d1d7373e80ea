#include "dhopf/neighbor_complex.hpp"

#include "dhopf/errors.hpp"

#include <algorithm>
#include <numeric>

namespace dhopf {

namespace {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  // The smaller root wins so that representatives are deterministic.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent[b] = a;
  }
};

std::optional<std::size_t> lookup(const std::unordered_map<std::uint64_t, std::size_t>& map,
                                  std::uint64_t key) {
  const auto it = map.find(key);
  if (it == map.end()) return std::nullopt;
  return it->second;
}

}  // namespace

std::optional<std::size_t> NeighborComplex::find_vertex(std::size_t a, std::size_t b) const {
  return lookup(vertex_index, directed_key(a, b));
}
std::optional<std::size_t> NeighborComplex::find_triangle(std::size_t first,
                                                          std::size_t second) const {
  return lookup(triangle_index, directed_key(first, second));
}
std::optional<std::size_t> NeighborComplex::find_edge(std::size_t p, std::size_t q) const {
  return lookup(edge_index, undirected_key(p, q));
}
std::size_t NeighborComplex::num_diagonal_vertices() const {
  return static_cast<std::size_t>(
      std::count_if(vertices.begin(), vertices.end(), [](const PairVertex& v) { return v.diagonal(); }));
}

std::optional<std::size_t> ResolvedComplex::find_edge(std::size_t p, std::size_t q) const {
  return lookup(edge_index, undirected_key(p, q));
}

std::optional<std::size_t> ResolvedComplex::across(std::size_t t, std::size_t p, std::size_t q) const {
  const auto e = find_edge(p, q);
  if (!e) return std::nullopt;
  for (auto s : edge_triangles[*e])
    if (s != t) return s;
  return std::nullopt;
}

NeighborComplex assemble_complex(const InducedTriangulation& ind,
                                 const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  NeighborComplex cx;
  cx.triangle_index.reserve(pairs.size());
  cx.edge_index.reserve(pairs.size() * 3 / 2);
  cx.vertex_index.reserve(pairs.size() / 2 + 16);
  cx.triangles.reserve(pairs.size());
  cx.triangle_edges.reserve(pairs.size());
  for (auto [first, second] : pairs) {
    const auto& A = ind.triangles.at(first);
    const auto& B = ind.triangles.at(second);
    if (first == second || A.image_triangle != B.image_triangle)
      throw GeometryError("pair (" + std::to_string(first) + "," + std::to_string(second) +
                          ") is not a pair of f-neighbor triangles");
    if (!cx.triangle_index.emplace(directed_key(first, second), cx.triangles.size()).second) continue;
    PairTriangle T{first, second, {}, A.image_triangle};
    for (int k = 0; k < 3; ++k) {
      auto [it, inserted] = cx.vertex_index.try_emplace(directed_key(A.v[k], B.v[k]), cx.vertices.size());
      if (inserted) cx.vertices.push_back({A.v[k], B.v[k]});
      T.v[k] = it->second;
    }
    const std::size_t id = cx.triangles.size();
    cx.triangles.push_back(T);
    auto& te = cx.triangle_edges.emplace_back();
    for (int k = 0; k < 3; ++k) {
      const std::size_t p = T.v[k], q = T.v[(k + 1) % 3];
      auto [it, inserted] = cx.edge_index.try_emplace(undirected_key(p, q), cx.edges.size());
      if (inserted) {
        cx.edges.push_back({std::min(p, q), std::max(p, q)});
        cx.edge_triangles.emplace_back();
      }
      cx.edge_triangles[it->second].push_back(id);
      te[k] = it->second;
    }
  }
  return cx;
}

NeighborComplex build_complex(const InducedTriangulation& ind) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::size_t total = 0;
  for (const auto& over : ind.by_image) total += over.size() * over.size();
  pairs.reserve(total);
  for (const auto& over : ind.by_image)
    for (auto A : over)
      for (auto B : over)
        if (A != B) pairs.emplace_back(A, B);
  return assemble_complex(ind, pairs);
}

std::string to_string(EdgeCase c) {
  switch (c) {
    case EdgeCase::Diagonal: return "diagonal";
    case EdgeCase::NoFolding: return "no-folding";
    case EdgeCase::OneFolding: return "one-folding";
    case EdgeCase::Invalid: break;
  }
  return "invalid";
}

ManifoldReport verify_edge_manifold(const InducedTriangulation& ind, const NeighborComplex& cx) {
  ManifoldReport report;
  report.edges.resize(cx.edges.size());
  for (std::size_t e = 0; e < cx.edges.size(); ++e) {
    auto& cls = report.edges[e];
    const auto& incident = cx.edge_triangles[e];
    cls.degree = incident.size();
    const auto& P = cx.vertices[cx.edges[e][0]];
    const auto& Q = cx.vertices[cx.edges[e][1]];
    const auto name = [&] {
      return "edge " + std::to_string(e) + " [(" + std::to_string(P.a) + "," + std::to_string(P.b) +
             ")-(" + std::to_string(Q.a) + "," + std::to_string(Q.b) + ")]";
    };
    const auto& T0 = cx.triangles[incident.front()];
    const std::size_t A = T0.first, B = T0.second;

    std::optional<std::size_t> partner;
    if (P.diagonal() && Q.diagonal()) {
      cls.kind = EdgeCase::Diagonal;
      partner = cx.find_triangle(B, A);
    } else {
      const auto A1 = ind.across(A, P.a, Q.a);
      const auto B1 = ind.across(B, P.b, Q.b);
      if (!A1 || !B1) {
        report.violations.push_back(name() + ": factor edge is not closed");
        continue;
      }
      const auto image = [&](std::size_t t) { return ind.triangles[t].image_triangle; };
      const bool fold_a = image(*A1) == image(A);
      const bool fold_b = image(*B1) == image(B);
      if (fold_a && fold_b) {
        report.violations.push_back(name() + ": both factor edges fold");
        continue;
      }
      if (!fold_a && !fold_b) {
        cls.kind = EdgeCase::NoFolding;
        if (image(*A1) == image(*B1)) partner = cx.find_triangle(*A1, *B1);
      } else {
        cls.kind = EdgeCase::OneFolding;
        partner = fold_a ? cx.find_triangle(*A1, B) : cx.find_triangle(A, *B1);
      }
    }
    cls.predicted_partner = partner;
    switch (cls.kind) {
      case EdgeCase::Diagonal: ++report.diagonal; break;
      case EdgeCase::NoFolding: ++report.no_folding; break;
      case EdgeCase::OneFolding: ++report.one_folding; break;
      case EdgeCase::Invalid: break;
    }
    if (cls.degree != 2) {
      report.violations.push_back(name() + ": belongs to " + std::to_string(cls.degree) +
                                  " triangles");
      continue;
    }
    if (!partner) {
      report.violations.push_back(name() + ": predicted partner triangle is missing");
      continue;
    }
    if (incident[1] != *partner)
      report.violations.push_back(name() + ": second triangle is not the predicted partner");
  }
  return report;
}

ResolvedComplex resolve_singularities(const InducedTriangulation& ind, const NeighborComplex& cx) {
  (void)ind;
  const std::size_t nt = cx.triangles.size();
  std::vector<std::vector<std::size_t>> around(cx.vertices.size());
  for (std::size_t t = 0; t < nt; ++t)
    for (auto v : cx.triangles[t].v) around[v].push_back(t);

  ResolvedComplex rc;
  rc.triangles.assign(nt, {npos, npos, npos});
  for (std::size_t v = 0; v < cx.vertices.size(); ++v) {
    const auto& inc = around[v];  // ascending triangle ids
    if (inc.empty()) continue;
    UnionFind uf(inc.size());
    auto local = [&](std::size_t t) {
      return static_cast<std::size_t>(std::lower_bound(inc.begin(), inc.end(), t) - inc.begin());
    };
    for (std::size_t i = 0; i < inc.size(); ++i) {
      const auto& tv = cx.triangles[inc[i]].v;
      for (int k = 0; k < 3; ++k) {
        if (tv[k] != v && tv[(k + 1) % 3] != v) continue;
        const std::size_t e = cx.triangle_edges[inc[i]][k];
        const auto& star = cx.edge_triangles[e];
        if (star.size() != 2)
          throw GeometryError("not a closed pseudo-surface: edge " + std::to_string(e) + " has " +
                              std::to_string(star.size()) + " triangles");
        uf.unite(i, local(star[0] == inc[i] ? star[1] : star[0]));
      }
    }
    std::vector<std::size_t> cycle_id(inc.size(), npos);
    std::size_t cycles = 0;
    for (std::size_t i = 0; i < inc.size(); ++i) {
      const std::size_t r = uf.find(i);
      if (cycle_id[r] == npos) {
        cycle_id[r] = rc.to_complex.size();
        rc.to_complex.push_back(v);
        ++cycles;
      }
      const auto& tv = cx.triangles[inc[i]].v;
      for (int k = 0; k < 3; ++k)
        if (tv[k] == v) rc.triangles[inc[i]][k] = cycle_id[r];
    }
    if (cycles > 1) ++rc.split_vertices;
  }

  auto& edge_index = rc.edge_index;
  edge_index.reserve(cx.edges.size() + 16);
  rc.triangle_edges.resize(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    const auto& tv = rc.triangles[t];
    for (int k = 0; k < 3; ++k) {
      const std::size_t p = tv[k], q = tv[(k + 1) % 3];
      auto [it, inserted] = edge_index.try_emplace(undirected_key(p, q), rc.edges.size());
      if (inserted) {
        rc.edges.push_back({std::min(p, q), std::max(p, q)});
        rc.edge_triangles.emplace_back();
      }
      rc.edge_triangles[it->second].push_back(t);
      rc.triangle_edges[t][k] = it->second;
    }
  }

  rc.swap_triangle.assign(nt, npos);
  rc.swap_vertex.assign(rc.to_complex.size(), npos);
  for (std::size_t t = 0; t < nt; ++t) {
    const auto s = cx.find_triangle(cx.triangles[t].second, cx.triangles[t].first);
    if (!s) continue;
    rc.swap_triangle[t] = *s;
    for (int k = 0; k < 3; ++k) {
      auto& slot = rc.swap_vertex[rc.triangles[t][k]];
      const std::size_t image = rc.triangles[*s][k];
      if (slot != npos && slot != image) throw GeometryError("swap is not simplicial on the resolution");
      slot = image;
    }
  }
  return rc;
}

void analyze_components(const InducedTriangulation& ind, const NeighborComplex& cx,
                        ResolvedComplex& rc) {
  const std::size_t nt = rc.triangles.size();
  UnionFind uf(nt);
  for (const auto& star : rc.edge_triangles)
    for (std::size_t i = 1; i < star.size(); ++i) uf.unite(star[0], star[i]);

  rc.triangle_component.assign(nt, npos);
  std::vector<std::size_t> id_of_root(nt, npos);
  std::size_t ncomp = 0;
  for (std::size_t t = 0; t < nt; ++t) {
    const std::size_t r = uf.find(t);
    if (id_of_root[r] == npos) id_of_root[r] = ncomp++;
    rc.triangle_component[t] = id_of_root[r];
  }
  rc.components.assign(ncomp, {});
  rc.vertex_component.assign(rc.num_vertices(), npos);
  for (std::size_t t = 0; t < nt; ++t) {
    auto& info = rc.components[rc.triangle_component[t]];
    ++info.num_triangles;
    for (auto v : rc.triangles[t]) rc.vertex_component[v] = rc.triangle_component[t];
  }
  for (std::size_t v = 0; v < rc.num_vertices(); ++v) {
    if (rc.vertex_component[v] == npos) continue;
    auto& info = rc.components[rc.vertex_component[v]];
    ++info.num_vertices;
    if (cx.vertices[rc.to_complex[v]].diagonal()) info.meets_diagonal = true;
  }
  for (const auto& e : rc.edges) ++rc.components[rc.vertex_component[e[0]]].num_edges;

  // Orientation by propagation across shared edges.
  auto has_directed = [&](std::size_t t, std::size_t x, std::size_t y) {
    const auto& tv = rc.triangles[t];
    for (int k = 0; k < 3; ++k)
      if (tv[k] == x && tv[(k + 1) % 3] == y) return true;
    return false;
  };
  rc.triangle_orientation.assign(nt, 0);
  std::vector<char> orientable(ncomp, 1);
  for (std::size_t seed = 0; seed < nt; ++seed) {
    if (rc.triangle_orientation[seed] != 0) continue;
    rc.triangle_orientation[seed] = 1;
    std::vector<std::size_t> queue{seed};
    while (!queue.empty()) {
      const std::size_t t = queue.back();
      queue.pop_back();
      const int o = rc.triangle_orientation[t];
      const auto& tv = rc.triangles[t];
      for (int k = 0; k < 3; ++k) {
        std::size_t x = tv[k], y = tv[(k + 1) % 3];
        if (o < 0) std::swap(x, y);  // t traverses x -> y
        for (auto s : rc.edge_triangles[rc.triangle_edges[t][k]]) {
          if (s == t) continue;
          const int want = has_directed(s, y, x) ? 1 : -1;
          if (rc.triangle_orientation[s] == 0) {
            rc.triangle_orientation[s] = want;
            queue.push_back(s);
          } else if (rc.triangle_orientation[s] != want) {
            orientable[rc.triangle_component[t]] = 0;
          }
        }
      }
    }
  }

  // Degree of the first-factor projection over the barycenter of one induced
  // triangle. The barycenter is interior to that triangle, so no edge of the
  // resolution projects onto it and only triangles with that first factor count.
  rc.generic_triangle = 0;
  std::vector<long> count(ncomp, 0), signed_count(ncomp, 0);
  if (!ind.triangles.empty()) {
    const int sign_j = ind.triangles[rc.generic_triangle].reversed ? -1 : 1;
    for (std::size_t t = 0; t < nt; ++t) {
      if (cx.triangles[t].first != rc.generic_triangle) continue;
      const std::size_t c = rc.triangle_component[t];
      ++count[c];
      signed_count[c] += rc.triangle_orientation[t] * sign_j;
    }
  }

  for (std::size_t c = 0; c < ncomp; ++c) {
    auto& info = rc.components[c];
    info.euler = static_cast<long>(info.num_vertices) - static_cast<long>(info.num_edges) +
                 static_cast<long>(info.num_triangles);
    info.orientable = orientable[c] != 0;
    if (info.orientable) {
      info.genus = (2 - info.euler) / 2;
      info.signed_degree = std::abs(signed_count[c]);
    }
    info.degree_mod2 = static_cast<int>(count[c] % 2);
    info.swap_partner = c;
  }
  for (std::size_t t = 0; t < nt; ++t) {
    if (rc.swap_triangle[t] == npos) continue;
    rc.components[rc.triangle_component[t]].swap_partner = rc.triangle_component[rc.swap_triangle[t]];
  }
}

BaseComponent find_base_component(const InducedTriangulation& ind, const NeighborComplex& cx,
                                  const ResolvedComplex& rc) {
  std::optional<BaseComponent> best;
  for (std::size_t t = 0; t < cx.triangles.size(); ++t) {
    const auto& T = cx.triangles[t];
    if (ind.by_image[T.image_triangle].size() != 2) continue;
    const auto& A = ind.triangles[T.first].v;
    const auto& B = ind.triangles[T.second].v;
    int shared = 0;
    for (auto a : A) shared += static_cast<int>(std::count(B.begin(), B.end(), a));
    if (shared != 2) continue;
    const std::size_t c = rc.triangle_component[t];
    if (!best || c < best->component) best = BaseComponent{c, std::array{T.first, T.second}, false};
  }
  if (best) return *best;
  for (std::size_t c = 0; c < rc.components.size(); ++c) {
    const auto& info = rc.components[c];
    if (info.degree_mod2 == 1 && info.meets_diagonal) return BaseComponent{c, std::nullopt, true};
  }
  throw GeometryError("no Hopf base component");
}

}  // namespace dhopf
