#include "dhopf/cdt.hpp"

#include "dhopf/errors.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <optional>
#include <unordered_map>
#include <unordered_set>

namespace dhopf {

std::size_t ImageTriangulation::num_inside() const {
  return static_cast<std::size_t>(std::count(inside.begin(), inside.end(), std::uint8_t{1}));
}

Rational doubled_area(const Point2& a, const Point2& b, const Point2& c) {
  return orient2d_value(a, b, c);
}

namespace {

class CdtBuilder {
 public:
  explicit CdtBuilder(const std::vector<Point2>& points) : pts_(points), vertex_tri_(points.size(), npos) {}

  void triangulate_hull();
  void insert_constraint(std::size_t a, std::size_t b);
  void restore_delaunay();
  std::vector<std::array<std::size_t, 3>> triangles() const;

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  const std::vector<Point2>& pts_;
  std::vector<std::array<std::size_t, 3>> tris_;
  std::vector<char> alive_;
  std::vector<std::size_t> free_;
  std::unordered_map<std::uint64_t, std::size_t> dedge_;  // directed edge -> triangle
  std::unordered_set<std::uint64_t> constrained_;
  std::vector<std::size_t> vertex_tri_;

  std::size_t add(std::size_t a, std::size_t b, std::size_t c) {
    std::size_t t;
    if (!free_.empty()) {
      t = free_.back();
      free_.pop_back();
      tris_[t] = {a, b, c};
      alive_[t] = 1;
    } else {
      t = tris_.size();
      tris_.push_back({a, b, c});
      alive_.push_back(1);
    }
    dedge_[directed_key(a, b)] = t;
    dedge_[directed_key(b, c)] = t;
    dedge_[directed_key(c, a)] = t;
    vertex_tri_[a] = vertex_tri_[b] = vertex_tri_[c] = t;
    return t;
  }

  void remove(std::size_t t) {
    const auto& v = tris_[t];
    dedge_.erase(directed_key(v[0], v[1]));
    dedge_.erase(directed_key(v[1], v[2]));
    dedge_.erase(directed_key(v[2], v[0]));
    alive_[t] = 0;
    free_.push_back(t);
  }

  std::optional<std::size_t> tri_of(std::size_t u, std::size_t v) const {
    const auto it = dedge_.find(directed_key(u, v));
    if (it == dedge_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t third(std::size_t t, std::size_t u, std::size_t v) const {
    for (auto w : tris_[t])
      if (w != u && w != v) return w;
    return npos;
  }

  bool is_constrained(std::size_t u, std::size_t v) const {
    return constrained_.count(undirected_key(u, v)) != 0;
  }

  // Replaces the diagonal u-v of the quad (u, x, v, w) with w-x.
  void flip(std::size_t u, std::size_t v) {
    const std::size_t t1 = *tri_of(u, v);
    const std::size_t t2 = *tri_of(v, u);
    const std::size_t w = third(t1, u, v);
    const std::size_t x = third(t2, v, u);
    remove(t1);
    remove(t2);
    add(w, u, x);
    add(x, v, w);
  }

  bool convex_quad(std::size_t u, std::size_t v, std::size_t w, std::size_t x) const {
    return orient2d(pts_[w], pts_[u], pts_[x]) > 0 && orient2d(pts_[x], pts_[v], pts_[w]) > 0;
  }

  // True when the unconstrained interior edge u-v is not locally Delaunay.
  bool illegal(std::size_t u, std::size_t v) const {
    if (is_constrained(u, v)) return false;
    const auto t1 = tri_of(u, v);
    const auto t2 = tri_of(v, u);
    if (!t1 || !t2) return false;
    const std::size_t w = third(*t1, u, v);
    const std::size_t x = third(*t2, v, u);
    const int s = incircle(pts_[u], pts_[v], pts_[w], pts_[x]);
    if (s > 0) return convex_quad(u, v, w, x);
    if (s < 0) return false;
    return std::min(w, x) < std::min(u, v) && convex_quad(u, v, w, x);
  }

  // Lawson legalization of u-v seen from the triangle (u, v, apex).
  void legalize(std::size_t u, std::size_t v) {
    std::vector<std::pair<std::size_t, std::size_t>> stack{{u, v}};
    while (!stack.empty()) {
      auto [a, b] = stack.back();
      stack.pop_back();
      if (!illegal(a, b)) continue;
      const std::size_t apex = third(*tri_of(a, b), a, b);
      const std::size_t x = third(*tri_of(b, a), b, a);
      flip(a, b);
      (void)apex;
      stack.emplace_back(a, x);
      stack.emplace_back(x, b);
    }
  }

  bool crosses(std::size_t a, std::size_t b, std::size_t w, std::size_t x) const {
    if (w == a || w == b || x == a || x == b) return false;
    const int s1 = orient2d(pts_[a], pts_[b], pts_[w]);
    const int s2 = orient2d(pts_[a], pts_[b], pts_[x]);
    const int s3 = orient2d(pts_[w], pts_[x], pts_[a]);
    const int s4 = orient2d(pts_[w], pts_[x], pts_[b]);
    return s1 * s2 < 0 && s3 * s4 < 0;
  }

  std::vector<std::size_t> triangles_around(std::size_t a) const;
};

std::vector<std::size_t> CdtBuilder::triangles_around(std::size_t a) const {
  std::vector<std::size_t> out;
  std::size_t start = vertex_tri_[a];
  if (start == npos || !alive_[start]) throw GeometryError("CDT: vertex without triangles");
  std::unordered_set<std::size_t> seen{start};
  std::vector<std::size_t> stack{start};
  while (!stack.empty()) {
    const std::size_t t = stack.back();
    stack.pop_back();
    out.push_back(t);
    for (auto w : tris_[t]) {
      if (w == a) continue;
      for (auto n : {tri_of(a, w), tri_of(w, a)}) {
        if (n && seen.insert(*n).second) stack.push_back(*n);
      }
    }
  }
  return out;
}

void CdtBuilder::triangulate_hull() {
  const std::size_t n = pts_.size();
  if (n < 3) throw GeometryError("CDT needs at least 3 points");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return pts_[i] < pts_[j]; });
  for (std::size_t i = 1; i < n; ++i)
    if (pts_[order[i]] == pts_[order[i - 1]]) throw GeometryError("CDT: duplicate points");

  std::size_t k = 2;
  while (k < n && orient2d(pts_[order[0]], pts_[order[1]], pts_[order[k]]) == 0) ++k;
  if (k == n) throw GeometryError("CDT: all points are collinear");
  const int s = orient2d(pts_[order[0]], pts_[order[1]], pts_[order[k]]);

  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    if (s > 0) {
      add(order[i], order[i + 1], order[k]);
    } else {
      add(order[i + 1], order[i], order[k]);
    }
  }
  if (s > 0) {
    for (std::size_t i = 0; i < k; ++i) hull.push_back(order[i]);
    hull.push_back(order[k]);
  } else {
    for (std::size_t i = k; i-- > 0;) hull.push_back(order[i]);
    hull.push_back(order[k]);
  }
  for (std::size_t i = 0; i + 1 < k; ++i) legalize(order[i], order[i + 1]);

  for (std::size_t idx = k + 1; idx < n; ++idx) {
    const std::size_t q = order[idx];
    const std::size_t h = hull.size();
    std::vector<char> visible(h, 0);
    std::size_t any = npos;
    for (std::size_t i = 0; i < h; ++i) {
      if (orient2d(pts_[hull[i]], pts_[hull[(i + 1) % h]], pts_[q]) < 0) {
        visible[i] = 1;
        any = i;
      }
    }
    if (any == npos) throw GeometryError("CDT: sweep point not outside the hull");
    std::size_t first = any;
    while (visible[(first + h - 1) % h] && (first + h - 1) % h != any) first = (first + h - 1) % h;
    std::size_t last = any;  // index of last visible edge
    while (visible[(last + 1) % h] && (last + 1) % h != first) last = (last + 1) % h;

    std::vector<std::pair<std::size_t, std::size_t>> fixed;
    for (std::size_t i = first;; i = (i + 1) % h) {
      const std::size_t u = hull[(i + 1) % h];
      const std::size_t v = hull[i];
      add(u, v, q);
      fixed.emplace_back(u, v);
      if (i == last) break;
    }
    // New hull: keep hull[first], q, hull[last + 1], drop the vertices in between.
    std::vector<std::size_t> next;
    next.reserve(h + 1);
    const std::size_t end_vertex = (last + 1) % h;
    for (std::size_t i = end_vertex;; i = (i + 1) % h) {
      next.push_back(hull[i]);
      if (i == first) break;
    }
    next.push_back(q);
    hull = std::move(next);
    for (auto [u, v] : fixed) legalize(u, v);
  }
}

void CdtBuilder::insert_constraint(std::size_t a, std::size_t b) {
  if (a == b) throw GeometryError("CDT: degenerate constraint");
  if (tri_of(a, b) || tri_of(b, a)) {
    constrained_.insert(undirected_key(a, b));
    return;
  }

  // Walk from a towards b collecting the crossed edges.
  std::deque<std::pair<std::size_t, std::size_t>> crossing;
  {
    std::size_t right = npos, left = npos;
    for (std::size_t t : triangles_around(a)) {
      auto v = tris_[t];
      while (v[0] != a) std::rotate(v.begin(), v.begin() + 1, v.end());
      if (orient2d(pts_[a], pts_[v[1]], pts_[b]) > 0 && orient2d(pts_[a], pts_[v[2]], pts_[b]) < 0) {
        right = v[1];
        left = v[2];
        break;
      }
    }
    if (right == npos) throw GeometryError("CDT: constraint passes through a vertex");
    for (std::size_t guard = 0;; ++guard) {
      if (guard > 4 * tris_.size() + 16) throw GeometryError("CDT: constraint walk did not terminate");
      if (is_constrained(right, left)) throw GeometryError("CDT: crossing constraints");
      crossing.emplace_back(right, left);
      const auto t = tri_of(left, right);
      if (!t) throw GeometryError("CDT: constraint leaves the hull");
      const std::size_t r = third(*t, left, right);
      if (r == b) break;
      const int side = orient2d(pts_[a], pts_[b], pts_[r]);
      if (side == 0) throw GeometryError("CDT: constraint passes through a vertex");
      if (side > 0) {
        left = r;
      } else {
        right = r;
      }
    }
  }

  std::size_t guard = 0;
  const std::size_t limit = 64 * (crossing.size() + 4) * (crossing.size() + 4);
  while (!crossing.empty()) {
    if (++guard > limit) throw GeometryError("CDT: constraint recovery did not terminate");
    auto [u, v] = crossing.front();
    crossing.pop_front();
    const auto t1 = tri_of(u, v);
    const auto t2 = tri_of(v, u);
    if (!t1 || !t2) throw GeometryError("CDT: lost a crossing edge");
    const std::size_t w = third(*t1, u, v);
    const std::size_t x = third(*t2, v, u);
    if (!convex_quad(u, v, w, x)) {
      crossing.emplace_back(u, v);
      continue;
    }
    flip(u, v);
    if (crosses(a, b, w, x)) crossing.emplace_back(w, x);
  }
  if (!tri_of(a, b) && !tri_of(b, a)) throw GeometryError("CDT: constraint not recovered");
  constrained_.insert(undirected_key(a, b));
}

void CdtBuilder::restore_delaunay() {
  std::vector<std::pair<std::size_t, std::size_t>> stack;
  for (std::size_t t = 0; t < tris_.size(); ++t) {
    if (!alive_[t]) continue;
    const auto& v = tris_[t];
    for (int i = 0; i < 3; ++i) {
      const std::size_t u = v[i], w = v[(i + 1) % 3];
      if (u < w) stack.emplace_back(u, w);
    }
  }
  while (!stack.empty()) {
    auto [u, v] = stack.back();
    stack.pop_back();
    if (!illegal(u, v)) continue;
    const std::size_t w = third(*tri_of(u, v), u, v);
    const std::size_t x = third(*tri_of(v, u), v, u);
    flip(u, v);
    stack.emplace_back(u, x);
    stack.emplace_back(x, v);
    stack.emplace_back(v, w);
    stack.emplace_back(w, u);
  }
}

std::vector<std::array<std::size_t, 3>> CdtBuilder::triangles() const {
  std::vector<std::array<std::size_t, 3>> out;
  for (std::size_t t = 0; t < tris_.size(); ++t) {
    if (!alive_[t]) continue;
    auto v = tris_[t];
    while (v[0] > v[1] || v[0] > v[2]) std::rotate(v.begin(), v.begin() + 1, v.end());
    out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

ImageTriangulation constrained_delaunay(const ImagePSLG& pslg) {
  ImageTriangulation out;
  out.points = pslg.positions();
  CdtBuilder builder(out.points);
  builder.triangulate_hull();
  std::unordered_set<std::uint64_t> seen;
  for (const auto& c : pslg.constraints) {
    if (c.a >= out.points.size() || c.b >= out.points.size())
      throw GeometryError("CDT: constraint index out of range");
    if (!seen.insert(undirected_key(c.a, c.b)).second) continue;
    builder.insert_constraint(c.a, c.b);
    out.constraint_edges.push_back({std::min(c.a, c.b), std::max(c.a, c.b)});
  }
  builder.restore_delaunay();
  out.triangles = builder.triangles();
  return out;
}

ImageTriangulation restrict_to_image(ImageTriangulation tri, const SurfaceMesh& mesh,
                                     const PlanarMap& map) {
  const auto& img = map.images;
  struct Box {
    double xmin, xmax, ymin, ymax;
  };
  std::vector<Box> boxes;
  boxes.reserve(mesh.num_triangles());
  for (const auto& f : mesh.triangles()) {
    Box b{img[f[0]].ax, img[f[0]].ax, img[f[0]].ay, img[f[0]].ay};
    for (auto v : f) {
      b.xmin = std::min(b.xmin, img[v].ax);
      b.xmax = std::max(b.xmax, img[v].ax);
      b.ymin = std::min(b.ymin, img[v].ay);
      b.ymax = std::max(b.ymax, img[v].ay);
    }
    const double pad = 1e-9 * (std::abs(b.xmin) + std::abs(b.xmax) + std::abs(b.ymin) + std::abs(b.ymax) + 1.0);
    boxes.push_back({b.xmin - pad, b.xmax + pad, b.ymin - pad, b.ymax + pad});
  }

  tri.inside.assign(tri.triangles.size(), 0);
  tri.coverers.assign(tri.triangles.size(), {});
  const Rational third_weight(1, 3);
  for (std::size_t t = 0; t < tri.triangles.size(); ++t) {
    const auto& v = tri.triangles[t];
    const Point2 bary((tri.points[v[0]].x + tri.points[v[1]].x + tri.points[v[2]].x) * third_weight,
                      (tri.points[v[0]].y + tri.points[v[1]].y + tri.points[v[2]].y) * third_weight);
    for (std::size_t f = 0; f < mesh.num_triangles(); ++f) {
      const Box& b = boxes[f];
      if (bary.ax < b.xmin || bary.ax > b.xmax || bary.ay < b.ymin || bary.ay > b.ymax) continue;
      const auto& face = mesh.triangles()[f];
      if (in_closed_triangle(bary, img[face[0]], img[face[1]], img[face[2]]))
        tri.coverers[t].push_back(f);
    }
    tri.inside[t] = tri.coverers[t].empty() ? 0 : 1;
  }
  return tri;
}

}  // namespace dhopf
