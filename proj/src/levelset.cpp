#include "dhopf/levelset.hpp"

#include "dhopf/errors.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

namespace dhopf {

namespace {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

Eigen::Vector3d displacement(const InducedTriangulation& ind, const NeighborComplex& cx, std::size_t complex_vertex) {
  const auto& pv = cx.vertices[complex_vertex];
  return ind.position(pv.a) - ind.position(pv.b);
}

// Closest point of triangle (a, b, c) to the origin, as barycentric weights.
Eigen::Vector3d closest_to_origin(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c) {
  const Eigen::Vector3d ab = b - a, ac = c - a, ap = -a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0 && d2 <= 0) return {1, 0, 0};
  const Eigen::Vector3d bp = -b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0 && d4 <= d3) return {0, 1, 0};
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) {
    const double v = d1 / (d1 - d3);
    return {1 - v, v, 0};
  }
  const Eigen::Vector3d cp = -c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0 && d5 <= d6) return {0, 0, 1};
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) {
    const double w = d2 / (d2 - d6);
    return {1 - w, 0, w};
  }
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return {0, 1 - w, w};
  }
  const double denom = 1.0 / (va + vb + vc);
  const double v = vb * denom, w = vc * denom;
  return {1 - v - w, v, w};
}

// Real roots of A s^2 + B s + C (A >= 0), ascending. Returns the root count.
int quadratic_roots(double A, double B, double C, double& r0, double& r1) {
  if (A == 0.0) {
    if (B == 0.0) return 0;
    r0 = r1 = -C / B;
    return 1;
  }
  const double disc = B * B - 4 * A * C;
  if (disc < 0) {
    r0 = r1 = -B / (2 * A);
    return 0;
  }
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (B + (B >= 0 ? sq : -sq));
  double x0 = q / A;
  double x1 = q != 0.0 ? C / q : x0;
  if (x0 > x1) std::swap(x0, x1);
  r0 = x0;
  r1 = x1;
  return 2;
}

struct Key {
  std::uint64_t a, b, c;
  friend bool operator==(const Key& x, const Key& y) { return x.a == y.a && x.b == y.b && x.c == y.c; }
  friend bool operator<(const Key& x, const Key& y) {
    return std::tie(x.a, x.b, x.c) < std::tie(y.a, y.b, y.c);
  }
};
std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
struct KeyHash {
  std::size_t operator()(const Key& k) const { return mix(k.a ^ mix(k.b ^ mix(k.c))); }
};
struct MixHash {
  std::size_t operator()(std::uint64_t x) const { return mix(x); }
};

enum : std::uint64_t {
  kCornerVertex = 1,
  kEdgeVertex = 2,
  kInnerVertex = 3,
  kEdgeCrossing = 4,
  kInnerCrossing = 5,
  kIsland = 6,
};
constexpr std::uint64_t kBeforeSide = 1ULL << 54;
constexpr std::uint64_t kAfterSide = 1ULL << 55;

Key make_key(std::uint64_t type, std::uint64_t id, std::uint64_t b = 0, std::uint64_t c = 0) {
  return {(type << 56) | id, b, c};
}

// Vertices and crossings strictly inside a coarse triangle live in a table
// that is reset per triangle; their key carries a compact code in b.
bool is_local(const Key& k) {
  const std::uint64_t type = k.a >> 56;
  return type == kInnerVertex || type == kInnerCrossing;
}
std::uint64_t local_code(const Key& k) { return k.b | (((k.a >> 54) & 3) << 49); }

using Grid = std::array<std::int64_t, 3>;

std::uint64_t pack(const Grid& g) { return (static_cast<std::uint64_t>(g[1]) << 24) | static_cast<std::uint64_t>(g[2]); }

// One crossing of the level set with a leaf edge, seen in traversal order.
struct EdgeCrossing {
  Key key;
  Eigen::Vector3d lambda;  // in the coarse triangle
  bool below_after;        // sign just after the crossing, in traversal direction
  bool forward;            // traversal agrees with the canonical edge orientation
};

struct Crossings {
  std::array<EdgeCrossing, 2> c;
  int n = 0;
};

// Canonical description of the level set along one edge of the resolved complex.
struct CoarseEdge {
  bool ready = false;
  bool below0 = false, below1 = false;  // at the canonical start / end
  int count = 0;
  std::array<double, 2> r{};            // crossing parameters, ascending
  std::array<bool, 2> entry{};          // above -> below in canonical direction
  bool all_below = false;
  double lo = 1.0, hi = 0.0;            // closed below-set [lo, hi] when it is one interval
};

class LevelSetBuilder {
 public:
  LevelSetBuilder(const InducedTriangulation& ind, const NeighborComplex& cx, const ResolvedComplex& rc,
                  double delta, const LevelSetOptions& options, LevelSetResult& out)
      : ind_(ind), cx_(cx), rc_(rc), delta_(delta), delta2_(delta * delta), out_(out) {
    depth_cap_ = std::min<std::size_t>(options.max_depth, 20);
    n_ = std::int64_t{1} << depth_cap_;
    const double eps = options.eps_level > 0 ? options.eps_level : 1e-4 * options.scale;
    out_.eps_level = eps;
    threshold_ = std::max(eps, 1e-3 * delta);
    coarse_edges_.resize(rc.edges.size());
  }

  void process_triangle(std::size_t t);
  void finish();

 private:
  const InducedTriangulation& ind_;
  const NeighborComplex& cx_;
  const ResolvedComplex& rc_;
  double delta_, delta2_;
  std::size_t depth_cap_ = 8;
  std::int64_t n_ = 256;
  double threshold_ = 0.0;
  LevelSetResult& out_;

  // Union-find over region pieces.
  std::unordered_map<Key, std::size_t, KeyHash> node_index_;
  std::unordered_map<std::uint64_t, std::size_t, MixHash> local_nodes_;
  std::vector<std::size_t> parent_;
  std::vector<char> node_below_;

  // Crossings and the level arcs joining them.
  std::unordered_map<Key, std::size_t, KeyHash> crossing_index_;
  std::unordered_map<std::uint64_t, std::size_t, MixHash> local_crossings_;
  std::vector<LoopPoint> crossing_points_;
  std::vector<std::array<std::size_t, 2>> crossing_arcs_;
  std::vector<std::uint8_t> crossing_degree_;
  std::size_t islands_ = 0;

  std::vector<CoarseEdge> coarse_edges_;

  // Coarse edge opposite corner k; the canonical start has the smaller resolved vertex id.
  struct SideInfo {
    std::size_t edge;
    std::size_t start_corner, end_corner;
    const CoarseEdge* ce;
  };

  // Current coarse triangle.
  std::size_t t_ = 0;
  std::array<std::size_t, 3> tv_{};
  std::array<SideInfo, 3> sides_{};
  std::array<Eigen::Vector3d, 3> D_;
  PairCorners corners_;
  std::size_t depth_ = 0;

  std::size_t node(const Key& key, bool below) {
    std::size_t id;
    bool inserted;
    if (is_local(key)) {
      auto r = local_nodes_.try_emplace(local_code(key), parent_.size());
      id = r.first->second;
      inserted = r.second;
    } else {
      auto r = node_index_.try_emplace(key, parent_.size());
      id = r.first->second;
      inserted = r.second;
    }
    if (inserted) {
      parent_.push_back(parent_.size());
      node_below_.push_back(below ? 1 : 0);
    }
    return id;
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t x, std::size_t y) {
    x = find(x);
    y = find(y);
    if (x != y) parent_[std::max(x, y)] = std::min(x, y);
  }

  Eigen::Vector3d lambda_of(const Grid& g) const {
    return Eigen::Vector3d(static_cast<double>(g[0]), static_cast<double>(g[1]), static_cast<double>(g[2])) /
           static_cast<double>(n_);
  }
  Eigen::Vector3d D_at(const Eigen::Vector3d& lam) const { return lam[0] * D_[0] + lam[1] * D_[1] + lam[2] * D_[2]; }

  struct OnEdge {
    const SideInfo* side;
    std::int64_t m;  // parameter numerator from the canonical start
  };
  OnEdge on_edge(int k, const Grid& g) const {
    const SideInfo& si = sides_[k];
    return {&si, g[si.end_corner]};
  }

  void prepare_coarse_edge(int k) {
    const int i = (k + 1) % 3, j = (k + 2) % 3;
    SideInfo& si = sides_[k];
    si.edge = rc_.triangle_edges[t_][static_cast<std::size_t>(i)];
    si.start_corner = static_cast<std::size_t>(tv_[i] < tv_[j] ? i : j);
    si.end_corner = static_cast<std::size_t>(tv_[i] < tv_[j] ? j : i);
    CoarseEdge& ce = coarse_edges_[si.edge];
    si.ce = &ce;
    if (ce.ready) return;
    ce.ready = true;
    const Eigen::Vector3d& Dx = D_[si.start_corner];
    const Eigen::Vector3d& Dy = D_[si.end_corner];
    ce.below0 = Dx.squaredNorm() <= delta2_;
    ce.below1 = Dy.squaredNorm() <= delta2_;
    const Eigen::Vector3d d = Dy - Dx;
    double r0 = 0, r1 = 0;
    const int nroots = quadratic_roots(d.squaredNorm(), 2 * Dx.dot(d), Dx.squaredNorm() - delta2_, r0, r1);
    auto inside = [](double r) { return std::min(std::max(r, 0.0), 1.0); };
    if (ce.below0 && ce.below1) {
      ce.all_below = true;
      ce.lo = 0;
      ce.hi = 1;
    } else if (ce.below0) {
      ce.count = 1;
      ce.r[0] = inside(nroots ? r1 : 0.0);
      ce.entry[0] = false;
      ce.lo = 0;
      ce.hi = ce.r[0];
    } else if (ce.below1) {
      ce.count = 1;
      ce.r[0] = inside(nroots ? r0 : 1.0);
      ce.entry[0] = true;
      ce.lo = ce.r[0];
      ce.hi = 1;
    } else if (nroots == 2 && r0 > 0.0 && r1 < 1.0 && r0 < r1) {
      ce.count = 2;
      ce.r = {r0, r1};
      ce.entry = {true, false};
      ce.lo = r0;
      ce.hi = r1;
    }
  }

  int zero_coordinate(const Grid& g) const {
    int zeros = 0, k = -1;
    for (int i = 0; i < 3; ++i)
      if (g[i] == 0) {
        ++zeros;
        k = i;
      }
    return zeros == 1 ? k : (zeros == 2 ? -2 : -1);
  }

  Key vertex_key(const Grid& g) const {
    const int z = zero_coordinate(g);
    if (z == -2) {
      for (int k = 0; k < 3; ++k)
        if (g[k] == n_) return make_key(kCornerVertex, tv_[k]);
    }
    if (z >= 0) {
      const auto oe = on_edge(z, g);
      return make_key(kEdgeVertex, oe.side->edge, static_cast<std::uint64_t>(oe.m));
    }
    return make_key(kInnerVertex, t_, pack(g));
  }

  bool vertex_below(const Grid& g) {
    const int z = zero_coordinate(g);
    if (z == -2) {
      for (int k = 0; k < 3; ++k)
        if (g[k] == n_) return D_[k].squaredNorm() <= delta2_;
    }
    if (z >= 0) {
      const auto oe = on_edge(z, g);
      const auto& ce = *oe.side->ce;
      const double s = static_cast<double>(oe.m) / static_cast<double>(n_);
      return ce.all_below || (ce.lo <= s && s <= ce.hi);
    }
    return D_at(lambda_of(g)).squaredNorm() <= delta2_;
  }

  // Crossings on the leaf edge u -> v, in traversal order.
  Crossings edge_crossings(const Grid& u, const Grid& v, bool bu, bool bv) {
    Crossings out;
    int shared = -1;
    for (int k = 0; k < 3; ++k)
      if (u[k] == 0 && v[k] == 0) shared = k;

    if (shared >= 0) {
      const auto ou = on_edge(shared, u);
      const auto ov = on_edge(shared, v);
      const auto& ce = *ou.side->ce;
      const bool forward = ou.m < ov.m;
      const double sa = static_cast<double>(std::min(ou.m, ov.m)) / static_cast<double>(n_);
      const double sb = static_cast<double>(std::max(ou.m, ov.m)) / static_cast<double>(n_);
      for (int i = 0; i < ce.count; ++i) {
        const double r = ce.r[i];
        const bool in = ce.entry[i] ? (sa < r && r <= sb) : (sa <= r && r < sb);
        if (!in) continue;
        const double s = nudge(r, sa, sb);
        Eigen::Vector3d lam = Eigen::Vector3d::Zero();
        lam[ou.side->start_corner] = 1.0 - s;
        lam[ou.side->end_corner] = s;
        out.c[out.n++] = {make_key(kEdgeCrossing, ou.side->edge, static_cast<std::uint64_t>(i)), lam,
                          forward ? ce.entry[i] : !ce.entry[i], forward};
      }
      if (!forward) std::reverse(out.c.begin(), out.c.begin() + out.n);
      return out;
    }

    // Interior edge: canonical orientation from the smaller packed grid point.
    const bool forward = pack(u) < pack(v);
    const Grid& p = forward ? u : v;
    const Grid& q = forward ? v : u;
    const bool bp = forward ? bu : bv;
    const bool bq = forward ? bv : bu;
    if (bp && bq) return out;
    const Eigen::Vector3d lp = lambda_of(p), lq = lambda_of(q);
    const Eigen::Vector3d Dp = D_at(lp), d = D_at(lq) - Dp;
    double r0 = 0, r1 = 0;
    const int nroots = quadratic_roots(d.squaredNorm(), 2 * Dp.dot(d), Dp.squaredNorm() - delta2_, r0, r1);
    std::array<std::pair<double, bool>, 2> params;  // (s, entry)
    int np = 0;
    if (bp) {
      params[np++] = {nroots ? r1 : 0.0, false};
    } else if (bq) {
      params[np++] = {nroots ? r0 : 1.0, true};
    } else if (nroots == 2 && r0 > 0.0 && r1 < 1.0 && r0 < r1) {
      params[np++] = {r0, true};
      params[np++] = {r1, false};
    }
    // A fine edge is identified by its midpoint on the doubled grid.
    const Grid mid2{p[0] + q[0], p[1] + q[1], p[2] + q[2]};
    const std::uint64_t code = (std::uint64_t{1} << 48) | pack(mid2);
    for (int i = 0; i < np; ++i) {
      const double s = nudge(params[i].first, 0.0, 1.0);
      const bool entry = params[i].second;
      out.c[out.n++] = {make_key(kInnerCrossing, t_, code | (static_cast<std::uint64_t>(i) << 47)),
                        lp + s * (lq - lp), forward ? entry : !entry, forward};
    }
    if (!forward) std::reverse(out.c.begin(), out.c.begin() + out.n);
    return out;
  }

  // Keeps a crossing strictly inside its edge (a vertex exactly on the level
  // counts as below, so the crossing moves toward the above side).
  double nudge(double r, double sa, double sb) {
    const double eta = 1e-12 * (sb - sa);
    if (r < sa + eta) {
      ++out_.perturbed;
      return sa + eta;
    }
    if (r > sb - eta) {
      ++out_.perturbed;
      return sb - eta;
    }
    return r;
  }

  std::size_t crossing_id(const EdgeCrossing& c) {
    std::size_t id;
    bool inserted;
    if (is_local(c.key)) {
      auto r = local_crossings_.try_emplace(local_code(c.key), crossing_points_.size());
      id = r.first->second;
      inserted = r.second;
    } else {
      auto r = crossing_index_.try_emplace(c.key, crossing_points_.size());
      id = r.first->second;
      inserted = r.second;
    }
    if (inserted) {
      crossing_points_.push_back(loop_point(c.lambda));
      crossing_arcs_.push_back({npos, npos});
      crossing_degree_.push_back(0);
    }
    return id;
  }

  LoopPoint loop_point(const Eigen::Vector3d& lam) const {
    LoopPoint p;
    p.triangle = t_;
    p.barycentric = {lam[0], lam[1], lam[2]};
    p.a = lam[0] * corners_.a[0] + lam[1] * corners_.a[1] + lam[2] * corners_.a[2];
    p.b = lam[0] * corners_.b[0] + lam[1] * corners_.b[1] + lam[2] * corners_.b[2];
    return p;
  }

  void add_arc(std::size_t c0, std::size_t c1) {
    for (auto c : {c0, c1}) {
      if (crossing_degree_[c] >= 2) throw GeometryError("level set is not a 1-manifold");
      crossing_arcs_[c][crossing_degree_[c]++] = (c == c0) ? c1 : c0;
    }
  }

  Key side_key(const EdgeCrossing& c, bool after_in_traversal) const {
    const bool canonical_after = after_in_traversal == c.forward;
    Key k = c.key;
    k.a |= canonical_after ? kAfterSide : kBeforeSide;
    return k;
  }

  void uniform_node(const std::array<Grid, 3>& g, bool below) {
    const std::size_t n0 = node(vertex_key(g[0]), below);
    unite(n0, node(vertex_key(g[1]), below));
    unite(n0, node(vertex_key(g[2]), below));
  }

  void recurse(const std::array<Grid, 3>& g, std::size_t level);
  void leaf(const std::array<Grid, 3>& g);
};

void LevelSetBuilder::process_triangle(std::size_t t) {
  t_ = t;
  tv_ = rc_.triangles[t];
  corners_ = pair_corners(ind_, cx_, t);
  for (int k = 0; k < 3; ++k) D_[k] = corners_.a[k] - corners_.b[k];
  for (int k = 0; k < 3; ++k) prepare_coarse_edge(k);
  local_nodes_.clear();
  local_crossings_.clear();
  double diam = 0;
  for (int i = 0; i < 3; ++i) diam = std::max(diam, (D_[i] - D_[(i + 1) % 3]).norm());
  depth_ = 0;
  while (depth_ < depth_cap_ && diam / static_cast<double>(std::int64_t{1} << depth_) > threshold_) ++depth_;
  out_.depth_used = std::max(out_.depth_used, depth_);
  recurse({Grid{n_, 0, 0}, Grid{0, n_, 0}, Grid{0, 0, n_}}, 0);
}

void LevelSetBuilder::recurse(const std::array<Grid, 3>& g, std::size_t level) {
  std::array<Eigen::Vector3d, 3> d;
  double vmax = 0;
  for (int k = 0; k < 3; ++k) {
    d[k] = D_at(lambda_of(g[k]));
    vmax = std::max(vmax, d[k].norm());
  }
  const double margin = 1e-9;
  if (vmax < delta_ * (1 - margin)) {
    uniform_node(g, true);
    return;
  }
  const Eigen::Vector3d w = closest_to_origin(d[0], d[1], d[2]);
  const double vmin = (w[0] * d[0] + w[1] * d[1] + w[2] * d[2]).norm();
  if (vmin > delta_ * (1 + margin)) {
    uniform_node(g, false);
    return;
  }
  if (level == depth_) {
    leaf(g);
    return;
  }
  auto mid = [](const Grid& a, const Grid& b) { return Grid{(a[0] + b[0]) / 2, (a[1] + b[1]) / 2, (a[2] + b[2]) / 2}; };
  const Grid m01 = mid(g[0], g[1]), m12 = mid(g[1], g[2]), m20 = mid(g[2], g[0]);
  recurse({g[0], m01, m20}, level + 1);
  recurse({m01, g[1], m12}, level + 1);
  recurse({m20, m12, g[2]}, level + 1);
  recurse({m01, m12, m20}, level + 1);
}

void LevelSetBuilder::leaf(const std::array<Grid, 3>& g) {
  ++out_.refined_triangles;
  std::array<bool, 3> below;
  std::array<Key, 3> vkey;
  for (int k = 0; k < 3; ++k) {
    below[k] = vertex_below(g[k]);
    vkey[k] = vertex_key(g[k]);
  }

  // Boundary walk: corner k, then the crossings on edge k -> k+1.
  struct Event {
    bool is_crossing;
    int corner;
    EdgeCrossing crossing;
  };
  std::array<Event, 10> events;
  std::size_t nev = 0, ncross = 0;
  for (int k = 0; k < 3; ++k) {
    events[nev++] = {false, k, {}};
    const auto cs = edge_crossings(g[k], g[(k + 1) % 3], below[k], below[(k + 1) % 3]);
    for (int i = 0; i < cs.n; ++i) {
      events[nev++] = {true, -1, cs.c[i]};
      ++ncross;
    }
  }

  if (ncross == 0) {
    const bool b = below[0];
    uniform_node(g, b);
    if (b) return;
    // Everything on the boundary is above; the sublevel set may still be an
    // island strictly inside the leaf.
    std::array<Eigen::Vector3d, 3> lam, d;
    for (int k = 0; k < 3; ++k) {
      lam[k] = lambda_of(g[k]);
      d[k] = D_at(lam[k]);
    }
    const Eigen::Vector3d w = closest_to_origin(d[0], d[1], d[2]);
    const double vmin = (w[0] * d[0] + w[1] * d[1] + w[2] * d[2]).norm();
    if (!(vmin < delta_) || w.minCoeff() <= 1e-12) return;
    const Eigen::Vector3d center = w[0] * lam[0] + w[1] * lam[1] + w[2] * lam[2];
    const Eigen::Vector3d dc = D_at(center);
    std::vector<LoopPoint> loop;
    constexpr int kSamples = 24;
    for (int s = 0; s < kSamples; ++s) {
      const double theta = 2 * M_PI * s / kSamples;
      // Direction in the leaf's plane, expressed through two of its edges.
      const Eigen::Vector3d dir = std::cos(theta) * (lam[1] - lam[0]) + std::sin(theta) * (lam[2] - lam[0]);
      const Eigen::Vector3d dd = D_at(dir) - D_at(Eigen::Vector3d::Zero());
      double r0 = 0, r1 = 0;
      quadratic_roots(dd.squaredNorm(), 2 * dc.dot(dd), dc.squaredNorm() - delta2_, r0, r1);
      loop.push_back(loop_point(center + r1 * dir));
    }
    out_.loops.push_back(std::move(loop));
    const std::size_t island = node(make_key(kIsland, islands_++), true);
    (void)island;
    return;
  }

  // Rotate so the walk starts at a crossing.
  const auto end = events.begin() + static_cast<std::ptrdiff_t>(nev);
  const auto first = std::find_if(events.begin(), end, [](const Event& e) { return e.is_crossing; });
  std::rotate(events.begin(), first, end);
  events[nev++] = events.front();

  std::size_t below_hub = npos;
  std::size_t start = 0;
  for (std::size_t i = 1; i < nev; ++i) {
    if (!events[i].is_crossing) continue;
    const EdgeCrossing& cs = events[start].crossing;
    const EdgeCrossing& ce = events[i].crossing;
    const bool b = cs.below_after;
    std::size_t root = node(side_key(cs, true), b);
    unite(root, node(side_key(ce, false), b));
    for (std::size_t j = start + 1; j < i; ++j) unite(root, node(vkey[events[j].corner], b));
    if (b) {
      if (below_hub == npos) {
        below_hub = root;
      } else {
        unite(below_hub, root);
      }
    } else {
      add_arc(crossing_id(cs), crossing_id(ce));
    }
    start = i;
  }
}

void LevelSetBuilder::finish() {
  for (std::size_t c = 0; c < crossing_degree_.size(); ++c)
    if (crossing_degree_[c] != 2) throw GeometryError("level set is not closed");

  std::vector<char> used(crossing_points_.size(), 0);
  for (std::size_t s = 0; s < crossing_points_.size(); ++s) {
    if (used[s]) continue;
    std::vector<LoopPoint> loop;
    std::size_t prev = npos, cur = s;
    while (!used[cur]) {
      used[cur] = 1;
      loop.push_back(crossing_points_[cur]);
      const auto& arcs = crossing_arcs_[cur];
      const std::size_t next = (arcs[0] != prev || arcs[0] == arcs[1]) ? arcs[0] : arcs[1];
      prev = cur;
      cur = next;
    }
    out_.loops.push_back(std::move(loop));
  }
  std::sort(out_.loops.begin(), out_.loops.end(), [](const auto& x, const auto& y) {
    return std::tie(x.front().triangle, x.front().barycentric) < std::tie(y.front().triangle, y.front().barycentric);
  });
  for (const auto& loop : out_.loops) {
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const auto& p = loop[i];
      const auto& q = loop[(i + 1) % loop.size()];
      out_.total_length += std::sqrt((p.a - q.a).squaredNorm() + (p.b - q.b).squaredNorm());
    }
  }
  out_.total_loop_count = out_.loops.size();

  std::vector<char> seen_below(parent_.size(), 0), seen_above(parent_.size(), 0);
  for (std::size_t x = 0; x < parent_.size(); ++x) {
    const std::size_t r = find(x);
    auto& seen = node_below_[x] ? seen_below : seen_above;
    if (!seen[r]) {
      seen[r] = 1;
      ++(node_below_[x] ? out_.below_components : out_.above_components);
    }
  }
  out_.separated = out_.below_components >= 1 && out_.above_components >= 1;
}

}  // namespace

double lifted_distance(const InducedTriangulation& ind, const NeighborComplex& cx, std::size_t t,
                       const std::array<double, 3>& x) {
  const auto pc = pair_corners(ind, cx, t);
  Eigen::Vector3d d = Eigen::Vector3d::Zero();
  for (int k = 0; k < 3; ++k) d += x[k] * (pc.a[k] - pc.b[k]);
  return d.norm();
}

DistanceRange lift_distance(const InducedTriangulation& ind, const NeighborComplex& cx, const ResolvedComplex& rc,
                            std::size_t component) {
  DistanceRange range;
  for (std::size_t v = 0; v < rc.num_vertices(); ++v) {
    if (component != npos && rc.vertex_component[v] != component) continue;
    const double d = displacement(ind, cx, rc.to_complex[v]).norm();
    if (d > range.max) {
      range.max = d;
      range.argmax_vertex = v;
    }
  }
  return range;
}

LevelSetResult analyze_level_set(const InducedTriangulation& ind, const NeighborComplex& cx,
                                 const ResolvedComplex& rc, std::size_t component, double delta,
                                 const LevelSetOptions& options) {
  const auto range = lift_distance(ind, cx, rc, component);
  if (!(delta > 0.0) || !(delta < range.max))
    throw GeometryError("delta out of range: " + std::to_string(delta) + " not in (0, " +
                        std::to_string(range.max) + ")");
  LevelSetResult out;
  out.delta = delta;
  LevelSetBuilder builder(ind, cx, rc, delta, options, out);
  for (std::size_t t = 0; t < rc.triangles.size(); ++t)
    if (rc.triangle_component[t] == component) builder.process_triangle(t);
  builder.finish();
  return out;
}

LevelSetResult extract_level_set(const InducedTriangulation& ind, const NeighborComplex& cx,
                                 const ResolvedComplex& rc, std::size_t component, double delta,
                                 const LevelSetOptions& options) {
  auto out = analyze_level_set(ind, cx, rc, component, delta, options);
  out.below_components = out.above_components = 0;
  out.separated = false;
  return out;
}

LevelSetResult separation_check(const InducedTriangulation& ind, const NeighborComplex& cx,
                                const ResolvedComplex& rc, std::size_t component, double delta,
                                const LevelSetOptions& options) {
  auto out = analyze_level_set(ind, cx, rc, component, delta, options);
  out.loops.clear();
  return out;
}

}  // namespace dhopf
