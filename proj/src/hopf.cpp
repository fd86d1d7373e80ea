#include "dhopf/hopf.hpp"

#include "dhopf/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <random>

namespace dhopf {

PairCorners pair_corners(const InducedTriangulation& ind, const NeighborComplex& cx, std::size_t t) {
  PairCorners pc;
  const auto& T = cx.triangles[t];
  for (int k = 0; k < 3; ++k) {
    const auto& pv = cx.vertices[T.v[k]];
    pc.a[k] = ind.position(pv.a);
    pc.b[k] = ind.position(pv.b);
  }
  return pc;
}

double collinearity_deviation(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                              const Eigen::Vector3d& p) {
  const Eigen::Vector3d u = a - p;
  const Eigen::Vector3d v = b - p;
  return u.cross(v).norm() / (u.norm() * v.norm());
}

double min_chord(const ConvexRaycaster& caster, const Eigen::Vector3d& p,
                 const std::vector<Eigen::Vector3d>& samples, std::size_t* argmin) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Eigen::Vector3d d = samples[i] - p;
    const double len = d.norm();
    if (len == 0.0) continue;
    const double c = caster.chord_length(p, d / len);
    if (c < best) {
      best = c;
      if (argmin) *argmin = i;
    }
  }
  return best;
}

namespace {

// Tangent basis of the unit vector u.
std::pair<Eigen::Vector3d, Eigen::Vector3d> tangent_basis(const Eigen::Vector3d& u) {
  const Eigen::Vector3d helper = std::abs(u.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
  const Eigen::Vector3d e1 = u.cross(helper).normalized();
  return {e1, u.cross(e1)};
}

}  // namespace

double refined_min_chord(const ConvexRaycaster& caster, const Eigen::Vector3d& p,
                         const std::vector<Eigen::Vector3d>& samples, Eigen::Vector3d* argmin) {
  std::vector<std::pair<double, Eigen::Vector3d>> starts;
  starts.reserve(samples.size());
  for (const auto& s : samples) {
    const Eigen::Vector3d d = s - p;
    if (d.norm() == 0.0) continue;
    const Eigen::Vector3d u = d.normalized();
    starts.emplace_back(caster.chord_length(p, u), u);
  }
  if (starts.empty()) throw GeometryError("no samples for the chord search");
  const std::size_t keep = std::min<std::size_t>(8, starts.size());
  std::partial_sort(starts.begin(), starts.begin() + static_cast<long>(keep), starts.end(),
                    [](const auto& x, const auto& y) { return x.first < y.first; });

  double best = starts.front().first;
  Eigen::Vector3d best_dir = starts.front().second;
  for (std::size_t s = 0; s < keep; ++s) {
    double value = starts[s].first;
    Eigen::Vector3d u = starts[s].second;
    double step = 0.05;
    while (step > 1e-10) {
      const auto [e1, e2] = tangent_basis(u);
      bool moved = false;
      for (const Eigen::Vector3d& dir : {e1, Eigen::Vector3d(-e1), e2, Eigen::Vector3d(-e2)}) {
        const Eigen::Vector3d cand = (u + step * dir).normalized();
        const double c = caster.chord_length(p, cand);
        if (c < value) {
          value = c;
          u = cand;
          moved = true;
          break;
        }
      }
      if (!moved) step *= 0.5;
    }
    if (value < best) {
      best = value;
      best_dir = u;
    }
  }
  if (argmin) *argmin = p + caster.exit_parameter(p, best_dir) * best_dir;
  return best;
}

CenterResult estimate_center(const SurfaceMesh& mesh, const std::vector<Eigen::Vector3d>& extra_samples,
                             const CenterOptions& options) {
  const ConvexRaycaster caster(mesh);
  std::vector<Eigen::Vector3d> samples;
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) samples.push_back(mesh.position(v));
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (const auto& t : mesh.triangles()) {
    for (std::size_t k = 0; k < options.samples_per_face; ++k) {
      const double r1 = std::sqrt(uniform(rng));
      const double r2 = uniform(rng);
      samples.push_back((1 - r1) * mesh.position(t[0]) + r1 * (1 - r2) * mesh.position(t[1]) +
                        r1 * r2 * mesh.position(t[2]));
    }
  }

  const Eigen::Vector3d c0 = mesh.centroid();
  double scale = 0.0;
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) scale = std::max(scale, (mesh.position(v) - c0).norm());
  if (!caster.interior(c0, 1e-12 * scale)) throw GeometryError("origin not interior");

  // Pull a point back toward the centroid until it is safely interior.
  auto project = [&](const Eigen::Vector3d& p) -> Eigen::Vector3d {
    const Eigen::Vector3d d = p - c0;
    const double len = d.norm();
    if (len == 0.0) return p;
    const double limit = 0.98 * caster.exit_parameter(c0, d / len);
    return len <= limit ? p : Eigen::Vector3d(c0 + limit * d / len);
  };
  auto value = [&](const Eigen::Vector3d& p) { return -min_chord(caster, p, samples); };

  // Nelder-Mead on -min_chord.
  std::array<Eigen::Vector3d, 4> x;
  std::array<double, 4> fx;
  x[0] = c0;
  for (int i = 1; i < 4; ++i) {
    Eigen::Vector3d p = c0;
    p[i - 1] += 0.1 * scale;
    x[i] = project(p);
  }
  for (int i = 0; i < 4; ++i) fx[i] = value(x[i]);
  bool converged = false;
  for (std::size_t iter = 0; iter < options.iterations; ++iter) {
    std::array<int, 4> order{0, 1, 2, 3};
    std::sort(order.begin(), order.end(), [&](int i, int j) { return fx[i] < fx[j]; });
    std::array<Eigen::Vector3d, 4> xs;
    std::array<double, 4> fs;
    for (int i = 0; i < 4; ++i) {
      xs[i] = x[order[i]];
      fs[i] = fx[order[i]];
    }
    x = xs;
    fx = fs;
    double size = 0.0;
    for (int i = 1; i < 4; ++i) size = std::max(size, (x[i] - x[0]).norm());
    if (size < 1e-9 * scale) {
      converged = true;
      break;
    }
    const Eigen::Vector3d centroid = (x[0] + x[1] + x[2]) / 3.0;
    const Eigen::Vector3d xr = project(centroid + (centroid - x[3]));
    const double fr = value(xr);
    if (fr < fx[0]) {
      const Eigen::Vector3d xe = project(centroid + 2.0 * (centroid - x[3]));
      const double fe = value(xe);
      if (fe < fr) {
        x[3] = xe;
        fx[3] = fe;
      } else {
        x[3] = xr;
        fx[3] = fr;
      }
    } else if (fr < fx[2]) {
      x[3] = xr;
      fx[3] = fr;
    } else {
      const bool outside = fr < fx[3];
      const Eigen::Vector3d xc = outside ? Eigen::Vector3d(centroid + 0.5 * (xr - centroid))
                                         : Eigen::Vector3d(centroid + 0.5 * (x[3] - centroid));
      const double fc = value(xc);
      if (fc < std::min(fr, fx[3])) {
        x[3] = xc;
        fx[3] = fc;
      } else {
        for (int i = 1; i < 4; ++i) {
          x[i] = x[0] + 0.5 * (x[i] - x[0]);
          fx[i] = value(x[i]);
        }
      }
    }
  }
  const auto best = static_cast<std::size_t>(std::min_element(fx.begin(), fx.end()) - fx.begin());

  CenterResult out;
  out.center = x[best];
  out.converged = converged;
  samples.insert(samples.end(), extra_samples.begin(), extra_samples.end());
  out.num_samples = samples.size();
  out.d_hat = refined_min_chord(caster, out.center, samples, &out.inner_argmin);
  return out;
}

namespace {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

struct Location {
  std::size_t t;
  Eigen::Vector3d lambda;  // barycentric weights of the triangle corners
};

class EquivariantSearch {
 public:
  EquivariantSearch(const InducedTriangulation& ind, const NeighborComplex& cx, const ResolvedComplex& rc,
                    const Eigen::Vector3d& center)
      : ind_(ind), cx_(cx), rc_(rc), p_(center) {}

  Eigen::Vector3d residual_vector(const Location& x) const {
    const auto pc = pair_corners(ind_, cx_, x.t);
    const Eigen::Vector3d a = x.lambda[0] * pc.a[0] + x.lambda[1] * pc.a[1] + x.lambda[2] * pc.a[2];
    const Eigen::Vector3d b = x.lambda[0] * pc.b[0] + x.lambda[1] * pc.b[1] + x.lambda[2] * pc.b[2];
    return (a - p_).normalized() + (b - p_).normalized();
  }
  double residual(const Location& x) const { return residual_vector(x).norm(); }

  // Moves from x by delta (barycentric, summing to zero). A move that leaves
  // the triangle stops on the crossed edge.
  Location move(const Location& x, const Eigen::Vector3d& delta) const {
    Eigen::Vector3d target = x.lambda + delta;
    if (target.minCoeff() >= 0.0) return {x.t, target};
    double s = 1.0;
    for (int k = 0; k < 3; ++k)
      if (delta[k] < 0.0) s = std::min(s, x.lambda[k] / -delta[k]);
    target = x.lambda + s * delta;
    for (int k = 0; k < 3; ++k) target[k] = std::max(0.0, target[k]);
    target /= target.sum();
    return {x.t, target};
  }

  // The same point expressed in the triangle across the edge it lies on, if any.
  std::optional<Location> other_side(const Location& x) const {
    int zero = -1;
    for (int k = 0; k < 3; ++k) {
      if (x.lambda[k] == 0.0) {
        if (zero >= 0) return std::nullopt;  // at a vertex
        zero = k;
      }
    }
    if (zero < 0) return std::nullopt;
    const auto& tv = rc_.triangles[x.t];
    const std::size_t p = tv[(zero + 1) % 3], q = tv[(zero + 2) % 3];
    const auto s = rc_.across(x.t, p, q);
    if (!s) return std::nullopt;
    Location y{*s, Eigen::Vector3d::Zero()};
    const auto& sv = rc_.triangles[*s];
    for (int k = 0; k < 3; ++k) {
      if (sv[k] == p) y.lambda[k] = x.lambda[(zero + 1) % 3];
      if (sv[k] == q) y.lambda[k] = x.lambda[(zero + 2) % 3];
    }
    return y;
  }

  // Pattern search with halving steps over the star of the incumbent.
  void pattern_search(Location& x, double& r, double step, std::size_t depth, double tol) const {
    static const std::array<Eigen::Vector3d, 6> dirs = {
        Eigen::Vector3d(1, -1, 0), Eigen::Vector3d(-1, 1, 0), Eigen::Vector3d(1, 0, -1),
        Eigen::Vector3d(-1, 0, 1), Eigen::Vector3d(0, 1, -1), Eigen::Vector3d(0, -1, 1)};
    for (std::size_t level = 0; level < depth && r > tol; ++level) {
      for (int rounds = 0; rounds < 64; ++rounds) {
        bool improved = false;
        std::vector<Location> bases{x};
        if (auto y = other_side(x)) bases.push_back(*y);
        for (const auto& base : bases) {
          for (const auto& d : dirs) {
            const Location cand = move(base, step * d);
            const double rc = residual(cand);
            if (rc < r) {
              r = rc;
              x = cand;
              improved = true;
              break;
            }
          }
          if (improved) break;
        }
        if (!improved || r <= tol) break;
      }
      step *= 0.5;
    }
  }

  // Damped Gauss-Newton on the 3-vector residual in two barycentric unknowns.
  void polish(Location& x, double& r) const {
    double mu = 1e-6;
    for (int iter = 0; iter < 80 && r > 1e-14; ++iter) {
      const Eigen::Vector3d f = residual_vector(x);
      Eigen::Matrix<double, 3, 2> J;
      const double h = 1e-7;
      for (int j = 0; j < 2; ++j) {
        Eigen::Vector3d d = Eigen::Vector3d::Zero();
        d[j + 1] = h;
        d[0] = -h;
        Location xp{x.t, x.lambda + d}, xm{x.t, x.lambda - d};
        J.col(j) = (residual_vector(xp) - residual_vector(xm)) / (2 * h);
      }
      const Eigen::Matrix2d A = J.transpose() * J + mu * Eigen::Matrix2d::Identity();
      const Eigen::Vector2d step = A.ldlt().solve(-J.transpose() * f);
      Eigen::Vector3d delta(-step[0] - step[1], step[0], step[1]);
      Location cand = move(x, delta);
      if (cand.lambda == x.lambda) {
        // Blocked by an edge: continue in the neighbouring triangle.
        if (auto y = other_side(x)) {
          const double ry = residual(*y);
          if (ry <= r) {
            x = *y;
            cand = x;
          }
        }
      }
      const double rc = residual(cand);
      if (rc < r) {
        x = cand;
        r = rc;
        mu = std::max(mu / 4, 1e-12);
      } else {
        mu *= 8;
        if (mu > 1e6) break;
      }
    }
  }

 private:
  const InducedTriangulation& ind_;
  const NeighborComplex& cx_;
  const ResolvedComplex& rc_;
  Eigen::Vector3d p_;
};

}  // namespace

HopfWitness find_equivariant_pair(const InducedTriangulation& ind, const NeighborComplex& cx,
                                  const ResolvedComplex& rc, std::size_t component,
                                  const Eigen::Vector3d& center, const SearchOptions& options) {
  const EquivariantSearch search(ind, cx, rc, center);
  const std::size_t n = std::max<std::size_t>(options.grid, 1);

  // Coarse grid: the best grid point of every triangle.
  std::vector<std::pair<double, Location>> best_per_triangle;
  for (std::size_t t = 0; t < rc.triangles.size(); ++t) {
    if (rc.triangle_component[t] != component) continue;
    const auto pc = pair_corners(ind, cx, t);
    double best = std::numeric_limits<double>::infinity();
    Eigen::Vector3d best_lambda;
    for (std::size_t i = 0; i <= n; ++i) {
      for (std::size_t j = 0; i + j <= n; ++j) {
        const Eigen::Vector3d lambda(static_cast<double>(n - i - j) / n, static_cast<double>(i) / n,
                                     static_cast<double>(j) / n);
        const Eigen::Vector3d a = lambda[0] * pc.a[0] + lambda[1] * pc.a[1] + lambda[2] * pc.a[2];
        const Eigen::Vector3d b = lambda[0] * pc.b[0] + lambda[1] * pc.b[1] + lambda[2] * pc.b[2];
        const double r = ((a - center).normalized() + (b - center).normalized()).norm();
        if (r < best) {
          best = r;
          best_lambda = lambda;
        }
      }
    }
    best_per_triangle.push_back({best, Location{t, best_lambda}});
  }
  if (best_per_triangle.empty()) throw GeometryError("component has no triangles");
  const std::size_t keep = std::min(options.candidates, best_per_triangle.size());
  std::partial_sort(best_per_triangle.begin(), best_per_triangle.begin() + static_cast<long>(keep),
                    best_per_triangle.end(), [](const auto& x, const auto& y) {
                      return x.first < y.first || (x.first == y.first && x.second.t < y.second.t);
                    });

  double best_r = std::numeric_limits<double>::infinity();
  Location best_x = best_per_triangle.front().second;
  for (std::size_t c = 0; c < keep; ++c) {
    Location x = best_per_triangle[c].second;
    double r = best_per_triangle[c].first;
    search.pattern_search(x, r, 0.5 / static_cast<double>(n), options.max_depth, options.tolerance);
    search.polish(x, r);
    if (r < best_r) {
      best_r = r;
      best_x = x;
    }
    if (best_r <= 1e-12) break;
  }
  if (!(best_r <= options.tolerance))
    throw SearchError("equivariant search failed (best residual " + std::to_string(best_r) + ")", best_r);

  HopfWitness w;
  w.component = component;
  w.triangle = best_x.t;
  w.barycentric = {best_x.lambda[0], best_x.lambda[1], best_x.lambda[2]};
  const auto pc = pair_corners(ind, cx, best_x.t);
  w.a = best_x.lambda[0] * pc.a[0] + best_x.lambda[1] * pc.a[1] + best_x.lambda[2] * pc.a[2];
  w.b = best_x.lambda[0] * pc.b[0] + best_x.lambda[1] * pc.b[1] + best_x.lambda[2] * pc.b[2];
  w.residual = best_r;
  return w;
}

void path_to_diagonal(const InducedTriangulation& ind, const NeighborComplex& cx, const ResolvedComplex& rc,
                      HopfWitness& witness) {
  const auto& tv = rc.triangles[witness.triangle];
  const auto& lam = witness.barycentric;
  const int corner = static_cast<int>(std::max_element(lam.begin(), lam.end()) - lam.begin());
  const std::size_t start = tv[corner];
  auto is_diagonal = [&](std::size_t v) { return cx.vertices[rc.to_complex[v]].diagonal(); };
  auto point_of = [&](std::size_t v) {
    const auto& pv = cx.vertices[rc.to_complex[v]];
    return PathPoint{v, ind.position(pv.a), ind.position(pv.b), pv.a == pv.b};
  };

  // Breadth-first search in the component's 1-skeleton.
  std::vector<std::vector<std::size_t>> adjacent(rc.num_vertices());
  for (const auto& e : rc.edges) {
    if (rc.vertex_component[e[0]] != witness.component) continue;
    adjacent[e[0]].push_back(e[1]);
    adjacent[e[1]].push_back(e[0]);
  }
  std::vector<std::size_t> parent(rc.num_vertices(), npos);
  parent[start] = start;
  std::deque<std::size_t> queue{start};
  std::size_t goal = npos;
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    if (is_diagonal(v)) {
      goal = v;
      break;
    }
    for (auto w : adjacent[v]) {
      if (parent[w] != npos) continue;
      parent[w] = v;
      queue.push_back(w);
    }
  }
  if (goal == npos) throw GeometryError("component has no diagonal vertex");

  std::vector<std::size_t> chain;
  for (std::size_t v = goal;; v = parent[v]) {
    chain.push_back(v);
    if (v == start) break;
  }
  std::reverse(chain.begin(), chain.end());

  witness.path.clear();
  if (lam[corner] < 1.0) witness.path.push_back(PathPoint{std::nullopt, witness.a, witness.b, false});
  for (auto v : chain) witness.path.push_back(point_of(v));
}

}  // namespace dhopf
