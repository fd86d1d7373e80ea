#include "dhopf/mesh.hpp"

#include "dhopf/errors.hpp"
#include "dhopf/io.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_set>

namespace dhopf {

SurfaceMesh::SurfaceMesh(std::vector<Point3> vertices, std::vector<TriangleIndices> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  for (std::size_t f = 0; f < triangles_.size(); ++f) {
    for (std::size_t v : triangles_[f]) {
      if (v >= vertices_.size())
        throw GeometryError("face " + std::to_string(f) + " references vertex " +
                            std::to_string(v) + " out of range");
    }
  }

  // Directed-edge uniqueness decides consistency before any flipping.
  std::unordered_set<std::uint64_t> directed;
  consistent_ = true;
  for (const auto& t : triangles_) {
    for (int i = 0; i < 3; ++i) {
      const std::size_t a = t[i], b = t[(i + 1) % 3];
      if (a == b || !directed.insert(directed_key(a, b)).second) consistent_ = false;
    }
  }

  if (consistent_ && !triangles_.empty()) {
    Rational volume6 = 0;
    for (const auto& t : triangles_) {
      const auto& a = vertices_[t[0]];
      const auto& b = vertices_[t[1]];
      const auto& c = vertices_[t[2]];
      volume6 += a.x * (b.y * c.z - b.z * c.y) - a.y * (b.x * c.z - b.z * c.x) +
                 a.z * (b.x * c.y - b.y * c.x);
    }
    if (volume6 < 0) {
      for (auto& t : triangles_) std::swap(t[1], t[2]);
      flipped_ = true;
    }
  }

  for (std::size_t f = 0; f < triangles_.size(); ++f) {
    const auto& t = triangles_[f];
    for (int i = 0; i < 3; ++i) {
      const std::size_t a = t[i], b = t[(i + 1) % 3];
      if (a == b) continue;
      const auto key = undirected_key(a, b);
      auto [it, inserted] = edge_index_.try_emplace(key, edges_.size());
      if (inserted) edges_.push_back({std::min(a, b), std::max(a, b), {}});
      edges_[it->second].faces.push_back(f);
    }
  }
}

std::optional<std::size_t> SurfaceMesh::find_edge(std::size_t a, std::size_t b) const {
  const auto it = edge_index_.find(undirected_key(a, b));
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

Eigen::Vector3d SurfaceMesh::centroid() const {
  Eigen::Vector3d c = Eigen::Vector3d::Zero();
  for (std::size_t v = 0; v < vertices_.size(); ++v) c += position(v);
  return vertices_.empty() ? c : Eigen::Vector3d(c / static_cast<double>(vertices_.size()));
}

namespace {

std::string face_name(std::size_t f) { return "face " + std::to_string(f); }
std::string edge_name(std::size_t a, std::size_t b) {
  return "edge (" + std::to_string(a) + "," + std::to_string(b) + ")";
}

}  // namespace

ValidationReport validate_surface(const SurfaceMesh& mesh, const SurfaceChecks& checks) {
  ValidationReport report;
  const auto& verts = mesh.vertices();
  const auto& tris = mesh.triangles();

  if (tris.empty()) {
    report.add("empty", "mesh", "mesh has no triangles");
    return report;
  }

  std::vector<char> used(verts.size(), 0);
  for (std::size_t f = 0; f < tris.size(); ++f) {
    const auto& t = tris[f];
    for (auto v : t) used[v] = 1;
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      report.add("degenerate-face", face_name(f), "face repeats a vertex");
      continue;
    }
    const auto n = cross(verts[t[0]], verts[t[1]], verts[t[2]]);
    if (n[0] == 0 && n[1] == 0 && n[2] == 0)
      report.add("degenerate-face", face_name(f), "face has zero area");
  }
  for (std::size_t v = 0; v < verts.size(); ++v) {
    if (!used[v])
      report.add("isolated-vertex", "vertex " + std::to_string(v), "vertex is not used by any face");
  }

  bool closed = true;
  for (const auto& e : mesh.edges()) {
    if (e.faces.size() == 1) {
      report.add("boundary-edge", edge_name(e.v0, e.v1), "boundary edge: used by a single face");
      closed = false;
    } else if (e.faces.size() > 2) {
      report.add("non-manifold-edge", edge_name(e.v0, e.v1),
                 "edge used by " + std::to_string(e.faces.size()) + " faces");
      closed = false;
    }
  }
  if (!mesh.consistently_oriented())
    report.add("inconsistent-winding", "mesh", "a directed edge is used twice");

  // Each vertex star must be a single fan.
  if (closed) {
    std::vector<std::vector<std::size_t>> star(verts.size());
    for (std::size_t f = 0; f < tris.size(); ++f)
      for (auto v : tris[f]) star[v].push_back(f);
    for (std::size_t v = 0; v < verts.size(); ++v) {
      if (star[v].empty()) continue;
      // Walk around v through shared edges.
      std::unordered_set<std::size_t> seen{star[v].front()};
      std::vector<std::size_t> stack{star[v].front()};
      while (!stack.empty()) {
        const std::size_t f = stack.back();
        stack.pop_back();
        for (auto w : tris[f]) {
          if (w == v) continue;
          const auto e = mesh.find_edge(v, w);
          if (!e) continue;
          for (auto g : mesh.edges()[*e].faces)
            if (seen.insert(g).second) stack.push_back(g);
        }
      }
      if (seen.size() != star[v].size())
        report.add("non-manifold-vertex", "vertex " + std::to_string(v),
                   "vertex star is not a single fan");
    }
  }

  if (checks.euler && closed) {
    const long long chi = static_cast<long long>(verts.size()) -
                          static_cast<long long>(mesh.num_edges()) +
                          static_cast<long long>(tris.size());
    if (chi != 2)
      report.add("not-a-sphere", "mesh", "Euler characteristic " + std::to_string(chi) + " != 2");
  }

  if (checks.convexity && mesh.consistently_oriented()) {
    for (std::size_t f = 0; f < tris.size(); ++f) {
      const auto& t = tris[f];
      if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) continue;
      for (std::size_t v = 0; v < verts.size(); ++v) {
        if (v == t[0] || v == t[1] || v == t[2]) continue;
        if (orient3d(verts[t[0]], verts[t[1]], verts[t[2]], verts[v]) > 0) {
          report.add("non-convex", face_name(f),
                     "non-convex at face " + std::to_string(f) + ": vertex " + std::to_string(v) +
                         " lies outside its plane");
          break;
        }
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Loading

namespace {

std::vector<std::string> tokens_without_comments(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    lines.push_back(line);
  }
  return lines;
}

std::size_t parse_index(const std::string& token) {
  std::size_t pos = 0;
  unsigned long long value = 0;
  try {
    value = std::stoull(token, &pos);
  } catch (const std::exception&) {
    throw ParseError("bad index '" + token + "'");
  }
  if (pos != token.size() || token.front() == '-') throw ParseError("bad index '" + token + "'");
  return static_cast<std::size_t>(value);
}

Rational parse_coordinate(const std::string& token) {
  try {
    return parse_rational(token);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

}  // namespace

SurfaceMesh parse_off(const std::string& text) {
  const auto lines = tokens_without_comments(text);
  std::vector<std::string> tokens;
  for (const auto& line : lines) {
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
  }
  std::size_t pos = 0;
  auto next = [&]() -> const std::string& {
    if (pos >= tokens.size()) throw ParseError("unexpected end of OFF file");
    return tokens[pos++];
  };
  std::string header = next();
  if (header.rfind("OFF", 0) != 0) throw ParseError("missing OFF header");
  if (header.size() > 3) {
    // "OFF4 3 1" style glued counts are not supported; "OFF" followed by counts is.
    throw ParseError("unsupported OFF variant '" + header + "'");
  }
  const std::size_t nv = parse_index(next());
  const std::size_t nf = parse_index(next());
  (void)parse_index(next());  // edge count, ignored

  std::vector<Point3> vertices;
  vertices.reserve(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    Rational x = parse_coordinate(next());
    Rational y = parse_coordinate(next());
    Rational z = parse_coordinate(next());
    vertices.emplace_back(std::move(x), std::move(y), std::move(z));
  }
  std::vector<TriangleIndices> triangles;
  triangles.reserve(nf);
  for (std::size_t f = 0; f < nf; ++f) {
    const std::size_t arity = parse_index(next());
    if (arity != 3) throw ParseError("non-triangular face " + std::to_string(f));
    TriangleIndices t{parse_index(next()), parse_index(next()), parse_index(next())};
    triangles.push_back(t);
  }
  if (pos != tokens.size()) throw ParseError("trailing data after OFF faces");
  try {
    return SurfaceMesh(std::move(vertices), std::move(triangles));
  } catch (const GeometryError& e) {
    throw ParseError(e.what());
  }
}

SurfaceMesh parse_mesh_json(const std::string& text) {
  const auto doc = parse_json_exact(text);
  if (!doc.is_object() || !doc.contains("vertices") || !doc.contains("triangles"))
    throw ParseError("mesh JSON needs \"vertices\" and \"triangles\"");
  std::vector<Point3> vertices;
  for (const auto& v : doc.at("vertices")) {
    if (!v.is_array() || v.size() != 3) throw ParseError("vertex must have 3 coordinates");
    vertices.emplace_back(rational_from_json(v[0]), rational_from_json(v[1]),
                          rational_from_json(v[2]));
  }
  std::vector<TriangleIndices> triangles;
  std::size_t f = 0;
  for (const auto& t : doc.at("triangles")) {
    if (!t.is_array() || t.size() != 3) throw ParseError("non-triangular face " + std::to_string(f));
    TriangleIndices idx{};
    for (int i = 0; i < 3; ++i) {
      if (!t[i].is_number_integer() || t[i].get<long long>() < 0)
        throw ParseError("bad index in face " + std::to_string(f));
      idx[i] = t[i].get<std::size_t>();
    }
    triangles.push_back(idx);
    ++f;
  }
  try {
    return SurfaceMesh(std::move(vertices), std::move(triangles));
  } catch (const GeometryError& e) {
    throw ParseError(e.what());
  }
}

SurfaceMesh load_surface_mesh(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parse_mesh_json(text);
  return parse_off(text);
}

// ---------------------------------------------------------------------------
// Ray casting

ConvexRaycaster::ConvexRaycaster(const SurfaceMesh& mesh) : mesh_(&mesh) {
  const auto& verts = mesh.vertices();
  normals_.reserve(mesh.num_triangles());
  offsets_.reserve(mesh.num_triangles());
  for (const auto& t : mesh.triangles()) {
    const auto n = cross(verts[t[0]], verts[t[1]], verts[t[2]]);
    const Rational offset = n[0] * verts[t[0]].x + n[1] * verts[t[0]].y + n[2] * verts[t[0]].z;
    Eigen::Vector3d nd(n[0].get_d(), n[1].get_d(), n[2].get_d());
    const double len = nd.norm();
    normals_.push_back(nd / len);
    offsets_.push_back(offset.get_d() / len);
  }
}

double ConvexRaycaster::exit_parameter(const Eigen::Vector3d& origin,
                                       const Eigen::Vector3d& direction) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t f = 0; f < normals_.size(); ++f) {
    const double denom = normals_[f].dot(direction);
    if (denom <= 0.0) continue;
    const double t = (offsets_[f] - normals_[f].dot(origin)) / denom;
    if (t < best) best = t;
  }
  return best;
}

RayHit ConvexRaycaster::exit_hit(const Eigen::Vector3d& origin,
                                 const Eigen::Vector3d& direction) const {
  const double t_exit = exit_parameter(origin, direction);
  const Eigen::Vector3d point = origin + t_exit * direction;
  const double slack = 1e-12 * (std::abs(t_exit) + 1.0);
  std::optional<std::size_t> first_candidate;
  const auto& verts = mesh_->vertices();
  for (std::size_t f = 0; f < normals_.size(); ++f) {
    const double denom = normals_[f].dot(direction);
    if (denom <= 0.0) continue;
    const double t = (offsets_[f] - normals_[f].dot(origin)) / denom;
    if (t > t_exit + slack) continue;
    if (!first_candidate) first_candidate = f;
    // Containment of the hit point in the (coplanar) triangle.
    const auto& tri = mesh_->triangles()[f];
    const Eigen::Vector3d a(verts[tri[0]].ax, verts[tri[0]].ay, verts[tri[0]].az);
    const Eigen::Vector3d b(verts[tri[1]].ax, verts[tri[1]].ay, verts[tri[1]].az);
    const Eigen::Vector3d c(verts[tri[2]].ax, verts[tri[2]].ay, verts[tri[2]].az);
    const Eigen::Vector3d& n = normals_[f];
    const double scale = (b - a).cross(c - a).dot(n);
    const double w0 = (b - point).cross(c - point).dot(n) / scale;
    const double w1 = (c - point).cross(a - point).dot(n) / scale;
    const double w2 = 1.0 - w0 - w1;
    constexpr double tol = -1e-9;
    if (w0 >= tol && w1 >= tol && w2 >= tol) return {point, f, t_exit};
  }
  return {point, first_candidate.value_or(0), t_exit};
}

double ConvexRaycaster::chord_length(const Eigen::Vector3d& origin,
                                     const Eigen::Vector3d& direction) const {
  double forward = std::numeric_limits<double>::infinity();
  double backward = std::numeric_limits<double>::infinity();
  for (std::size_t f = 0; f < normals_.size(); ++f) {
    const double denom = normals_[f].dot(direction);
    const double gap = offsets_[f] - normals_[f].dot(origin);
    if (denom > 0.0) {
      forward = std::min(forward, gap / denom);
    } else if (denom < 0.0) {
      backward = std::min(backward, -gap / denom);
    }
  }
  return (forward + backward) * direction.norm();
}

Eigen::Vector3d ConvexRaycaster::antipode(const Eigen::Vector3d& center,
                                          const Eigen::Vector3d& x) const {
  const Eigen::Vector3d dir = center - x;
  return center + exit_parameter(center, dir) * dir;
}

bool ConvexRaycaster::interior(const Eigen::Vector3d& point, double margin) const {
  for (std::size_t f = 0; f < normals_.size(); ++f) {
    if (normals_[f].dot(point) - offsets_[f] >= -margin) return false;
  }
  return true;
}

bool strictly_interior(const SurfaceMesh& mesh, const Eigen::Vector3d& origin) {
  const Point3 o(from_double(origin.x()), from_double(origin.y()), from_double(origin.z()));
  const auto& verts = mesh.vertices();
  for (const auto& t : mesh.triangles()) {
    if (orient3d(verts[t[0]], verts[t[1]], verts[t[2]], o) >= 0) return false;
  }
  return !mesh.triangles().empty();
}

std::array<RayHit, 2> surface_raycast(const SurfaceMesh& mesh, const Eigen::Vector3d& origin,
                                      const Eigen::Vector3d& direction) {
  if (direction.norm() == 0.0) throw GeometryError("zero ray direction");
  if (!strictly_interior(mesh, origin)) throw GeometryError("origin not interior");
  const ConvexRaycaster caster(mesh);
  RayHit forward = caster.exit_hit(origin, direction);
  RayHit backward = caster.exit_hit(origin, -direction);
  backward.t = -backward.t;
  return {backward, forward};
}

}  // namespace dhopf
