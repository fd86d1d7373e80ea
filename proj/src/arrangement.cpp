#include "dhopf/arrangement.hpp"

#include "dhopf/errors.hpp"
#include "dhopf/io.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>

namespace dhopf {

std::vector<Point2> ImagePSLG::positions() const {
  std::vector<Point2> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.position);
  return out;
}

PlanarMap parse_planar_map(const std::string& text) {
  PlanarMap map;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    const auto doc = parse_json_exact(text);
    if (!doc.is_object() || !doc.contains("images")) throw ParseError("map JSON needs \"images\"");
    for (const auto& q : doc.at("images")) {
      if (!q.is_array() || q.size() != 2) throw ParseError("image point must have 2 coordinates");
      map.images.emplace_back(rational_from_json(q[0]), rational_from_json(q[1]));
    }
    return map;
  }

  std::map<std::size_t, Point2> by_index;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string k, u, v, extra;
    if (!(fields >> k)) continue;
    if (!(fields >> u >> v) || (fields >> extra))
      throw ParseError("map line " + std::to_string(line_no) + ": expected 'k u v'");
    std::size_t index = 0;
    try {
      std::size_t pos = 0;
      index = std::stoul(k, &pos);
      if (pos != k.size()) throw std::invalid_argument(k);
      if (!by_index.emplace(index, Point2(parse_rational(u), parse_rational(v))).second)
        throw ParseError("map line " + std::to_string(line_no) + ": duplicate index");
    } catch (const std::invalid_argument& e) {
      throw ParseError("map line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  std::size_t expected = 0;
  for (auto& [index, point] : by_index) {
    if (index != expected) throw ParseError("map is missing vertex " + std::to_string(expected));
    map.images.push_back(std::move(point));
    ++expected;
  }
  return map;
}

PlanarMap load_planar_map(const std::filesystem::path& path) {
  return parse_planar_map(read_text_file(path));
}

ValidationReport check_general_position(const SurfaceMesh& mesh, const PlanarMap& map) {
  ValidationReport report;
  if (map.images.size() != mesh.num_vertices()) {
    report.add("image-count", "map",
               "map has " + std::to_string(map.images.size()) + " images for " +
                   std::to_string(mesh.num_vertices()) + " vertices");
    return report;
  }
  const auto& q = map.images;
  const std::size_t n = q.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (q[i] == q[j]) {
        report.add("coincident-images", "pair (" + std::to_string(i) + "," + std::to_string(j) + ")",
                   "vertices " + std::to_string(i) + " and " + std::to_string(j) +
                       " have the same image");
        continue;
      }
      for (std::size_t k = j + 1; k < n; ++k) {
        if (orient2d(q[i], q[j], q[k]) == 0) {
          const std::string triple =
              "(" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + ")";
          report.add("collinear-images", "triple " + triple,
                     "images of vertices " + triple + " are collinear");
        }
      }
    }
  }
  return report;
}

namespace {

[[noreturn]] void arrangement_violation(std::size_t e1, std::size_t e2) {
  throw GeometryError("general position violated in arrangement: images of edges " +
                      std::to_string(e1) + " and " + std::to_string(e2) + " overlap or touch");
}

}  // namespace

ImagePSLG build_pslg(const SurfaceMesh& mesh, const PlanarMap& map) {
  if (map.images.size() != mesh.num_vertices())
    throw GeometryError("map does not cover every mesh vertex");
  const auto& img = map.images;
  const auto& edges = mesh.edges();

  ImagePSLG pslg;
  std::unordered_map<Point2, std::size_t, Point2Hash> index_of;
  for (std::size_t v = 0; v < img.size(); ++v) {
    if (!index_of.emplace(img[v], v).second)
      throw GeometryError("general position violated in arrangement: coincident vertex images");
    pslg.points.push_back({img[v], v, {}});
  }
  pslg.edge_points.assign(edges.size(), {});

  struct Box {
    double xmin, xmax, ymin, ymax;
  };
  std::vector<Box> boxes;
  boxes.reserve(edges.size());
  for (const auto& e : edges) {
    const auto& a = img[e.v0];
    const auto& b = img[e.v1];
    const double pad = 1e-9 * (std::abs(a.ax) + std::abs(a.ay) + std::abs(b.ax) + std::abs(b.ay) + 1.0);
    boxes.push_back({std::min(a.ax, b.ax) - pad, std::max(a.ax, b.ax) + pad,
                     std::min(a.ay, b.ay) - pad, std::max(a.ay, b.ay) + pad});
  }

  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& ei = edges[i];
    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      const auto& ej = edges[j];
      std::optional<std::size_t> shared;
      if (ei.v0 == ej.v0 || ei.v0 == ej.v1) shared = ei.v0;
      if (ei.v1 == ej.v0 || ei.v1 == ej.v1) shared = ei.v1;
      if (shared) {
        const std::size_t u = (ei.v0 == *shared) ? ei.v1 : ei.v0;
        const std::size_t w = (ej.v0 == *shared) ? ej.v1 : ej.v0;
        if (orient2d(img[*shared], img[u], img[w]) == 0) arrangement_violation(i, j);
        continue;
      }
      if (boxes[i].xmax < boxes[j].xmin || boxes[j].xmax < boxes[i].xmin ||
          boxes[i].ymax < boxes[j].ymin || boxes[j].ymax < boxes[i].ymin)
        continue;

      const Point2& a = img[ei.v0];
      const Point2& b = img[ei.v1];
      const Point2& c = img[ej.v0];
      const Point2& d = img[ej.v1];
      const int o1 = orient2d(a, b, c);
      const int o2 = orient2d(a, b, d);
      const int o3 = orient2d(c, d, a);
      const int o4 = orient2d(c, d, b);
      if (o1 == 0 && o2 == 0) {
        // Collinear: a violation only if the segments actually meet.
        const bool apart = std::max(a, b) < std::min(c, d) || std::max(c, d) < std::min(a, b);
        if (!apart) arrangement_violation(i, j);
        continue;
      }
      if ((o1 == 0 && o3 * o4 <= 0) || (o2 == 0 && o3 * o4 <= 0) ||
          (o3 == 0 && o1 * o2 <= 0) || (o4 == 0 && o1 * o2 <= 0))
        arrangement_violation(i, j);
      if (o1 * o2 >= 0 || o3 * o4 >= 0) continue;

      const Rational sa = orient2d_value(c, d, a);
      const Rational sb = orient2d_value(c, d, b);
      const Rational t = sa / (sa - sb);
      Point2 x(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y));
      auto [it, inserted] = index_of.try_emplace(x, pslg.points.size());
      if (inserted) pslg.points.push_back({std::move(x), std::nullopt, {}});
      pslg.points[it->second].crossings.emplace_back(i, j);
      pslg.edge_points[i].push_back(it->second);
      pslg.edge_points[j].push_back(it->second);
    }
  }

  for (std::size_t e = 0; e < edges.size(); ++e) {
    const Point2& a = img[edges[e].v0];
    const Point2& b = img[edges[e].v1];
    const bool use_x = a.x != b.x;
    const bool ascending = use_x ? (a.x < b.x) : (a.y < b.y);
    auto& pts = pslg.edge_points[e];
    std::sort(pts.begin(), pts.end(), [&](std::size_t p, std::size_t q) {
      const auto& pp = pslg.points[p].position;
      const auto& qq = pslg.points[q].position;
      const int c = use_x ? cmp(pp.x, qq.x) : cmp(pp.y, qq.y);
      return ascending ? c < 0 : c > 0;
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    pts.insert(pts.begin(), edges[e].v0);
    pts.push_back(edges[e].v1);
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) pslg.constraints.push_back({pts[k], pts[k + 1], e});
  }
  return pslg;
}

}  // namespace dhopf
