#include "dhopf/errors.hpp"
#include "dhopf/io.hpp"
#include "dhopf/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

namespace dhopf {

using nlohmann::json;

namespace {

// Color classes: image triangles covered by the same set of mesh triangles.
struct ColorClasses {
  std::vector<std::size_t> of_triangle;  // npos outside the image
  std::vector<std::vector<std::size_t>> members;
};

constexpr std::size_t npos = static_cast<std::size_t>(-1);

ColorClasses color_classes(const ImageTriangulation& tri) {
  ColorClasses cc;
  cc.of_triangle.assign(tri.triangles.size(), npos);
  std::map<std::vector<std::size_t>, std::size_t> index;
  for (std::size_t t = 0; t < tri.triangles.size(); ++t) {
    if (tri.inside.empty() || !tri.inside[t]) continue;
    auto key = tri.coverers[t];
    std::sort(key.begin(), key.end());
    auto [it, inserted] = index.try_emplace(key, cc.members.size());
    if (inserted) cc.members.push_back(key);
    cc.of_triangle[t] = it->second;
  }
  return cc;
}

std::array<double, 3> palette(std::size_t k) {
  // Golden-angle hue steps, fixed saturation and lightness.
  const double h = std::fmod(static_cast<double>(k) * 137.50776405, 360.0) / 60.0;
  const double s = 0.55, l = 0.6;
  const double c = (1 - std::abs(2 * l - 1)) * s;
  const double x = c * (1 - std::abs(std::fmod(h, 2.0) - 1));
  const double m = l - c / 2;
  std::array<double, 3> rgb{};
  switch (static_cast<int>(h)) {
    case 0: rgb = {c, x, 0}; break;
    case 1: rgb = {x, c, 0}; break;
    case 2: rgb = {0, c, x}; break;
    case 3: rgb = {0, x, c}; break;
    case 4: rgb = {x, 0, c}; break;
    default: rgb = {c, 0, x}; break;
  }
  for (auto& v : rgb) v += m;
  return rgb;
}

std::string hex(const std::array<double, 3>& rgb) {
  std::ostringstream out;
  out << '#' << std::hex << std::setfill('0');
  for (double v : rgb) out << std::setw(2) << static_cast<int>(std::lround(std::clamp(v, 0.0, 1.0) * 255));
  return out.str();
}

// Maps image coordinates into an SVG canvas with y pointing up.
struct Canvas {
  double x0 = 0, y0 = 0, scale = 1, height = 0;
  static constexpr double kSize = 800, kMargin = 20;

  explicit Canvas(const std::vector<Point2>& pts) {
    double x1 = -1e300, y1 = -1e300;
    x0 = y0 = 1e300;
    for (const auto& p : pts) {
      x0 = std::min(x0, p.ax);
      y0 = std::min(y0, p.ay);
      x1 = std::max(x1, p.ax);
      y1 = std::max(y1, p.ay);
    }
    const double span = std::max({x1 - x0, y1 - y0, 1e-12});
    scale = (kSize - 2 * kMargin) / span;
    height = (y1 - y0) * scale + 2 * kMargin;
  }
  std::string xy(double x, double y) const {
    std::ostringstream out;
    out << std::fixed << std::setprecision(3) << (x - x0) * scale + kMargin << ',' << height - ((y - y0) * scale + kMargin);
    return out.str();
  }
  std::string header() const {
    std::ostringstream out;
    out << std::fixed << std::setprecision(3) << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << kSize
        << ' ' << height << "\" width=\"" << kSize << "\" height=\"" << height << "\">\n";
    return out.str();
  }
};

std::string triangulation_svg(const RunReport& r, const ColorClasses& cc, const std::vector<std::string>& overlay = {}) {
  const auto& tri = r.tri;
  Canvas canvas(tri.points);
  std::ostringstream svg;
  svg << canvas.header();
  svg << "<g stroke=\"#555555\" stroke-width=\"0.4\">\n";
  for (std::size_t t = 0; t < tri.triangles.size(); ++t) {
    const auto& v = tri.triangles[t];
    const bool in = cc.of_triangle[t] != npos;
    svg << "<polygon points=\"" << canvas.xy(tri.points[v[0]].ax, tri.points[v[0]].ay) << ' '
        << canvas.xy(tri.points[v[1]].ax, tri.points[v[1]].ay) << ' ' << canvas.xy(tri.points[v[2]].ax, tri.points[v[2]].ay)
        << "\" fill=\"" << (in ? hex(palette(cc.of_triangle[t])) : std::string("#ffffff")) << "\" data-triangle=\"" << t
        << "\" data-m=\"" << tri.multiplicity(t) << "\"";
    if (in) svg << " data-class=\"" << cc.of_triangle[t] << "\"";
    svg << "/>\n";
  }
  svg << "</g>\n<g stroke=\"#000000\" stroke-width=\"1.2\">\n";
  for (const auto& e : tri.constraint_edges) {
    const auto a = canvas.xy(tri.points[e[0]].ax, tri.points[e[0]].ay);
    const auto b = canvas.xy(tri.points[e[1]].ax, tri.points[e[1]].ay);
    svg << "<line x1=\"" << a.substr(0, a.find(',')) << "\" y1=\"" << a.substr(a.find(',') + 1) << "\" x2=\""
        << b.substr(0, b.find(',')) << "\" y2=\"" << b.substr(b.find(',') + 1) << "\"/>\n";
  }
  svg << "</g>\n";
  for (const auto& line : overlay) svg << line;
  svg << "</svg>\n";
  return svg.str();
}

std::string mtl(const ColorClasses& cc) {
  std::ostringstream out;
  out << std::setprecision(6);
  for (std::size_t k = 0; k < cc.members.size(); ++k) {
    const auto rgb = palette(k);
    out << "newmtl class_" << k << "\nKd " << rgb[0] << ' ' << rgb[1] << ' ' << rgb[2] << "\n";
  }
  return out.str();
}

std::string surface_obj(const RunReport& r, const ColorClasses& cc) {
  std::ostringstream out;
  out << std::setprecision(17) << "mtllib surface.mtl\n";
  for (std::size_t v = 0; v < r.ind.vertices.size(); ++v) {
    const auto p = r.ind.position(v);
    out << "v " << p.x() << ' ' << p.y() << ' ' << p.z() << "\n";
  }
  // Grouped by color class so each usemtl applies to a contiguous block.
  std::vector<std::size_t> order(r.ind.triangles.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto cls = [&](std::size_t t) { return cc.of_triangle[r.ind.triangles[t].image_triangle]; };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return cls(x) < cls(y); });
  std::size_t current = npos;
  for (auto t : order) {
    if (cls(t) != current) {
      current = cls(t);
      out << "usemtl class_" << current << "\n";
    }
    const auto f = r.ind.triangles[t].outward();
    out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << "\n";
  }
  return out.str();
}

std::string complex_obj(const RunReport& r, bool first) {
  std::ostringstream out;
  out << std::setprecision(17);
  for (std::size_t v = 0; v < r.rc.num_vertices(); ++v) {
    const auto& pv = r.cx.vertices[r.rc.to_complex[v]];
    const auto p = r.ind.position(first ? pv.a : pv.b);
    out << "v " << p.x() << ' ' << p.y() << ' ' << p.z() << "\n";
  }
  for (std::size_t c = 0; c < r.rc.components.size(); ++c) {
    out << "g component_" << c << "\n";
    for (std::size_t t = 0; t < r.rc.triangles.size(); ++t) {
      if (r.rc.triangle_component[t] != c) continue;
      const auto& f = r.rc.triangles[t];
      out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << "\n";
    }
  }
  return out.str();
}

json complex_adjacency(const RunReport& r) {
  json vertices = json::array();
  for (std::size_t v = 0; v < r.rc.num_vertices(); ++v) {
    const auto& pv = r.cx.vertices[r.rc.to_complex[v]];
    vertices.push_back({{"id", v},
                        {"complex_vertex", r.rc.to_complex[v]},
                        {"a", pv.a},
                        {"b", pv.b},
                        {"diagonal", pv.diagonal()},
                        {"component", r.rc.vertex_component[v]},
                        {"swap", r.rc.swap_vertex[v]}});
  }
  json triangles = json::array();
  for (std::size_t t = 0; t < r.rc.triangles.size(); ++t) {
    const auto& T = r.cx.triangles[t];
    json neighbors = json::array();
    for (int k = 0; k < 3; ++k) {
      const auto s = r.rc.across(t, r.rc.triangles[t][k], r.rc.triangles[t][(k + 1) % 3]);
      neighbors.push_back(s ? json(*s) : json(nullptr));
    }
    triangles.push_back({{"id", t},
                         {"vertices", r.rc.triangles[t]},
                         {"pair", {T.first, T.second}},
                         {"image_triangle", T.image_triangle},
                         {"component", r.rc.triangle_component[t]},
                         {"swap", r.rc.swap_triangle[t]},
                         {"neighbors", neighbors}});
  }
  return {{"vertices", vertices}, {"triangles", triangles}};
}

// Shared image of a loop point: both factors map to the same point of the plane.
std::array<double, 2> loop_image(const RunReport& r, const LoopPoint& p) {
  const auto& v = r.tri.triangles[r.cx.triangles[p.triangle].image_triangle];
  double x = 0, y = 0;
  for (int k = 0; k < 3; ++k) {
    x += p.barycentric[k] * r.tri.points[v[k]].ax;
    y += p.barycentric[k] * r.tri.points[v[k]].ay;
  }
  return {x, y};
}

json level_set_json(const RunReport& r, const LevelSetRun& run) {
  const auto& ls = run.result;
  json loops = json::array();
  for (const auto& loop : ls.loops) {
    json pts = json::array();
    for (const auto& p : loop) {
      const auto img = loop_image(r, p);
      pts.push_back({{"triangle", p.triangle},
                     {"barycentric", p.barycentric},
                     {"a", {p.a.x(), p.a.y(), p.a.z()}},
                     {"b", {p.b.x(), p.b.y(), p.b.z()}},
                     {"image", img}});
    }
    loops.push_back(pts);
  }
  return {{"delta_spec", run.spec.str()},
          {"delta", ls.delta},
          {"below_components", ls.below_components},
          {"above_components", ls.above_components},
          {"separated", ls.separated},
          {"total_length", ls.total_length},
          {"loops", loops}};
}

std::vector<std::string> level_set_overlay(const RunReport& r, const LevelSetRun& run) {
  Canvas canvas(r.tri.points);
  std::vector<std::string> lines;
  for (std::size_t i = 0; i < run.result.loops.size(); ++i) {
    std::ostringstream out;
    out << "<polygon fill=\"none\" stroke=\"" << hex(palette(1000 + i)) << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& p : run.result.loops[i]) {
      const auto img = loop_image(r, p);
      out << canvas.xy(img[0], img[1]) << ' ';
    }
    out << "\" data-loop=\"" << i << "\"/>\n";
    lines.push_back(out.str());
  }
  return lines;
}

}  // namespace

std::vector<std::filesystem::path> export_artifacts(const RunReport& report, const RunConfig& config) {
  std::vector<std::filesystem::path> written;
  if (!config.out_dir || !(config.svg || config.obj || config.report)) return written;
  const auto& dir = *config.out_dir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  auto put = [&](const std::string& name, const std::string& contents) {
    const auto path = dir / name;
    write_text_file(path, contents);
    written.push_back(path);
  };

  if (config.report) put("report.json", report_json(report).dump(2) + "\n");
  const bool triangulated = report.reached("cdt");
  const ColorClasses cc = triangulated ? color_classes(report.tri) : ColorClasses{};
  if (config.svg && triangulated) put("image_triangulation.svg", triangulation_svg(report, cc));
  if (config.obj && report.reached("induced")) {
    put("surface.mtl", mtl(cc));
    put("surface.obj", surface_obj(report, cc));
  }
  if (config.obj && report.reached("complex")) {
    put("complex_first.obj", complex_obj(report, true));
    put("complex_second.obj", complex_obj(report, false));
    put("complex.json", complex_adjacency(report).dump(1) + "\n");
  }
  for (std::size_t i = 0; i < report.level_sets.size(); ++i) {
    const auto& run = report.level_sets[i];
    if (config.report) put("levelset_" + std::to_string(i) + ".json", level_set_json(report, run).dump(1) + "\n");
    if (config.svg) put("levelset_" + std::to_string(i) + ".svg", triangulation_svg(report, cc, level_set_overlay(report, run)));
  }
  return written;
}

}  // namespace dhopf
