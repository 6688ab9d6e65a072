#include "anttamp/render.hpp"

#include <cstdarg>
#include <cstdio>
#include <fstream>

namespace anttamp {

namespace {

constexpr double kScale = 160.0;  // px per world unit
constexpr double kMargin = 12.0;

// Class palette, indexed by class id; the robot gets its own color.
constexpr const char* kClassFill[] = {"#4c78c8", "#c84c4c", "#4ca05c",
                                      "#b08e3c", "#8e5cb0", "#5cb0a0"};
constexpr const char* kRobotFill = "#3a3a3a";

struct Out {
  std::string s;

  void raw(const char* text) { s += text; }
  void f(const char* fmt, ...) __attribute__((format(printf, 2, 3))) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    vsnprintf(buf, sizeof(buf), fmt, args);
    va_end(args);
    s += buf;
  }
};

}  // namespace

std::string render_svg(const Domain& domain, const WorldState& state) {
  const auto& sc = domain.scenario();
  const auto& ws = sc.workspace;
  const double w = ws.width() * kScale + 2 * kMargin;
  const double h = ws.height() * kScale + 2 * kMargin;
  // SVG y grows downward; world y grows upward.
  auto px = [&](double x) { return kMargin + (x - ws.xmin) * kScale; };
  auto py = [&](double y) { return kMargin + (ws.ymax - y) * kScale; };

  Out out;
  out.f("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
        "viewBox=\"0 0 %.0f %.0f\">\n",
        w, h, w, h);
  out.f("<rect x=\"0\" y=\"0\" width=\"%.0f\" height=\"%.0f\" fill=\"#fbfaf8\"/>\n", w, h);
  out.f("<rect x=\"%.4f\" y=\"%.4f\" width=\"%.4f\" height=\"%.4f\" "
        "fill=\"#ffffff\" stroke=\"#888888\" stroke-width=\"1\"/>\n",
        px(ws.xmin), py(ws.ymax), ws.width() * kScale, ws.height() * kScale);

  for (const auto& r : sc.regions) {
    if (r.kind == RegionKind::Station) {
      const Pose2 c = r.rect.center();
      out.f("<g stroke=\"#b0a080\" stroke-width=\"1.5\">"
            "<line x1=\"%.4f\" y1=\"%.4f\" x2=\"%.4f\" y2=\"%.4f\"/>"
            "<line x1=\"%.4f\" y1=\"%.4f\" x2=\"%.4f\" y2=\"%.4f\"/></g>\n",
            px(c.x) - 6, py(c.y), px(c.x) + 6, py(c.y), px(c.x), py(c.y) - 6,
            px(c.x), py(c.y) + 6);
      continue;
    }
    if (r.rect.area() == ws.area()) continue;  // whole-workspace floor
    out.f("<rect x=\"%.4f\" y=\"%.4f\" width=\"%.4f\" height=\"%.4f\" "
          "fill=\"#f0ead9\" stroke=\"#c2b490\" stroke-width=\"1\"/>\n",
          px(r.rect.xmin), py(r.rect.ymax), r.rect.width() * kScale,
          r.rect.height() * kScale);
    if (r.front) {
      // Open edge drawn heavier.
      double x1 = r.rect.xmin, y1 = r.rect.ymin, x2 = r.rect.xmax, y2 = r.rect.ymax;
      switch (*r.front) {
        case FrontEdge::South: y2 = y1; break;
        case FrontEdge::North: y1 = y2; break;
        case FrontEdge::West: x2 = x1; break;
        case FrontEdge::East: x1 = x2; break;
      }
      out.f("<line x1=\"%.4f\" y1=\"%.4f\" x2=\"%.4f\" y2=\"%.4f\" "
            "stroke=\"#8a6d3b\" stroke-width=\"3\"/>\n",
            px(x1), py(y1), px(x2), py(y2));
    }
  }

  for (std::size_t i = 0; i < sc.entity_count(); ++i) {
    const EntityId e{static_cast<std::uint32_t>(i)};
    if (state.symbolic.gripper.held == e) continue;
    const auto& spec = sc.entities[i];
    const char* fill =
        i == 0 ? kRobotFill
               : kClassFill[spec.class_id % (sizeof(kClassFill) / sizeof(char*))];
    out.f("<circle cx=\"%.4f\" cy=\"%.4f\" r=\"%.4f\" fill=\"%s\" "
          "fill-opacity=\"0.85\" stroke=\"#222222\" stroke-width=\"0.8\"/>\n",
          px(state.poses[i].x), py(state.poses[i].y), spec.radius * kScale, fill);
    out.f("<text x=\"%.4f\" y=\"%.4f\" font-size=\"9\" text-anchor=\"middle\" "
          "fill=\"#222222\">%s</text>\n",
          px(state.poses[i].x), py(state.poses[i].y) - spec.radius * kScale - 2,
          spec.name.c_str());
  }

  out.raw("</svg>\n");
  return out.s;
}

void save_svg(const Domain& domain, const WorldState& state, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ScenarioError("cannot write svg file: " + path);
  f << render_svg(domain, state);
}

}  // namespace anttamp
