#include "esirrt/svg.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "esirrt/error.hpp"

namespace esirrt {

namespace {

void polyline(std::ostringstream& os, const Path& path, const char* cls, const char* colour,
              double width) {
  if (path.size() < 2) return;
  os << "<polyline class=\"" << cls << "\" fill=\"none\" stroke=\"" << colour
     << "\" stroke-width=\"" << width << "\" points=\"";
  for (std::size_t i = 0; i < path.size(); ++i) os << (i ? " " : "") << path[i].x << ',' << path[i].y;
  os << "\"/>\n";
}

}  // namespace

std::string render_svg(const SvgScene& scene) {
  const int w = scene.grid ? scene.grid->width() : (scene.skeleton ? scene.skeleton->width : 1);
  const int h = scene.grid ? scene.grid->height() : (scene.skeleton ? scene.skeleton->height : 1);
  std::ostringstream os;
  os.precision(12);
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
     << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n";

  if (scene.grid) {
    // Occupied cells as horizontal runs.
    os << "<g class=\"map\">\n<rect x=\"0\" y=\"0\" width=\"" << w << "\" height=\"" << h
       << "\" fill=\"white\"/>\n";
    for (int j = 0; j < h; ++j) {
      for (int i = 0; i < w;) {
        if (scene.grid->cell_free(i, j)) {
          ++i;
          continue;
        }
        int run = i;
        while (run < w && !scene.grid->cell_free(run, j)) ++run;
        os << "<rect x=\"" << i << "\" y=\"" << j << "\" width=\"" << run - i
           << "\" height=\"1\" fill=\"#303030\"/>\n";
        i = run;
      }
    }
    os << "</g>\n";
  }

  if (scene.skeleton && scene.skeleton->count() > 0) {
    os << "<g class=\"skeleton\" fill=\"#f0a000\">\n";
    for (int j = 0; j < scene.skeleton->height; ++j) {
      for (int i = 0; i < scene.skeleton->width; ++i) {
        if (scene.skeleton->at(i, j))
          os << "<rect x=\"" << i << "\" y=\"" << j << "\" width=\"1\" height=\"1\"/>\n";
      }
    }
    os << "</g>\n";
  }

  if (scene.tree && scene.tree->size() > 1) {
    os << "<g class=\"tree\" stroke=\"blue\" stroke-width=\"0.3\">\n";
    for (NodeId v = 1; v < scene.tree->size(); ++v) {
      const Point a = scene.tree->position(scene.tree->parent(v));
      const Point b = scene.tree->position(v);
      os << "<line class=\"tree-edge\" x1=\"" << a.x << "\" y1=\"" << a.y << "\" x2=\"" << b.x
         << "\" y2=\"" << b.y << "\"/>\n";
    }
    os << "</g>\n";
  }

  polyline(os, scene.initial_path, "initial-path", "cyan", 1.0);
  polyline(os, scene.spline_path, "spline-path", "magenta", 0.8);
  polyline(os, scene.refined_path, "refined-path", "green", 1.0);
  polyline(os, scene.final_path, "final-path", "red", 1.2);

  if (scene.region) {
    const auto& r = *scene.region;
    const Point c = 0.5 * (r.focus_a + r.focus_b);
    os << "<ellipse class=\"informed-region\" fill=\"none\" stroke=\"green\" stroke-width=\"0.8\" cx=\""
       << c.x << "\" cy=\"" << c.y << "\" rx=\"" << r.semi_major() << "\" ry=\"" << r.semi_minor()
       << "\" transform=\"rotate(" << r.rotation() * 180.0 / std::numbers::pi << ' ' << c.x << ' '
       << c.y << ")\"/>\n";
  }

  if (scene.corners) {
    for (Point p : scene.corners->corners)
      os << "<circle class=\"corner\" cx=\"" << p.x << "\" cy=\"" << p.y
         << "\" r=\"1.5\" fill=\"yellow\" stroke=\"black\" stroke-width=\"0.3\"/>\n";
  }
  if (scene.start)
    os << "<circle class=\"start\" cx=\"" << scene.start->x << "\" cy=\"" << scene.start->y
       << "\" r=\"2\" fill=\"lime\"/>\n";
  if (scene.goal)
    os << "<circle class=\"goal\" cx=\"" << scene.goal->x << "\" cy=\"" << scene.goal->y
       << "\" r=\"2\" fill=\"orange\"/>\n";
  os << "</svg>\n";
  return os.str();
}

void export_svg(const SvgScene& scene, const std::filesystem::path& out) {
  std::ofstream f(out, std::ios::binary);
  if (!f) throw IoError("cannot write " + out.string());
  f << render_svg(scene);
  f.flush();
  if (!f) throw IoError("write failed for " + out.string());
}

}  // namespace esirrt
