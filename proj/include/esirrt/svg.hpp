#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "esirrt/geometry.hpp"
#include "esirrt/gridmap.hpp"
#include "esirrt/planner.hpp"
#include "esirrt/skeleton.hpp"

namespace esirrt {

/// Layers of a rendering; null / empty members are left out.
struct SvgScene {
  const OccupancyGrid* grid = nullptr;
  const SkeletonGrid* skeleton = nullptr;
  const CornerSet* corners = nullptr;
  const PlanTree* tree = nullptr;
  Path initial_path;   // cyan
  Path spline_path;    // magenta
  Path refined_path;   // green
  Path final_path;     // red
  std::optional<InformedRegion> region;  // green outline
  std::optional<Point> start;
  std::optional<Point> goal;
};

/// Standalone SVG, one map cell per user unit.
std::string render_svg(const SvgScene& scene);

void export_svg(const SvgScene& scene, const std::filesystem::path& out);

}  // namespace esirrt
