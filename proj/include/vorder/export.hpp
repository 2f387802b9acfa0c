#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "vorder/color.hpp"
#include "vorder/graph.hpp"
#include "vorder/stats.hpp"

namespace vorder {

enum class MapFormat { kSvg, kGeojson };

struct MapOptions {
  double width_px = 1000.0;
  double margin_px = 20.0;
  double point_radius_px = 2.0;
  bool draw_edges = true;
};

// Color-coded vertex map. SVG places one circle per vertex at the projected
// coordinates (y flipped for screen space) filled from `scale` over min-max
// normalized values; a constant series maps everything to position 0.
// GeoJSON emits RFC 7946 Point features ([lon, lat]) with properties
// {id, value, rank} (rank 1-based). Output is byte-stable.
void export_map(const UCSGraph& g, std::span<const double> values, const Ordering& ordering,
                const ColorScale& scale, const std::filesystem::path& out, MapFormat format,
                const MapOptions& options = {});

struct BoxplotGroup {
  std::string label;
  BoxplotStats stats;
};

struct BoxplotOptions {
  bool with_outliers = true;
  double group_width_px = 80.0;
  double plot_height_px = 300.0;
  double margin_px = 40.0;
};

// Grouped box-and-whisker chart, one box per group in the given order.
void export_boxplot_svg(std::span<const BoxplotGroup> groups, const std::filesystem::path& out,
                        const BoxplotOptions& options = {});

}  // namespace vorder
