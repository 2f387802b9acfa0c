#include "vorder/export.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "vorder/error.hpp"
#include "vorder/format.hpp"
#include "vorder/io.hpp"

namespace vorder {

namespace {

// fixed two decimals: enough for pixel coordinates, stable across platforms
std::string px(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
  return std::string(buf, res.ptr);
}

struct ValueRange {
  double lo;
  double hi;
};

ValueRange value_range(std::span<const double> values) {
  double lo = values.front();
  double hi = values.front();
  for (double v : values) {
    if (!std::isfinite(v)) throw ExportError("map values must be finite");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

std::string render_map_svg(const UCSGraph& g, std::span<const double> values,
                           const ColorScale& scale, const MapOptions& opt) {
  const BoundingBox box = bounding_box(g.coords());
  const double span_x = std::max(box.max.x - box.min.x, 1e-9);
  const double span_y = std::max(box.max.y - box.min.y, 1e-9);
  const double inner = opt.width_px - 2.0 * opt.margin_px;
  const double pixels_per_m = inner / span_x;
  const double height = span_y * pixels_per_m + 2.0 * opt.margin_px;

  const auto to_px_x = [&](double x) { return opt.margin_px + (x - box.min.x) * pixels_per_m; };
  const auto to_px_y = [&](double y) {
    return height - (opt.margin_px + (y - box.min.y) * pixels_per_m);
  };

  const ValueRange range = value_range(values);
  const double spread = range.hi - range.lo;

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         px(opt.width_px) + "\" height=\"" + px(height) + "\" viewBox=\"0 0 " +
         px(opt.width_px) + " " + px(height) + "\">\n";

  if (opt.draw_edges) {
    svg += "<g class=\"edges\" stroke=\"#999999\" stroke-width=\"0.5\">\n";
    for (int v = 0; v < g.n(); ++v) {
      const Point2& a = g.coords()[static_cast<std::size_t>(v)];
      for (const Neighbor& nb : g.neighbors(v)) {
        if (nb.index <= v) continue;
        const Point2& b = g.coords()[static_cast<std::size_t>(nb.index)];
        svg += "<line x1=\"" + px(to_px_x(a.x)) + "\" y1=\"" + px(to_px_y(a.y)) + "\" x2=\"" +
               px(to_px_x(b.x)) + "\" y2=\"" + px(to_px_y(b.y)) + "\"/>\n";
      }
    }
    svg += "</g>\n";
  }

  svg += "<g class=\"nodes\">\n";
  for (int v = 0; v < g.n(); ++v) {
    const Point2& p = g.coords()[static_cast<std::size_t>(v)];
    const double t = spread > 0.0 ? (values[static_cast<std::size_t>(v)] - range.lo) / spread
                                  : 0.0;
    svg += "<circle cx=\"" + px(to_px_x(p.x)) + "\" cy=\"" + px(to_px_y(p.y)) + "\" r=\"" +
           px(opt.point_radius_px) + "\" fill=\"" + to_hex(scale.sample(t)) + "\"/>\n";
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

std::string render_map_geojson(const UCSGraph& g, std::span<const double> values,
                               const Ordering& ordering) {
  nlohmann::json features = nlohmann::json::array();
  for (int v = 0; v < g.n(); ++v) {
    const LatLon& ll = g.raw_coords()[static_cast<std::size_t>(v)];
    nlohmann::json feature;
    feature["type"] = "Feature";
    feature["geometry"]["type"] = "Point";
    feature["geometry"]["coordinates"] = {ll.lon, ll.lat};
    feature["properties"]["id"] = g.vertex_ids()[static_cast<std::size_t>(v)];
    feature["properties"]["value"] = values[static_cast<std::size_t>(v)];
    feature["properties"]["rank"] = ordering.rank_of[static_cast<std::size_t>(v)] + 1;
    features.push_back(std::move(feature));
  }
  nlohmann::json root;
  root["type"] = "FeatureCollection";
  root["features"] = std::move(features);
  return root.dump() + "\n";
}

}  // namespace

void export_map(const UCSGraph& g, std::span<const double> values, const Ordering& ordering,
                const ColorScale& scale, const std::filesystem::path& out, MapFormat format,
                const MapOptions& options) {
  if (static_cast<int>(values.size()) != g.n())
    throw ExportError("map values length does not match the graph");
  if (ordering.n() != g.n() || !ordering.is_bijection())
    throw ExportError("map ordering is not a bijection over the graph's vertices");
  if (g.n() == 0) throw ExportError("cannot map an empty graph");

  const std::string content = format == MapFormat::kSvg
                                  ? render_map_svg(g, values, scale, options)
                                  : render_map_geojson(g, values, ordering);
  write_text_file(out, content);
}

void export_boxplot_svg(std::span<const BoxplotGroup> groups, const std::filesystem::path& out,
                        const BoxplotOptions& opt) {
  if (groups.empty()) throw ExportError("boxplot needs at least one group");

  double lo = groups.front().stats.min;
  double hi = groups.front().stats.max;
  for (const auto& grp : groups) {
    lo = std::min(lo, grp.stats.min);
    hi = std::max(hi, grp.stats.max);
  }
  if (!(hi > lo)) {  // constant data still needs a drawable span
    lo -= 0.5;
    hi += 0.5;
  }

  const double width = opt.margin_px * 2.0 + opt.group_width_px * static_cast<double>(groups.size());
  const double height = opt.plot_height_px + 2.0 * opt.margin_px;
  const auto y_of = [&](double v) {
    return opt.margin_px + (hi - v) / (hi - lo) * opt.plot_height_px;
  };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + px(width) +
         "\" height=\"" + px(height) + "\" viewBox=\"0 0 " + px(width) + " " + px(height) +
         "\">\n";
  svg += "<line class=\"axis\" x1=\"" + px(opt.margin_px) + "\" y1=\"" + px(y_of(hi)) +
         "\" x2=\"" + px(opt.margin_px) + "\" y2=\"" + px(y_of(lo)) +
         "\" stroke=\"#000000\"/>\n";
  svg += "<text class=\"axis-max\" x=\"2\" y=\"" + px(y_of(hi)) + "\" font-size=\"10\">" +
         format_double(hi) + "</text>\n";
  svg += "<text class=\"axis-min\" x=\"2\" y=\"" + px(y_of(lo)) + "\" font-size=\"10\">" +
         format_double(lo) + "</text>\n";

  for (std::size_t i = 0; i < groups.size(); ++i) {
    const BoxplotStats& s = groups[i].stats;
    const double cx = opt.margin_px + opt.group_width_px * (static_cast<double>(i) + 0.5);
    const double half = opt.group_width_px * 0.25;
    svg += "<g class=\"group\" data-label=\"" + groups[i].label + "\">\n";
    // whisker stems and caps
    svg += "<line class=\"whisker\" x1=\"" + px(cx) + "\" y1=\"" + px(y_of(s.q3)) + "\" x2=\"" +
           px(cx) + "\" y2=\"" + px(y_of(s.upper_whisker)) + "\" stroke=\"#000000\"/>\n";
    svg += "<line class=\"whisker\" x1=\"" + px(cx) + "\" y1=\"" + px(y_of(s.q1)) + "\" x2=\"" +
           px(cx) + "\" y2=\"" + px(y_of(s.lower_whisker)) + "\" stroke=\"#000000\"/>\n";
    svg += "<line class=\"cap\" x1=\"" + px(cx - half * 0.5) + "\" y1=\"" +
           px(y_of(s.upper_whisker)) + "\" x2=\"" + px(cx + half * 0.5) + "\" y2=\"" +
           px(y_of(s.upper_whisker)) + "\" stroke=\"#000000\"/>\n";
    svg += "<line class=\"cap\" x1=\"" + px(cx - half * 0.5) + "\" y1=\"" +
           px(y_of(s.lower_whisker)) + "\" x2=\"" + px(cx + half * 0.5) + "\" y2=\"" +
           px(y_of(s.lower_whisker)) + "\" stroke=\"#000000\"/>\n";
    svg += "<rect class=\"box\" x=\"" + px(cx - half) + "\" y=\"" + px(y_of(s.q3)) +
           "\" width=\"" + px(half * 2.0) + "\" height=\"" + px(y_of(s.q1) - y_of(s.q3)) +
           "\" fill=\"#d0d0e8\" stroke=\"#000000\"/>\n";
    svg += "<line class=\"median\" x1=\"" + px(cx - half) + "\" y1=\"" + px(y_of(s.median)) +
           "\" x2=\"" + px(cx + half) + "\" y2=\"" + px(y_of(s.median)) +
           "\" stroke=\"#000000\" stroke-width=\"1.5\"/>\n";
    if (opt.with_outliers) {
      for (double v : s.outliers)
        svg += "<circle class=\"outlier\" cx=\"" + px(cx) + "\" cy=\"" + px(y_of(v)) +
               "\" r=\"2\" fill=\"none\" stroke=\"#000000\"/>\n";
    }
    svg += "<text class=\"label\" x=\"" + px(cx) + "\" y=\"" + px(height - 8.0) +
           "\" font-size=\"10\" text-anchor=\"middle\">" + groups[i].label + "</text>\n";
    svg += "</g>\n";
  }
  svg += "</svg>\n";
  write_text_file(out, svg);
}

}  // namespace vorder
