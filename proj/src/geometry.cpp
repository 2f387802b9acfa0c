#include "vorder/geometry.hpp"

#include <algorithm>

namespace vorder {

double haversine_m(const LatLon& a, const LatLon& b) {
  const double phi1 = deg_to_rad(a.lat);
  const double phi2 = deg_to_rad(b.lat);
  const double dphi = deg_to_rad(b.lat - a.lat);
  const double dlambda = deg_to_rad(b.lon - a.lon);
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlambda / 2.0);
  const double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

BoundingBox bounding_box(std::span<const Point2> points) {
  BoundingBox box;
  for (const Point2& p : points) box.expand(p);
  return box;
}

}  // namespace vorder
