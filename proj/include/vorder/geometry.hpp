#pragma once

#include <cmath>
#include <limits>
#include <span>

namespace vorder {

inline constexpr double kEarthRadiusM = 6371008.8;  // mean Earth radius
inline constexpr double kPi = 3.14159265358979323846;

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct LatLon {
  double lat = 0.0;  // degrees
  double lon = 0.0;  // degrees
};

inline double deg_to_rad(double deg) { return deg * (kPi / 180.0); }

inline double squared_distance(const Point2& a, const Point2& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

inline double distance(const Point2& a, const Point2& b) {
  return std::sqrt(squared_distance(a, b));
}

// Great-circle distance in meters on the mean-radius sphere.
double haversine_m(const LatLon& a, const LatLon& b);

// Local equirectangular projection about a fixed origin:
//   x = R * dlon * cos(lat0),  y = R * dlat   (angles in radians)
// Metric-accurate at city scale; longitudes are unwrapped to the origin.
class EquirectProjection {
 public:
  EquirectProjection() = default;
  explicit EquirectProjection(LatLon origin)
      : origin_(origin), cos_lat0_(std::cos(deg_to_rad(origin.lat))) {}

  Point2 to_meters(const LatLon& p) const {
    double dlon = p.lon - origin_.lon;
    while (dlon > 180.0) dlon -= 360.0;
    while (dlon < -180.0) dlon += 360.0;
    return {kEarthRadiusM * deg_to_rad(dlon) * cos_lat0_,
            kEarthRadiusM * deg_to_rad(p.lat - origin_.lat)};
  }

  LatLon origin() const { return origin_; }

 private:
  LatLon origin_{};
  double cos_lat0_ = 1.0;
};

struct BoundingBox {
  Point2 min{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Point2 max{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};

  bool empty() const { return min.x > max.x; }

  void expand(const Point2& p) {
    if (p.x < min.x) min.x = p.x;
    if (p.y < min.y) min.y = p.y;
    if (p.x > max.x) max.x = p.x;
    if (p.y > max.y) max.y = p.y;
  }

  double diagonal() const {
    if (empty()) return 0.0;
    const double dx = max.x - min.x;
    const double dy = max.y - min.y;
    return std::sqrt(dx * dx + dy * dy);
  }
};

BoundingBox bounding_box(std::span<const Point2> points);

}  // namespace vorder
