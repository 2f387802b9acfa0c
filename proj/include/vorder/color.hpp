#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace vorder {

struct Rgb {
  int r = 0;
  int g = 0;
  int b = 0;
};

std::string to_hex(const Rgb& c);  // "#rrggbb", lowercase

struct ColorStop {
  double pos = 0.0;  // in [0,1]
  Rgb color;
};

// Piecewise-linear RGB ramp over anchor stops with strictly increasing
// positions spanning [0,1].
class ColorScale {
 public:
  ColorScale(std::string name, std::vector<ColorStop> stops);

  // dark blue -> sky blue -> sea green -> gold -> red; used for rank maps
  static ColorScale order();
  // beige -> red; used for metric-error maps
  static ColorScale error();
  static ColorScale from_name(std::string_view name);

  Rgb sample(double t) const;  // t clamped into [0,1]
  const std::string& name() const { return name_; }
  const std::vector<ColorStop>& stops() const { return stops_; }

 private:
  std::string name_;
  std::vector<ColorStop> stops_;
};

}  // namespace vorder
