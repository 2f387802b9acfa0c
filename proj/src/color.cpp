#include "vorder/color.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vorder {

std::string to_hex(const Rgb& c) {
  const auto nib = [](int v) -> char {
    return static_cast<char>(v < 10 ? '0' + v : 'a' + (v - 10));
  };
  std::string out = "#";
  for (int channel : {c.r, c.g, c.b}) {
    out.push_back(nib((channel >> 4) & 0xF));
    out.push_back(nib(channel & 0xF));
  }
  return out;
}

ColorScale::ColorScale(std::string name, std::vector<ColorStop> stops)
    : name_(std::move(name)), stops_(std::move(stops)) {
  if (stops_.size() < 2) throw std::invalid_argument("color scale needs at least two stops");
  if (stops_.front().pos != 0.0 || stops_.back().pos != 1.0)
    throw std::invalid_argument("color scale must span positions 0 to 1");
  for (std::size_t i = 1; i < stops_.size(); ++i)
    if (!(stops_[i - 1].pos < stops_[i].pos))
      throw std::invalid_argument("color scale positions must be strictly increasing");
}

ColorScale ColorScale::order() {
  return ColorScale("order", {{0.00, {0x00, 0x00, 0x8B}},
                              {0.25, {0x87, 0xCE, 0xEB}},
                              {0.50, {0x2E, 0x8B, 0x57}},
                              {0.75, {0xFF, 0xD7, 0x00}},
                              {1.00, {0xFF, 0x00, 0x00}}});
}

ColorScale ColorScale::error() {
  return ColorScale("error", {{0.0, {0xF5, 0xF5, 0xDC}}, {1.0, {0xFF, 0x00, 0x00}}});
}

ColorScale ColorScale::from_name(std::string_view name) {
  if (name == "order") return order();
  if (name == "error") return error();
  throw std::invalid_argument("unknown color scale '" + std::string(name) + "'");
}

Rgb ColorScale::sample(double t) const {
  t = std::clamp(t, 0.0, 1.0);
  std::size_t hi = 1;
  while (hi + 1 < stops_.size() && stops_[hi].pos < t) ++hi;
  const ColorStop& a = stops_[hi - 1];
  const ColorStop& b = stops_[hi];
  const double f = (t - a.pos) / (b.pos - a.pos);
  const auto mix = [f](int x, int y) {
    return static_cast<int>(std::lround(x + f * (y - x)));
  };
  return {mix(a.color.r, b.color.r), mix(a.color.g, b.color.g), mix(a.color.b, b.color.b)};
}

}  // namespace vorder
