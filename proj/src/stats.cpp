#include "vorder/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vorder {

double quantile(std::span<const double> sorted_values, double p) {
  if (sorted_values.empty()) throw std::invalid_argument("quantile of an empty sample");
  if (!(p >= 0.0) || !(p <= 1.0)) throw std::invalid_argument("quantile position outside [0,1]");
  const std::size_t n = sorted_values.size();
  const double h = static_cast<double>(n - 1) * p;
  const std::size_t lo = static_cast<std::size_t>(h);
  const double frac = h - static_cast<double>(lo);
  if (lo + 1 >= n) return sorted_values[n - 1];
  return sorted_values[lo] + frac * (sorted_values[lo + 1] - sorted_values[lo]);
}

BoxplotStats summarize(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("summarize needs a nonempty sample");
  std::vector<double> sorted(values.begin(), values.end());
  for (double v : sorted)
    if (!std::isfinite(v)) throw std::invalid_argument("summarize needs finite values");
  std::sort(sorted.begin(), sorted.end());

  BoxplotStats s;
  s.count = sorted.size();
  double sum = 0.0;
  for (double v : sorted) sum += v;
  s.mean = sum / static_cast<double>(sorted.size());
  s.min = sorted.front();
  s.max = sorted.back();
  s.q1 = quantile(sorted, 0.25);
  s.median = quantile(sorted, 0.5);
  s.q3 = quantile(sorted, 0.75);

  const double iqr = s.q3 - s.q1;
  const double lower_fence = s.q1 - 1.5 * iqr;
  const double upper_fence = s.q3 + 1.5 * iqr;
  s.lower_whisker = s.q1;
  s.upper_whisker = s.q3;
  for (double v : sorted) {
    if (v >= lower_fence) {
      s.lower_whisker = v;  // first (smallest) point inside the fence
      break;
    }
  }
  for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) {
    if (*it <= upper_fence) {
      s.upper_whisker = *it;
      break;
    }
  }
  for (double v : sorted)
    if (v < s.lower_whisker || v > s.upper_whisker) s.outliers.push_back(v);
  return s;
}

std::vector<double> log_scale(std::span<const double> values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) {
    if (v < 0.0) throw std::invalid_argument("log scale needs non-negative values");
    out.push_back(std::log10(std::max(v, 1e-9)));
  }
  return out;
}

}  // namespace vorder
