#pragma once

#include <span>
#include <vector>

namespace vorder {

struct BoxplotStats {
  std::size_t count = 0;
  double mean = 0.0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double lower_whisker = 0.0;  // furthest data point within 1.5 IQR below q1
  double upper_whisker = 0.0;  // furthest data point within 1.5 IQR above q3
  std::vector<double> outliers;  // ascending; everything beyond the whiskers
};

// Linear interpolation between closest order statistics (the common "type 7"
// convention): quantile(p) = x[floor(h)] + frac(h) * (x[floor(h)+1] - x[floor(h)])
// with h = (n-1) * p over the ascending-sorted sample.
double quantile(std::span<const double> sorted_values, double p);

BoxplotStats summarize(std::span<const double> values);

// log10 with the documented 1e-9 floor; rejects negative inputs.
std::vector<double> log_scale(std::span<const double> values);

}  // namespace vorder
