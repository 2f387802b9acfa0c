#pragma once

#include <map>
#include <string>
#include <vector>

#include "vorder/graph.hpp"

namespace vorder {

enum class BallMode { kGraph, kEuclidean };
enum class WindowAnchor { kShiftToFit, kTruncate };

struct WindowSpec {
  int m = 2;
  WindowAnchor anchoring = WindowAnchor::kShiftToFit;
};

// Degree-adaptive window cardinality: the degree itself when even, degree+1
// when odd, so the window can always split evenly around the center.
int adaptive_window_size(const UCSGraph& g, int v);

// Vertices whose ranks fall in the rank interval of cardinality spec.m around
// rank(v): [k - floor(m/2), k + ceil(m/2) - 1]. Shift-to-fit slides the
// interval inside [0, n-1] keeping the cardinality; truncate clips it. The
// center vertex is part of the result. Vertices are listed in rank order.
std::vector<int> ordering_window(const Ordering& ordering, int v, const WindowSpec& spec);

struct MetricSeries {
  std::string metric;  // geo_fwd | geo_inv | topo_fwd | topo_inv
  std::vector<double> values;
  std::map<std::string, std::string> params;
  std::string ordering_method;
  std::map<std::string, std::string> ordering_params;
};

// Bounding-box diagonal of the m-rank window around each vertex, divided by
// the diagonal of the vertex's m spatial nearest neighbors (floored at 1 m).
// Window anchoring is shift-to-fit so both boxes cover m vertices.
MetricSeries geometric_forward(const UCSGraph& g, const Ordering& ordering, int m, int jobs = 1);

// Rank range (max - min) of the vertices inside the radius-r ball around
// each vertex, divided by the ball cardinality; singleton balls score 0.
MetricSeries geometric_inverse(const UCSGraph& g, const Ordering& ordering, double r,
                               BallMode mode = BallMode::kGraph, int jobs = 1);

// Maximum hop distance from each vertex to the members of its degree-adaptive
// rank window (half the window on each side, truncated at the ends, center
// excluded).
MetricSeries topological_forward(const UCSGraph& g, const Ordering& ordering, int jobs = 1);

// Maximum absolute rank difference to a graph neighbor, divided by degree.
MetricSeries topological_inverse(const UCSGraph& g, const Ordering& ordering, int jobs = 1);

struct MetricParams {
  int window_m = 2;
  double radius_m = 500.0;
  BallMode ball = BallMode::kGraph;
  int jobs = 1;
};

// All four series in canonical order: geo_fwd, geo_inv, topo_fwd, topo_inv.
std::vector<MetricSeries> evaluate_metrics(const UCSGraph& g, const Ordering& ordering,
                                           const MetricParams& params);

}  // namespace vorder
