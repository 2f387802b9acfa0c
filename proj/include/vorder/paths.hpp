#pragma once

#include <span>
#include <vector>

#include "vorder/graph.hpp"

namespace vorder {

// Unweighted shortest-path edge counts from `source` to each of `targets`
// (aligned with the input order). BFS stops once every target is settled;
// connectivity guarantees reachability.
std::vector<int> shortest_hops(const UCSGraph& g, int source, std::span<const int> targets);

// Hop count between two vertices.
int shortest_hops(const UCSGraph& g, int source, int target);

// {v : weighted shortest-path distance(center, v) <= r}, by length-weighted
// Dijkstra with early cutoff. Always contains center; sorted ascending.
std::vector<int> graph_ball(const UCSGraph& g, int center, double r);

}  // namespace vorder
