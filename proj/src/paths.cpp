#include "vorder/paths.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

namespace vorder {

std::vector<int> shortest_hops(const UCSGraph& g, int source, std::span<const int> targets) {
  if (source < 0 || source >= g.n()) throw std::invalid_argument("vertex out of range");
  std::vector<int> hops(g.n(), -1);
  hops[source] = 0;

  int remaining = 0;
  for (int t : targets) {
    if (t < 0 || t >= g.n()) throw std::invalid_argument("vertex out of range");
  }
  std::vector<char> wanted(g.n(), 0);
  for (int t : targets) {
    if (!wanted[t]) {
      wanted[t] = 1;
      ++remaining;
    }
  }
  if (wanted[source]) --remaining;

  std::queue<int> frontier;
  frontier.push(source);
  while (!frontier.empty() && remaining > 0) {
    const int u = frontier.front();
    frontier.pop();
    for (const Neighbor& nb : g.neighbors(u)) {
      if (hops[nb.index] != -1) continue;
      hops[nb.index] = hops[u] + 1;
      if (wanted[nb.index]) --remaining;
      frontier.push(nb.index);
    }
  }

  std::vector<int> out;
  out.reserve(targets.size());
  for (int t : targets) out.push_back(hops[t]);
  return out;
}

int shortest_hops(const UCSGraph& g, int source, int target) {
  const int t[1] = {target};
  return shortest_hops(g, source, std::span<const int>(t, 1))[0];
}

std::vector<int> graph_ball(const UCSGraph& g, int center, double r) {
  if (center < 0 || center >= g.n()) throw std::invalid_argument("vertex out of range");
  if (r < 0.0) throw std::invalid_argument("negative radius");

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(g.n(), kInf);
  dist[center] = 0.0;

  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  heap.emplace(0.0, center);
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    for (const Neighbor& nb : g.neighbors(u)) {
      const double nd = d + nb.length_m;
      if (nd <= r && nd < dist[nb.index]) {
        dist[nb.index] = nd;
        heap.emplace(nd, nb.index);
      }
    }
  }

  std::vector<int> out;
  for (int v = 0; v < g.n(); ++v) {
    if (dist[v] <= r) out.push_back(v);
  }
  return out;
}

}  // namespace vorder
