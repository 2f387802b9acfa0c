#include "vorder/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <utility>

#include "vorder/error.hpp"
#include "vorder/format.hpp"

namespace vorder {

std::optional<int> UCSGraph::index_of(const std::string& id) const {
  auto it = id_to_index_.find(id);
  if (it == id_to_index_.end()) return std::nullopt;
  return it->second;
}

bool Ordering::is_bijection() const {
  std::vector<char> seen(rank_of.size(), 0);
  for (int r : rank_of) {
    if (r < 0 || r >= n() || seen[r]) return false;
    seen[r] = 1;
  }
  return true;
}

std::vector<int> Ordering::vertices_by_rank() const {
  std::vector<int> at_rank(rank_of.size());
  for (int v = 0; v < n(); ++v) at_rank[rank_of[v]] = v;
  return at_rank;
}

void GraphBuilder::add_node(std::string id, double lat_deg, double lon_deg) {
  if (!std::isfinite(lat_deg) || !std::isfinite(lon_deg)) {
    throw ParseError("non-finite coordinate for node '" + id + "'");
  }
  if (id_to_index_.count(id)) {
    throw ParseError("duplicate node id '" + id + "'");
  }
  id_to_index_.emplace(id, static_cast<int>(ids_.size()));
  ids_.push_back(std::move(id));
  positions_.push_back({lat_deg, lon_deg});
}

void GraphBuilder::add_edge(const std::string& u, const std::string& v,
                            std::optional<double> length_m) {
  auto iu = id_to_index_.find(u);
  auto iv = id_to_index_.find(v);
  if (iu == id_to_index_.end()) throw ParseError("edge references unknown node '" + u + "'");
  if (iv == id_to_index_.end()) throw ParseError("edge references unknown node '" + v + "'");
  add_edge_by_index(iu->second, iv->second, length_m);
}

void GraphBuilder::add_edge_by_index(int u, int v, std::optional<double> length_m) {
  if (u < 0 || v < 0 || u >= static_cast<int>(ids_.size()) || v >= static_cast<int>(ids_.size())) {
    throw ParseError("edge endpoint index out of range");
  }
  if (length_m && (!std::isfinite(*length_m) || *length_m <= 0.0)) {
    throw ParseError("edge (" + ids_[u] + "," + ids_[v] + ") has non-positive or non-finite length " +
                     format_double(*length_m));
  }
  edges_.push_back({u, v, length_m});
}

UCSGraph GraphBuilder::build() const {
  const int raw_n = static_cast<int>(ids_.size());
  if (raw_n == 0) throw ParseError("empty graph: no nodes");

  // Collapse duplicates (keep shortest) and drop self-loops.
  std::map<std::pair<int, int>, double> shortest;
  for (const RawEdge& e : edges_) {
    if (e.u == e.v) continue;
    const auto key = std::minmax(e.u, e.v);
    const double len = e.length_m ? *e.length_m : haversine_m(positions_[e.u], positions_[e.v]);
    if (!std::isfinite(len) || len <= 0.0) {
      throw ParseError("edge (" + ids_[e.u] + "," + ids_[e.v] + ") has non-positive derived length");
    }
    auto [it, inserted] = shortest.emplace(std::pair<int, int>(key.first, key.second), len);
    if (!inserted && len < it->second) it->second = len;
  }

  // Largest connected component (isolated vertices are singleton components).
  std::vector<std::vector<std::pair<int, double>>> adj(raw_n);
  for (const auto& [key, len] : shortest) {
    adj[key.first].emplace_back(key.second, len);
    adj[key.second].emplace_back(key.first, len);
  }
  std::vector<int> component(raw_n, -1);
  int best_component = -1;
  int best_size = 0;
  int next_component = 0;
  for (int start = 0; start < raw_n; ++start) {
    if (component[start] != -1) continue;
    const int c = next_component++;
    int size = 0;
    std::queue<int> frontier;
    frontier.push(start);
    component[start] = c;
    while (!frontier.empty()) {
      const int u = frontier.front();
      frontier.pop();
      ++size;
      for (const auto& [w, len] : adj[u]) {
        if (component[w] == -1) {
          component[w] = c;
          frontier.push(w);
        }
      }
    }
    if (size > best_size) {
      best_size = size;
      best_component = c;
    }
  }

  // Remap surviving vertices, preserving original relative order.
  std::vector<int> new_index(raw_n, -1);
  UCSGraph g;
  for (int v = 0; v < raw_n; ++v) {
    if (component[v] != best_component) continue;
    new_index[v] = static_cast<int>(g.vertex_ids_.size());
    g.vertex_ids_.push_back(ids_[v]);
    g.raw_coords_.push_back(positions_[v]);
  }
  const int n = static_cast<int>(g.vertex_ids_.size());
  if (n == 0) throw ParseError("empty graph after cleaning");

  g.adjacency_.assign(n, {});
  for (const auto& [key, len] : shortest) {
    const int u = new_index[key.first];
    const int v = new_index[key.second];
    if (u < 0 || v < 0) continue;
    g.adjacency_[u].push_back({v, len});
    g.adjacency_[v].push_back({u, len});
    ++g.edge_count_;
  }
  for (auto& nbrs : g.adjacency_) {
    std::sort(nbrs.begin(), nbrs.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.index < b.index; });
  }

  // Project about the centroid of the surviving vertices.
  double lat0 = 0.0, lon0 = 0.0;
  for (const LatLon& p : g.raw_coords_) {
    lat0 += p.lat;
    lon0 += p.lon;
  }
  g.projection_ = EquirectProjection({lat0 / n, lon0 / n});
  g.coords_.reserve(n);
  for (const LatLon& p : g.raw_coords_) g.coords_.push_back(g.projection_.to_meters(p));

  for (int v = 0; v < n; ++v) g.id_to_index_.emplace(g.vertex_ids_[v], v);
  return g;
}

}  // namespace vorder
