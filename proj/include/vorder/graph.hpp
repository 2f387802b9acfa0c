#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vorder/geometry.hpp"

namespace vorder {

struct Neighbor {
  int index;        // neighbor vertex index
  double length_m;  // edge length in meters, > 0
};

// Undirected connected spatial graph. Vertices carry planar coordinates in
// meters (local projection) plus the raw lat/lon they were ingested with;
// edges carry lengths in meters. Immutable after construction, so all
// queries are safe to run concurrently.
class UCSGraph {
 public:
  int n() const { return static_cast<int>(vertex_ids_.size()); }
  std::size_t edge_count() const { return edge_count_; }

  const std::vector<std::string>& vertex_ids() const { return vertex_ids_; }
  const std::vector<Point2>& coords() const { return coords_; }
  const std::vector<LatLon>& raw_coords() const { return raw_coords_; }

  const std::vector<Neighbor>& neighbors(int v) const { return adjacency_[v]; }
  int degree(int v) const { return static_cast<int>(adjacency_[v].size()); }

  const EquirectProjection& projection() const { return projection_; }

  // Index of a vertex id, or nullopt when unknown.
  std::optional<int> index_of(const std::string& id) const;

 private:
  friend class GraphBuilder;

  std::vector<std::string> vertex_ids_;
  std::vector<Point2> coords_;
  std::vector<LatLon> raw_coords_;
  std::vector<std::vector<Neighbor>> adjacency_;  // sorted by neighbor index
  std::size_t edge_count_ = 0;
  EquirectProjection projection_;
  std::map<std::string, int> id_to_index_;
};

// A vertex ordering: bijection from vertex indices onto ranks 0..n-1.
// Ranks are 0-based internally; exported files add 1.
struct Ordering {
  std::vector<int> rank_of;                   // vertex index -> rank
  std::string method;                         // fiedler | tsne | umap | original | random
  std::map<std::string, std::string> params;  // hyperparameter name -> value

  int n() const { return static_cast<int>(rank_of.size()); }
  bool is_bijection() const;

  // vertex index at each rank (inverse permutation)
  std::vector<int> vertices_by_rank() const;
};

// Per-vertex real value an ordering is derived from (Fiedler entry or a
// 1-D embedding coordinate).
struct Embedding1D {
  std::vector<double> value;
};

// Accumulates raw nodes/edges, then applies the cleanup rules:
// self-loops dropped, duplicate edges collapsed to the shortest, the largest
// connected component kept (original relative vertex order preserved), and
// coordinates projected to meters about the surviving vertices' centroid.
// Edge length defaults to the haversine distance between the endpoints.
class GraphBuilder {
 public:
  // Nodes keep their insertion order; duplicate or malformed input throws.
  void add_node(std::string id, double lat_deg, double lon_deg);
  void add_edge(const std::string& u, const std::string& v,
                std::optional<double> length_m = std::nullopt);
  void add_edge_by_index(int u, int v, std::optional<double> length_m = std::nullopt);

  std::size_t node_count() const { return ids_.size(); }
  bool has_node(const std::string& id) const { return id_to_index_.contains(id); }

  UCSGraph build() const;

 private:
  struct RawEdge {
    int u, v;
    std::optional<double> length_m;
  };
  std::vector<std::string> ids_;
  std::vector<LatLon> positions_;
  std::vector<RawEdge> edges_;
  std::map<std::string, int> id_to_index_;
};

}  // namespace vorder
