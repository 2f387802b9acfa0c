#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vorder/graph.hpp"

namespace fixtures {

// n vertices in a line along the equator, spacing_m apart. Edge lengths
// default to the geodesic spacing; pass edge_length_m to override (e.g. unit
// lengths for spectral hand-checks, which only see the weights).
vorder::UCSGraph path_graph(int n, double spacing_m = 100.0,
                            std::optional<double> edge_length_m = std::nullopt);

// Path whose gaps grow by step_m per edge. The strictly increasing spacing
// removes nearest-neighbor distance ties, so the m-vertex rank window and the
// m nearest spatial neighbors are the same set at every interior vertex and
// ratio measures on it are exact.
vorder::UCSGraph graded_path_graph(int n, double base_spacing_m = 100.0, double step_m = 0.01);

// rows x cols four-neighbor grid, ids "r<i>c<j>", row-major insertion order.
vorder::UCSGraph grid_graph(int rows, int cols, double spacing_m = 100.0);

// Connected random graph: n points uniform in a ~2 km box, wired by a random
// spanning tree plus extra_edges distinct extra edges. Geodesic lengths.
vorder::UCSGraph random_connected_graph(int n, int extra_edges, std::uint64_t seed);

// Street-like fixture: a grid with jittered intersections, thinned to a
// randomized spanning tree plus keep_fraction of the remaining grid edges.
vorder::UCSGraph street_graph(int rows, int cols, double spacing_m, std::uint64_t seed,
                              double keep_fraction = 0.6);

// Hand-built scenario for the forward topological measure: the probed vertex
// has degree 3 (window cardinality 4), sits at 1-based rank 37 of 40, and its
// window members at ranks {35,36,38,39} lie 3, 1, 2 and 29 hops away.
struct ForwardWindowFixture {
  vorder::UCSGraph graph;
  vorder::Ordering ordering;
  int center = 0;
  std::vector<int> expected_hops;  // sorted ascending: {1,2,3,29}
  double expected_value = 29.0;
};
ForwardWindowFixture forward_window_fixture();

// Hand-built scenario for the inverse topological measure: the probed vertex
// holds 1-based rank 106 of 111 and its three graph neighbors hold ranks
// {110, 105, 95}, so the measure is 11/3.
struct InverseNeighborFixture {
  vorder::UCSGraph graph;
  vorder::Ordering ordering;
  int center = 0;
  double expected_value = 11.0 / 3.0;
};
InverseNeighborFixture inverse_neighbor_fixture();

// Identity ordering: rank = storage index.
vorder::Ordering identity_ordering(const vorder::UCSGraph& g);

// Unique temporary directory, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace fixtures
