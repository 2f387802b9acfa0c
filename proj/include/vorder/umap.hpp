#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vorder/geometry.hpp"
#include "vorder/graph.hpp"

namespace vorder {

struct UmapParams {
  int n_neighbors = 15;
  double min_dist = 0.1;
  int epochs = 200;
  double learning_rate = 1.0;
  int negative_sample_rate = 5;
  std::uint64_t seed = 0;
};

// Low-dimensional kernel 1 / (1 + a * d^(2b)).
struct MembershipCurve {
  double a = 1.0;
  double b = 1.0;
};

// Least-squares fit of the kernel to the target curve that is 1 below
// min_dist and exp(-(d - min_dist) / spread) beyond it, sampled at 300
// points on [0, 3 * spread].
MembershipCurve fit_membership_curve(double min_dist, double spread = 1.0);

// Bandwidth calibration: bisects sigma so that
//   sum_j exp(-max(0, d_j - rho) / sigma) = target
// over the neighbor distances (64 steps). The result is clamped below by
// 1e-3 times the mean neighbor distance, mirroring how reference
// implementations guard against unreachable targets from distance ties.
double smooth_knn_sigma(std::span<const double> neighbor_distances, double rho, double target);

struct UmapEdge {
  int u = 0;  // u < v
  int v = 0;
  double weight = 0.0;
};

// Directed memberships exp(-max(0, d - rho_i) / sigma_i) over each vertex's
// k nearest neighbors, symmetrized with the probabilistic t-conorm
// w_uv = w1 + w2 - w1 * w2. Edges are sorted by (u, v).
struct FuzzyGraph {
  std::vector<UmapEdge> edges;
  std::vector<double> rho;
  std::vector<double> sigma;
};

FuzzyGraph build_fuzzy_graph(std::span<const Point2> points, int n_neighbors);

// Sampled stochastic gradient descent over the fuzzy edges: each edge fires
// every w_max / w epochs, attraction moves both endpoints, and each firing
// draws negative samples that repel only the head. Per-coordinate moves are
// clipped to [-4, 4]; the learning rate decays linearly to zero.
std::vector<double> umap_layout_1d(int n, const FuzzyGraph& graph, const MembershipCurve& curve,
                                   const UmapParams& params, std::span<const double> init);

struct UmapOrderResult {
  Ordering ordering;
  Embedding1D embedding;
  MembershipCurve curve;
  bool spectral_init = false;  // false means the seeded uniform fallback ran
};

// 1-D UMAP over the projected vertex coordinates, ranked by ascending
// embedding value. Initial coordinates come from the fuzzy graph's spectral
// (Fiedler) layout scaled to max |y| = 10, falling back to seeded uniform
// noise when that graph is disconnected.
UmapOrderResult umap_order(const UCSGraph& g, const UmapParams& params);

}  // namespace vorder
