#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vorder/fiedler.hpp"
#include "vorder/graph.hpp"

namespace vorder {

// Ranks by ascending value; ties break by ascending vertex index.
std::vector<int> ranks_from_values(std::span<const double> values);

struct FiedlerOrderResult {
  Ordering ordering;
  Embedding1D embedding;  // Fiedler vector entries
  double lambda = 0.0;
  double residual = 0.0;
};

// Spectral ordering by the Fiedler vector of the length-weighted Laplacian.
// The vector's sign is fixed so the entry of the lowest-index vertex with a
// nonzero entry is negative.
FiedlerOrderResult fiedler_order(const UCSGraph& g, const FiedlerOptions& options = {});

// Seeded Fisher-Yates permutation of ranks. Same seed, same output on every
// platform (mt19937_64 stream, rejection-sampled bounds; see README).
Ordering random_order(const UCSGraph& g, std::uint64_t seed);

// Ranks follow the order of appearance in the source file, which is the
// internal storage order of UCSGraph.
Ordering original_order(const UCSGraph& g);

}  // namespace vorder
