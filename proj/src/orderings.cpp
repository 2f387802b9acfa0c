#include "vorder/orderings.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "vorder/error.hpp"
#include "vorder/format.hpp"
#include "vorder/laplacian.hpp"
#include "vorder/rng.hpp"

namespace vorder {

std::vector<int> ranks_from_values(std::span<const double> values) {
  const int n = static_cast<int>(values.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (values[a] != values[b]) return values[a] < values[b];
    return a < b;
  });
  std::vector<int> rank_of(n);
  for (int r = 0; r < n; ++r) rank_of[order[r]] = r;
  return rank_of;
}

FiedlerOrderResult fiedler_order(const UCSGraph& g, const FiedlerOptions& options) {
  if (g.n() < 2) throw std::invalid_argument("fiedler_order: need at least two vertices");

  FiedlerPair pair = fiedler_pair(build_laplacian(g), options);

  // Deterministic sign: the first vertex with a nonzero entry gets a
  // negative one.
  const double scale = pair.vector.cwiseAbs().maxCoeff();
  for (int i = 0; i < g.n(); ++i) {
    const double entry = pair.vector[i];
    if (std::abs(entry) > 1e-12 * scale) {
      if (entry > 0.0) pair.vector = -pair.vector;
      break;
    }
  }

  FiedlerOrderResult result;
  result.embedding.value.assign(pair.vector.data(), pair.vector.data() + g.n());
  result.ordering.rank_of = ranks_from_values(result.embedding.value);
  result.ordering.method = "fiedler";
  result.lambda = pair.lambda;
  result.residual = pair.residual;
  return result;
}

Ordering random_order(const UCSGraph& g, std::uint64_t seed) {
  const int n = g.n();
  std::vector<int> ranks(n);
  std::iota(ranks.begin(), ranks.end(), 0);
  DetRng rng(seed);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(ranks[i], ranks[j]);
  }
  Ordering ordering;
  ordering.rank_of = std::move(ranks);
  ordering.method = "random";
  ordering.params["seed"] = format_int(static_cast<long long>(seed));
  return ordering;
}

Ordering original_order(const UCSGraph& g) {
  Ordering ordering;
  ordering.rank_of.resize(g.n());
  std::iota(ordering.rank_of.begin(), ordering.rank_of.end(), 0);
  ordering.method = "original";
  return ordering;
}

}  // namespace vorder
