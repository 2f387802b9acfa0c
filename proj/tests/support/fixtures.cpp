#include "support/fixtures.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>
#include <utility>

#include "vorder/geometry.hpp"
#include "vorder/rng.hpp"

namespace fixtures {
namespace {

using vorder::GraphBuilder;
using vorder::UCSGraph;

// degrees of latitude per meter on the mean-radius sphere; longitude matches
// at the equator, where all fixtures live.
constexpr double kDegPerM = 180.0 / (vorder::kPi * vorder::kEarthRadiusM);

std::string num_id(const char* prefix, int i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%d", prefix, i);
  return buf;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

}  // namespace

UCSGraph path_graph(int n, double spacing_m, std::optional<double> edge_length_m) {
  GraphBuilder b;
  for (int i = 0; i < n; ++i) b.add_node(num_id("v", i), 0.0, i * spacing_m * kDegPerM);
  for (int i = 0; i + 1 < n; ++i) b.add_edge_by_index(i, i + 1, edge_length_m);
  return b.build();
}

UCSGraph graded_path_graph(int n, double base_spacing_m, double step_m) {
  GraphBuilder b;
  double lon = 0.0;
  for (int i = 0; i < n; ++i) {
    b.add_node(num_id("v", i), 0.0, lon);
    lon += (base_spacing_m + i * step_m) * kDegPerM;
  }
  for (int i = 0; i + 1 < n; ++i) b.add_edge_by_index(i, i + 1);
  return b.build();
}

UCSGraph grid_graph(int rows, int cols, double spacing_m) {
  GraphBuilder b;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      b.add_node(num_id("r", i) + num_id("c", j), i * spacing_m * kDegPerM,
                 j * spacing_m * kDegPerM);
  const auto at = [cols](int i, int j) { return i * cols + j; };
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      if (j + 1 < cols) b.add_edge_by_index(at(i, j), at(i, j + 1), spacing_m);
      if (i + 1 < rows) b.add_edge_by_index(at(i, j), at(i + 1, j), spacing_m);
    }
  return b.build();
}

UCSGraph random_connected_graph(int n, int extra_edges, std::uint64_t seed) {
  vorder::DetRng rng(seed);
  GraphBuilder b;
  for (int i = 0; i < n; ++i)
    b.add_node(num_id("n", i), rng.uniform(0.0, 0.02), rng.uniform(0.0, 0.02));
  std::set<std::pair<int, int>> used;
  for (int i = 1; i < n; ++i) {
    const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i)));
    b.add_edge_by_index(i, j);
    used.emplace(std::min(i, j), std::max(i, j));
  }
  int added = 0;
  for (int attempts = 0; added < extra_edges && attempts < 20 * extra_edges + 200; ++attempts) {
    const int u = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    const int v = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    if (u == v) continue;
    if (!used.emplace(std::min(u, v), std::max(u, v)).second) continue;
    b.add_edge_by_index(u, v);
    ++added;
  }
  return b.build();
}

UCSGraph street_graph(int rows, int cols, double spacing_m, std::uint64_t seed,
                      double keep_fraction) {
  vorder::DetRng rng(seed);
  GraphBuilder b;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      const double jlat = rng.uniform(-0.3, 0.3) * spacing_m * kDegPerM;
      const double jlon = rng.uniform(-0.3, 0.3) * spacing_m * kDegPerM;
      b.add_node(num_id("s", i * cols + j), i * spacing_m * kDegPerM + jlat,
                 j * spacing_m * kDegPerM + jlon);
    }
  const auto at = [cols](int i, int j) { return i * cols + j; };
  std::vector<std::pair<int, int>> candidates;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      if (j + 1 < cols) candidates.emplace_back(at(i, j), at(i, j + 1));
      if (i + 1 < rows) candidates.emplace_back(at(i, j), at(i + 1, j));
    }
  for (std::size_t i = candidates.size(); i > 1; --i)
    std::swap(candidates[i - 1], candidates[rng.below(i)]);
  UnionFind uf(rows * cols);
  std::vector<std::pair<int, int>> leftovers;
  for (const auto& [u, v] : candidates) {
    if (uf.unite(u, v)) b.add_edge_by_index(u, v);
    else leftovers.push_back({u, v});
  }
  for (const auto& [u, v] : leftovers)
    if (rng.uniform01() < keep_fraction) b.add_edge_by_index(u, v);
  return b.build();
}

ForwardWindowFixture forward_window_fixture() {
  // Insertion order: c, a, b, d, e, x1..x29, f1..f6 (40 vertices). c's three
  // neighbors are a, x1 and e; the x-chain puts rank 39's holder 29 hops out.
  GraphBuilder b;
  int next = 0;
  const auto add = [&](const std::string& id) {
    b.add_node(id, 0.0, next * 100.0 * kDegPerM);
    return next++;
  };
  const int c = add("c");
  const int a = add("a");
  const int bb = add("b");
  const int d = add("d");
  const int e = add("e");
  std::vector<int> x(30, -1);
  for (int i = 1; i <= 29; ++i) x[static_cast<std::size_t>(i)] = add(num_id("x", i));
  std::vector<int> f(7, -1);
  for (int i = 1; i <= 6; ++i) f[static_cast<std::size_t>(i)] = add(num_id("f", i));

  b.add_edge_by_index(c, a);
  b.add_edge_by_index(a, bb);
  b.add_edge_by_index(bb, d);
  b.add_edge_by_index(c, x[1]);
  for (int i = 1; i < 29; ++i)
    b.add_edge_by_index(x[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(i + 1)]);
  b.add_edge_by_index(c, e);
  b.add_edge_by_index(e, f[1]);
  for (int i = 1; i < 6; ++i)
    b.add_edge_by_index(f[static_cast<std::size_t>(i)], f[static_cast<std::size_t>(i + 1)]);

  ForwardWindowFixture fx;
  fx.graph = b.build();
  fx.center = c;
  fx.expected_hops = {1, 2, 3, 29};

  // 1-based ranks: c=37, a=36, b=38, d=35, x29=39, x1..x28 -> 1..28, e=29,
  // f1..f5 -> 30..34, f6=40.
  std::vector<int> rank1(40, 0);
  rank1[static_cast<std::size_t>(c)] = 37;
  rank1[static_cast<std::size_t>(a)] = 36;
  rank1[static_cast<std::size_t>(bb)] = 38;
  rank1[static_cast<std::size_t>(d)] = 35;
  rank1[static_cast<std::size_t>(x[29])] = 39;
  for (int i = 1; i <= 28; ++i) rank1[static_cast<std::size_t>(x[static_cast<std::size_t>(i)])] = i;
  rank1[static_cast<std::size_t>(e)] = 29;
  for (int i = 1; i <= 5; ++i)
    rank1[static_cast<std::size_t>(f[static_cast<std::size_t>(i)])] = 29 + i;
  rank1[static_cast<std::size_t>(f[6])] = 40;

  fx.ordering.method = "manual";
  fx.ordering.rank_of.resize(40);
  for (int v = 0; v < 40; ++v)
    fx.ordering.rank_of[static_cast<std::size_t>(v)] = rank1[static_cast<std::size_t>(v)] - 1;
  return fx;
}

InverseNeighborFixture inverse_neighbor_fixture() {
  // Path p0..p109 plus a probe vertex c wired to p0, p50 and p109. 1-based
  // ranks: c=106, p0=110, p50=105, p109=95; everything else filled in
  // insertion order from the remaining ranks.
  GraphBuilder b;
  for (int i = 0; i < 110; ++i) b.add_node(num_id("p", i), 0.0, i * 100.0 * kDegPerM);
  b.add_node("c", 100.0 * kDegPerM, 0.0);
  const int c = 110;
  for (int i = 0; i + 1 < 110; ++i) b.add_edge_by_index(i, i + 1);
  b.add_edge_by_index(c, 0);
  b.add_edge_by_index(c, 50);
  b.add_edge_by_index(c, 109);

  std::vector<int> rank1(111, 0);
  rank1[static_cast<std::size_t>(c)] = 106;
  rank1[0] = 110;
  rank1[50] = 105;
  rank1[109] = 95;
  std::vector<bool> taken(112, false);
  taken[106] = taken[110] = taken[105] = taken[95] = true;
  int next_rank = 1;
  for (int v = 0; v < 111; ++v) {
    if (rank1[static_cast<std::size_t>(v)] != 0) continue;
    while (taken[static_cast<std::size_t>(next_rank)]) ++next_rank;
    rank1[static_cast<std::size_t>(v)] = next_rank;
    taken[static_cast<std::size_t>(next_rank)] = true;
  }

  InverseNeighborFixture fx;
  fx.graph = b.build();
  fx.center = c;
  fx.ordering.method = "manual";
  fx.ordering.rank_of.resize(111);
  for (int v = 0; v < 111; ++v)
    fx.ordering.rank_of[static_cast<std::size_t>(v)] = rank1[static_cast<std::size_t>(v)] - 1;
  return fx;
}

vorder::Ordering identity_ordering(const vorder::UCSGraph& g) {
  vorder::Ordering o;
  o.method = "manual";
  o.rank_of.resize(static_cast<std::size_t>(g.n()));
  std::iota(o.rank_of.begin(), o.rank_of.end(), 0);
  return o;
}

TempDir::TempDir() {
  std::random_device rd;
  for (int attempt = 0; attempt < 32; ++attempt) {
    auto candidate = std::filesystem::temp_directory_path() /
                     ("vorder-test-" + std::to_string(rd()) + "-" + std::to_string(attempt));
    std::error_code ec;
    if (std::filesystem::create_directories(candidate, ec) && !ec) {
      path_ = candidate;
      return;
    }
  }
  throw std::runtime_error("could not create a temporary test directory");
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace fixtures
