#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "doctest.h"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "vorder/error.hpp"
#include "vorder/rng.hpp"
#include "vorder/umap.hpp"

using namespace vorder;

TEST_CASE("membership curve fit matches reference least-squares values") {
  struct Case {
    double min_dist, a, b;
  };
  // reference values from an independent least-squares fit of
  // 1/(1 + a x^(2b)) to the target curve at the same 300 samples
  const Case cases[] = {
      {0.0, 1.93280839734315, 0.7904949732233831},
      {0.1, 1.5769434602697652, 0.8950608778515733},
      {0.25, 1.1214363422305684, 1.057499876683671},
      {0.5, 0.5830300203414425, 1.3341669924314914},
      {1.0, 0.11497568327441922, 1.929237144081752},
  };
  for (const Case& c : cases) {
    CAPTURE(c.min_dist);
    const MembershipCurve curve = fit_membership_curve(c.min_dist);
    CHECK(curve.a == doctest::Approx(c.a).epsilon(1e-5));
    CHECK(curve.b == doctest::Approx(c.b).epsilon(1e-5));
  }
  CHECK_THROWS_AS(fit_membership_curve(0.1, 0.0), UmapError);
  CHECK_THROWS_AS(fit_membership_curve(-0.1), UmapError);
}

TEST_CASE("sigma calibration solves the smooth-knn equation") {
  const std::vector<double> d{10.0, 12.0, 17.0, 30.0, 44.0};
  const double rho = 10.0;
  const double target = std::log2(5.0);
  const double sigma = smooth_knn_sigma(d, rho, target);
  double sum = 0.0;
  for (double v : d) sum += std::exp(-std::max(0.0, v - rho) / sigma);
  CHECK(sum == doctest::Approx(target).epsilon(1e-4));
}

TEST_CASE("sigma calibration clamps degenerate all-tied distances") {
  // every neighbor at distance rho: the sum is k for any sigma, so the
  // bisection cannot reach the target and the floor keeps sigma positive
  const std::vector<double> d{5.0, 5.0, 5.0, 5.0};
  const double sigma = smooth_knn_sigma(d, 5.0, 2.0);
  CHECK(sigma >= 1e-3 * 5.0 - 1e-12);
  CHECK(std::isfinite(sigma));
}

TEST_CASE("fuzzy graph edges are symmetrized directed memberships") {
  DetRng rng(31);
  std::vector<Point2> pts;
  for (int i = 0; i < 50; ++i) pts.push_back({rng.uniform(0, 1000), rng.uniform(0, 1000)});
  const int k = 6;
  const FuzzyGraph fg = build_fuzzy_graph(pts, k);
  REQUIRE(fg.rho.size() == 50);
  REQUIRE(fg.sigma.size() == 50);

  // recompute the directed memberships from scratch
  std::map<std::pair<int, int>, double> directed;
  for (int i = 0; i < 50; ++i) {
    std::vector<int> order(50);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const double da = squared_distance(pts[static_cast<std::size_t>(i)],
                                         pts[static_cast<std::size_t>(a)]);
      const double db = squared_distance(pts[static_cast<std::size_t>(i)],
                                         pts[static_cast<std::size_t>(b)]);
      if (da != db) return da < db;
      return a < b;
    });
    // drop self (distance zero, lowest index tie is the point itself)
    std::vector<int> nn(order.begin() + 1, order.begin() + 1 + k);
    std::vector<double> dist;
    dist.reserve(nn.size());
    for (int j : nn)
      dist.push_back(std::sqrt(squared_distance(pts[static_cast<std::size_t>(i)],
                                                pts[static_cast<std::size_t>(j)])));
    const double rho = *std::min_element(dist.begin(), dist.end());
    CHECK(fg.rho[static_cast<std::size_t>(i)] == doctest::Approx(rho).epsilon(1e-12));
    const double sigma = fg.sigma[static_cast<std::size_t>(i)];
    for (std::size_t j = 0; j < nn.size(); ++j)
      directed[{i, nn[j]}] = std::exp(-std::max(0.0, dist[j] - rho) / sigma);
  }

  for (const UmapEdge& e : fg.edges) {
    CHECK(e.u < e.v);
    const double w1 = directed.count({e.u, e.v}) ? directed[{e.u, e.v}] : 0.0;
    const double w2 = directed.count({e.v, e.u}) ? directed[{e.v, e.u}] : 0.0;
    CHECK(e.weight == doctest::Approx(w1 + w2 - w1 * w2).epsilon(1e-12));
    CHECK(e.weight > 0.0);
    CHECK(e.weight <= 1.0 + 1e-12);
  }
  // sorted by (u, v)
  for (std::size_t i = 1; i < fg.edges.size(); ++i) {
    const auto& a = fg.edges[i - 1];
    const auto& b = fg.edges[i];
    CHECK((a.u < b.u || (a.u == b.u && a.v < b.v)));
  }
  // every directed pair is represented
  std::size_t undirected = 0;
  std::set<std::pair<int, int>> seen;
  for (const auto& [key, w] : directed)
    if (seen.emplace(std::min(key.first, key.second), std::max(key.first, key.second)).second)
      ++undirected;
  CHECK(fg.edges.size() == undirected);
}

TEST_CASE("fuzzy graph validates the neighbor count") {
  std::vector<Point2> pts{{0, 0}, {1, 0}, {2, 0}};
  CHECK_THROWS_AS(build_fuzzy_graph(pts, 1), UmapError);
  CHECK_THROWS_AS(build_fuzzy_graph(pts, 3), UmapError);
  CHECK_NOTHROW(build_fuzzy_graph(pts, 2));
}

TEST_CASE("layout descent is deterministic and finite") {
  DetRng rng(77);
  std::vector<Point2> pts;
  for (int i = 0; i < 60; ++i) pts.push_back({rng.uniform(0, 500), rng.uniform(0, 500)});
  const FuzzyGraph fg = build_fuzzy_graph(pts, 8);
  const MembershipCurve curve = fit_membership_curve(0.1);
  std::vector<double> init(60);
  for (int i = 0; i < 60; ++i) init[static_cast<std::size_t>(i)] = (i - 30) * 0.3;
  UmapParams params;
  params.n_neighbors = 8;
  params.epochs = 60;
  params.seed = 5;
  const std::vector<double> a = umap_layout_1d(60, fg, curve, params, init);
  const std::vector<double> b = umap_layout_1d(60, fg, curve, params, init);
  CHECK(a == b);
  for (double v : a) CHECK(std::isfinite(v));
  CHECK(a != init);  // it actually moved
}

TEST_CASE("umap ordering is deterministic per seed and uses the spectral init") {
  const UCSGraph g = fixtures::street_graph(8, 8, 100.0, 15);
  UmapParams params;
  params.n_neighbors = 8;
  params.epochs = 80;
  params.seed = 21;
  const UmapOrderResult a = umap_order(g, params);
  const UmapOrderResult b = umap_order(g, params);
  CHECK(a.ordering.rank_of == b.ordering.rank_of);
  CHECK(a.embedding.value == b.embedding.value);
  CHECK(a.spectral_init);
  CHECK(a.ordering.method == "umap");
  CHECK(a.ordering.params.at("n_neighbors") == "8");
  CHECK(a.ordering.params.at("seed") == "21");
  CHECK(a.ordering.is_bijection());

  params.seed = 22;
  const UmapOrderResult c = umap_order(g, params);
  CHECK(a.embedding.value != c.embedding.value);
}

TEST_CASE("umap recovers the coarse structure of a line") {
  const UCSGraph g = fixtures::path_graph(40, 100.0);
  UmapParams params;
  params.n_neighbors = 6;
  params.epochs = 150;
  params.seed = 2;
  const UmapOrderResult res = umap_order(g, params);
  std::vector<int> line_ranks(40);
  std::iota(line_ranks.begin(), line_ranks.end(), 0);
  const double rho = oracles::spearman(res.ordering.rank_of, line_ranks);
  CHECK(std::abs(rho) > 0.8);
}

TEST_CASE("umap rejects invalid parameters") {
  const UCSGraph g = fixtures::grid_graph(4, 4);
  UmapParams params;
  params.n_neighbors = 16;  // must be below n
  CHECK_THROWS_AS(umap_order(g, params), UmapError);
  params.n_neighbors = 5;
  params.epochs = 0;
  CHECK_THROWS_AS(umap_order(g, params), UmapError);
  params.epochs = 50;
  params.min_dist = -1.0;
  CHECK_THROWS_AS(umap_order(g, params), UmapError);
}
