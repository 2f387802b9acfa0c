#include "vorder/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <thread>

#include "vorder/format.hpp"
#include "vorder/geometry.hpp"
#include "vorder/paths.hpp"
#include "vorder/spatial.hpp"

namespace vorder {

namespace {

void validate_ordering(const UCSGraph& g, const Ordering& ordering) {
  if (ordering.n() != g.n() || !ordering.is_bijection())
    throw std::invalid_argument("ordering is not a bijection over the graph's vertices");
}

// Per-vertex work with independent output slots: identical results no matter
// how many workers run, since nothing is reduced across vertices.
template <typename Fn>
void for_each_vertex(int n, int jobs, Fn&& fn) {
  if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
  jobs = std::clamp(jobs, 1, std::max(1, n));
  if (jobs == 1) {
    for (int v = 0; v < n; ++v) fn(v);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(jobs));
  for (int t = 0; t < jobs; ++t) {
    workers.emplace_back([&] {
      for (int v = next.fetch_add(1); v < n; v = next.fetch_add(1)) fn(v);
    });
  }
  for (auto& w : workers) w.join();
}

void attach_provenance(MetricSeries& series, const Ordering& ordering) {
  series.ordering_method = ordering.method;
  series.ordering_params = ordering.params;
}

struct RankInterval {
  int lo;
  int hi;  // inclusive
};

RankInterval window_interval(int k, int m, int n, WindowAnchor anchoring) {
  int lo = k - m / 2;
  int hi = k + (m + 1) / 2 - 1;
  if (anchoring == WindowAnchor::kShiftToFit) {
    if (lo < 0) {
      hi -= lo;
      lo = 0;
    }
    if (hi > n - 1) {
      lo -= hi - (n - 1);
      hi = n - 1;
    }
  }
  lo = std::max(lo, 0);
  hi = std::min(hi, n - 1);
  return {lo, hi};
}

}  // namespace

int adaptive_window_size(const UCSGraph& g, int v) {
  if (v < 0 || v >= g.n()) throw std::invalid_argument("vertex out of range");
  const int deg = g.degree(v);
  return deg % 2 == 0 ? deg : deg + 1;
}

std::vector<int> ordering_window(const Ordering& ordering, int v, const WindowSpec& spec) {
  const int n = ordering.n();
  if (v < 0 || v >= n) throw std::invalid_argument("vertex out of range");
  if (spec.m < 1 || spec.m > n) throw std::invalid_argument("window cardinality out of range");
  const auto by_rank = ordering.vertices_by_rank();
  const RankInterval iv = window_interval(ordering.rank_of[static_cast<std::size_t>(v)], spec.m,
                                          n, spec.anchoring);
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(iv.hi - iv.lo + 1));
  for (int r = iv.lo; r <= iv.hi; ++r) out.push_back(by_rank[static_cast<std::size_t>(r)]);
  return out;
}

MetricSeries geometric_forward(const UCSGraph& g, const Ordering& ordering, int m, int jobs) {
  validate_ordering(g, ordering);
  const int n = g.n();
  if (m < 2 || m > n) throw std::invalid_argument("window cardinality out of range");

  const auto by_rank = ordering.vertices_by_rank();
  const auto& coords = g.coords();
  const KdTree2D tree(coords);

  MetricSeries series;
  series.metric = "geo_fwd";
  series.params = {{"m", format_int(m)}, {"anchoring", "shift-to-fit"}};
  attach_provenance(series, ordering);
  series.values.assign(static_cast<std::size_t>(n), 0.0);

  for_each_vertex(n, jobs, [&](int v) {
    const RankInterval iv = window_interval(ordering.rank_of[static_cast<std::size_t>(v)], m, n,
                                            WindowAnchor::kShiftToFit);
    BoundingBox raw;
    for (int r = iv.lo; r <= iv.hi; ++r)
      raw.expand(coords[static_cast<std::size_t>(by_rank[static_cast<std::size_t>(r)])]);

    BoundingBox opt;
    for (int u : tree.nearest(coords[static_cast<std::size_t>(v)], m))
      opt.expand(coords[static_cast<std::size_t>(u)]);

    series.values[static_cast<std::size_t>(v)] = raw.diagonal() / std::max(opt.diagonal(), 1.0);
  });
  return series;
}

MetricSeries geometric_inverse(const UCSGraph& g, const Ordering& ordering, double r,
                               BallMode mode, int jobs) {
  validate_ordering(g, ordering);
  if (!(r > 0.0)) throw std::invalid_argument("ball radius must be positive");
  const int n = g.n();
  const auto& coords = g.coords();

  MetricSeries series;
  series.metric = "geo_inv";
  series.params = {{"r_m", format_double(r)},
                   {"ball", mode == BallMode::kGraph ? "graph" : "euclidean"}};
  attach_provenance(series, ordering);
  series.values.assign(static_cast<std::size_t>(n), 0.0);

  std::optional<KdTree2D> tree;
  if (mode == BallMode::kEuclidean) tree.emplace(coords);

  for_each_vertex(n, jobs, [&](int v) {
    const std::vector<int> ball = mode == BallMode::kGraph
                                      ? graph_ball(g, v, r)
                                      : tree->within(coords[static_cast<std::size_t>(v)], r);
    int lo = ordering.rank_of[static_cast<std::size_t>(v)];
    int hi = lo;
    for (int u : ball) {
      const int k = ordering.rank_of[static_cast<std::size_t>(u)];
      lo = std::min(lo, k);
      hi = std::max(hi, k);
    }
    series.values[static_cast<std::size_t>(v)] =
        static_cast<double>(hi - lo) / static_cast<double>(ball.size());
  });
  return series;
}

MetricSeries topological_forward(const UCSGraph& g, const Ordering& ordering, int jobs) {
  validate_ordering(g, ordering);
  const int n = g.n();
  const auto by_rank = ordering.vertices_by_rank();

  MetricSeries series;
  series.metric = "topo_fwd";
  series.params = {{"window", "degree-adaptive"}, {"anchoring", "truncate"}};
  attach_provenance(series, ordering);
  series.values.assign(static_cast<std::size_t>(n), 0.0);

  for_each_vertex(n, jobs, [&](int v) {
    // half the adaptive window before the vertex, half after, clipped at the
    // ordering's ends; the center never measures itself
    const int half = adaptive_window_size(g, v) / 2;
    const int k = ordering.rank_of[static_cast<std::size_t>(v)];
    const int lo = std::max(0, k - half);
    const int hi = std::min(n - 1, k + half);
    std::vector<int> targets;
    targets.reserve(static_cast<std::size_t>(hi - lo));
    for (int rk = lo; rk <= hi; ++rk) {
      if (rk == k) continue;
      targets.push_back(by_rank[static_cast<std::size_t>(rk)]);
    }
    int worst = 0;
    for (int h : shortest_hops(g, v, targets)) worst = std::max(worst, h);
    series.values[static_cast<std::size_t>(v)] = static_cast<double>(worst);
  });
  return series;
}

MetricSeries topological_inverse(const UCSGraph& g, const Ordering& ordering, int jobs) {
  validate_ordering(g, ordering);
  const int n = g.n();
  if (n < 2) throw std::invalid_argument("inverse topological measure needs n >= 2");

  MetricSeries series;
  series.metric = "topo_inv";
  attach_provenance(series, ordering);
  series.values.assign(static_cast<std::size_t>(n), 0.0);

  for_each_vertex(n, jobs, [&](int v) {
    const int k = ordering.rank_of[static_cast<std::size_t>(v)];
    int worst = 0;
    for (const Neighbor& nb : g.neighbors(v))
      worst = std::max(worst, std::abs(k - ordering.rank_of[static_cast<std::size_t>(nb.index)]));
    series.values[static_cast<std::size_t>(v)] =
        static_cast<double>(worst) / static_cast<double>(g.degree(v));
  });
  return series;
}

std::vector<MetricSeries> evaluate_metrics(const UCSGraph& g, const Ordering& ordering,
                                           const MetricParams& params) {
  std::vector<MetricSeries> out;
  out.reserve(4);
  out.push_back(geometric_forward(g, ordering, params.window_m, params.jobs));
  out.push_back(geometric_inverse(g, ordering, params.radius_m, params.ball, params.jobs));
  out.push_back(topological_forward(g, ordering, params.jobs));
  out.push_back(topological_inverse(g, ordering, params.jobs));
  return out;
}

}  // namespace vorder
