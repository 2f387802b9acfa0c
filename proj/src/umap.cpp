#include "vorder/umap.hpp"

#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

#include "vorder/error.hpp"
#include "vorder/fiedler.hpp"
#include "vorder/format.hpp"
#include "vorder/orderings.hpp"
#include "vorder/rng.hpp"
#include "vorder/spatial.hpp"

namespace vorder {

namespace {

constexpr int kCurveSamples = 300;

// 2x2 damped Gauss-Newton on the kernel parameters. The objective is smooth
// with a single well-separated minimum on this target family, so the fit
// lands at the same optimum as generic nonlinear least-squares solvers.
MembershipCurve fit_curve_impl(std::span<const double> xs, std::span<const double> ys) {
  double a = 1.0;
  double b = 1.0;
  const auto cost_at = [&](double ca, double cb) {
    double c = 0.0;
    for (std::size_t m = 0; m < xs.size(); ++m) {
      const double u = xs[m] > 0.0 ? std::pow(xs[m], 2.0 * cb) : 0.0;
      const double r = 1.0 / (1.0 + ca * u) - ys[m];
      c += r * r;
    }
    return c;
  };

  double lambda = 1e-3;
  double cost = cost_at(a, b);
  for (int iter = 0; iter < 300; ++iter) {
    double jaa = 0.0, jab = 0.0, jbb = 0.0, ga = 0.0, gb = 0.0;
    for (std::size_t m = 0; m < xs.size(); ++m) {
      const double x = xs[m];
      double u = 0.0, dlog = 0.0;
      if (x > 0.0) {
        u = std::pow(x, 2.0 * b);
        dlog = 2.0 * std::log(x);
      }
      const double denom = 1.0 + a * u;
      const double f = 1.0 / denom;
      const double r = f - ys[m];
      const double da = -u / (denom * denom);
      const double db = -a * u * dlog / (denom * denom);
      jaa += da * da;
      jab += da * db;
      jbb += db * db;
      ga += da * r;
      gb += db * r;
    }
    bool moved = false;
    for (int attempt = 0; attempt < 30; ++attempt) {
      const double m00 = jaa * (1.0 + lambda);
      const double m11 = jbb * (1.0 + lambda);
      const double det = m00 * m11 - jab * jab;
      if (det <= 0.0 || !std::isfinite(det)) {
        lambda *= 3.0;
        continue;
      }
      const double step_a = (-ga * m11 + gb * jab) / det;
      const double step_b = (-gb * m00 + ga * jab) / det;
      const double na = a + step_a;
      const double nb = b + step_b;
      if (!(na > 0.0) || !(nb > 0.0)) {
        lambda *= 3.0;
        continue;
      }
      const double ncost = cost_at(na, nb);
      if (ncost <= cost) {
        const bool tiny = std::abs(step_a) < 1e-13 * (1.0 + std::abs(a)) &&
                          std::abs(step_b) < 1e-13 * (1.0 + std::abs(b));
        a = na;
        b = nb;
        cost = ncost;
        lambda = std::max(lambda / 3.0, 1e-12);
        moved = true;
        if (tiny) return {a, b};
        break;
      }
      lambda *= 3.0;
    }
    if (!moved) break;
  }
  return {a, b};
}

}  // namespace

MembershipCurve fit_membership_curve(double min_dist, double spread) {
  if (!(spread > 0.0)) throw UmapError("spread must be positive");
  if (!(min_dist >= 0.0)) throw UmapError("min_dist must be non-negative");
  std::vector<double> xs(kCurveSamples);
  std::vector<double> ys(kCurveSamples);
  for (int m = 0; m < kCurveSamples; ++m) {
    const double x = 3.0 * spread * static_cast<double>(m) / (kCurveSamples - 1);
    xs[static_cast<std::size_t>(m)] = x;
    ys[static_cast<std::size_t>(m)] = x < min_dist ? 1.0 : std::exp(-(x - min_dist) / spread);
  }
  return fit_curve_impl(xs, ys);
}

double smooth_knn_sigma(std::span<const double> neighbor_distances, double rho, double target) {
  if (neighbor_distances.empty()) throw UmapError("sigma calibration: no neighbor distances");
  if (!(target > 0.0)) throw UmapError("sigma calibration: target must be positive");

  const auto weight_sum = [&](double sigma) {
    double s = 0.0;
    for (double d : neighbor_distances) s += std::exp(-std::max(0.0, d - rho) / sigma);
    return s;
  };

  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  double sigma = 1.0;
  for (int step = 0; step < 64; ++step) {
    const double s = weight_sum(sigma);
    if (std::abs(s - target) <= 1e-5) break;
    if (s > target) {
      hi = sigma;
      sigma = 0.5 * (lo + hi);
    } else {
      lo = sigma;
      sigma = std::isinf(hi) ? sigma * 2.0 : 0.5 * (lo + hi);
    }
  }

  double mean = 0.0;
  for (double d : neighbor_distances) mean += d;
  mean /= static_cast<double>(neighbor_distances.size());
  return std::max(sigma, std::max(1e-3 * mean, 1e-12));
}

FuzzyGraph build_fuzzy_graph(std::span<const Point2> points, int n_neighbors) {
  const int n = static_cast<int>(points.size());
  if (n_neighbors < 2) throw UmapError("n_neighbors must be at least 2");
  if (n_neighbors >= n)
    throw UmapError("n_neighbors must be below the vertex count; got " + format_int(n_neighbors) +
                    " for n=" + format_int(n));

  KdTree2D tree(points);
  const double target = std::log2(static_cast<double>(n_neighbors));

  FuzzyGraph fg;
  fg.rho.assign(static_cast<std::size_t>(n), 0.0);
  fg.sigma.assign(static_cast<std::size_t>(n), 0.0);

  std::map<std::pair<int, int>, double> sym;
  std::vector<double> dists;
  std::vector<int> idx;
  for (int i = 0; i < n; ++i) {
    const auto hits = tree.nearest(points[static_cast<std::size_t>(i)], n_neighbors + 1);
    dists.clear();
    idx.clear();
    for (int h : hits) {
      if (h == i) continue;
      if (static_cast<int>(idx.size()) == n_neighbors) break;
      idx.push_back(h);
      dists.push_back(distance(points[static_cast<std::size_t>(i)],
                               points[static_cast<std::size_t>(h)]));
    }
    const double rho = dists.front();  // ascending from the kd-tree
    const double sigma = smooth_knn_sigma(dists, rho, target);
    fg.rho[static_cast<std::size_t>(i)] = rho;
    fg.sigma[static_cast<std::size_t>(i)] = sigma;
    for (std::size_t j = 0; j < idx.size(); ++j) {
      const double w = std::exp(-std::max(0.0, dists[j] - rho) / sigma);
      auto key = std::minmax(i, idx[j]);
      double& s = sym[{key.first, key.second}];
      s = s + w - s * w;  // t-conorm fold; two directed contributions at most
    }
  }

  fg.edges.reserve(sym.size());
  for (const auto& [key, w] : sym)
    if (w > 0.0) fg.edges.push_back({key.first, key.second, w});
  return fg;
}

namespace {

inline double clip4(double v) { return std::clamp(v, -4.0, 4.0); }

}  // namespace

std::vector<double> umap_layout_1d(int n, const FuzzyGraph& graph, const MembershipCurve& curve,
                                   const UmapParams& params, std::span<const double> init) {
  if (static_cast<int>(init.size()) != n) throw UmapError("layout init size mismatch");
  if (params.epochs < 1) throw UmapError("epochs must be >= 1");
  if (!(params.learning_rate > 0.0)) throw UmapError("learning rate must be positive");
  if (params.negative_sample_rate < 1) throw UmapError("negative_sample_rate must be >= 1");

  std::vector<double> y(init.begin(), init.end());
  if (graph.edges.empty()) return y;

  double w_max = 0.0;
  for (const auto& e : graph.edges) w_max = std::max(w_max, e.weight);

  // Directed copies ordered by (head, tail); edges too weak to fire within
  // the epoch budget are dropped up front.
  struct Directed {
    int head;
    int tail;
    double weight;
  };
  std::vector<Directed> dir;
  dir.reserve(graph.edges.size() * 2);
  const double cutoff = w_max / static_cast<double>(params.epochs);
  for (const auto& e : graph.edges) {
    if (e.weight < cutoff) continue;
    dir.push_back({e.u, e.v, e.weight});
    dir.push_back({e.v, e.u, e.weight});
  }
  std::sort(dir.begin(), dir.end(), [](const Directed& l, const Directed& r) {
    return l.head != r.head ? l.head < r.head : l.tail < r.tail;
  });

  const std::size_t ne = dir.size();
  std::vector<double> eps(ne), next_sample(ne), eps_neg(ne), next_neg(ne);
  for (std::size_t e = 0; e < ne; ++e) {
    eps[e] = w_max / dir[e].weight;
    next_sample[e] = eps[e];
    eps_neg[e] = eps[e] / static_cast<double>(params.negative_sample_rate);
    next_neg[e] = eps_neg[e];
  }

  const double a = curve.a;
  const double b = curve.b;
  DetRng rng(params.seed);

  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    const double alpha =
        params.learning_rate * (1.0 - static_cast<double>(epoch) / params.epochs);
    const double en = static_cast<double>(epoch);
    for (std::size_t e = 0; e < ne; ++e) {
      if (next_sample[e] > en) continue;
      const int i = dir[e].head;
      const int j = dir[e].tail;
      const double diff = y[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(j)];
      const double d2 = diff * diff;
      if (d2 > 0.0) {
        const double gc = (-2.0 * a * b * std::pow(d2, b - 1.0)) / (a * std::pow(d2, b) + 1.0);
        const double g = clip4(gc * diff);
        y[static_cast<std::size_t>(i)] += alpha * g;
        y[static_cast<std::size_t>(j)] -= alpha * g;
      }
      next_sample[e] += eps[e];

      const int n_neg = static_cast<int>((en - next_neg[e]) / eps_neg[e]);
      for (int p = 0; p < n_neg; ++p) {
        const int r = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        const double rd = y[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(r)];
        const double rd2 = rd * rd;
        if (rd2 <= 0.0) continue;
        const double gc = 2.0 * b / ((0.001 + rd2) * (a * std::pow(rd2, b) + 1.0));
        y[static_cast<std::size_t>(i)] += alpha * clip4(gc * rd);
      }
      next_neg[e] += n_neg * eps_neg[e];
    }
  }

  for (double v : y)
    if (!std::isfinite(v)) throw UmapError("non-finite embedding coordinate");
  return y;
}

UmapOrderResult umap_order(const UCSGraph& g, const UmapParams& params) {
  const int n = g.n();
  if (n < 3) throw UmapError("UMAP ordering needs at least 3 vertices");
  if (!(params.min_dist >= 0.0)) throw UmapError("min_dist must be non-negative");

  FuzzyGraph fg = build_fuzzy_graph(g.coords(), params.n_neighbors);
  const MembershipCurve curve = fit_membership_curve(params.min_dist);

  UmapOrderResult result;
  result.curve = curve;

  // Spectral start: Fiedler layout of the fuzzy union graph, rescaled so the
  // widest coordinate sits at 10. Disconnected graphs fall back to noise.
  std::vector<double> init(static_cast<std::size_t>(n), 0.0);
  try {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(fg.edges.size() * 2 + static_cast<std::size_t>(n));
    std::vector<double> diag(static_cast<std::size_t>(n), 0.0);
    for (const auto& e : fg.edges) {
      trip.emplace_back(e.u, e.v, -e.weight);
      trip.emplace_back(e.v, e.u, -e.weight);
      diag[static_cast<std::size_t>(e.u)] += e.weight;
      diag[static_cast<std::size_t>(e.v)] += e.weight;
    }
    for (int i = 0; i < n; ++i) trip.emplace_back(i, i, diag[static_cast<std::size_t>(i)]);
    Eigen::SparseMatrix<double> lap(n, n);
    lap.setFromTriplets(trip.begin(), trip.end());

    FiedlerPair fp = fiedler_pair(lap);
    double amax = 0.0;
    for (int i = 0; i < n; ++i) amax = std::max(amax, std::abs(fp.vector[i]));
    double sign = 1.0;
    for (int i = 0; i < n; ++i) {
      if (std::abs(fp.vector[i]) > 1e-12 * amax) {
        sign = fp.vector[i] > 0.0 ? -1.0 : 1.0;
        break;
      }
    }
    const double scale = amax > 0.0 ? 10.0 / amax : 1.0;
    for (int i = 0; i < n; ++i) init[static_cast<std::size_t>(i)] = sign * scale * fp.vector[i];
    result.spectral_init = true;
  } catch (const EigensolverError&) {
    DetRng noise(params.seed ^ 0x5eedba5eULL);
    for (auto& v : init) v = noise.uniform(-10.0, 10.0);
    result.spectral_init = false;
  }

  std::vector<double> y = umap_layout_1d(n, fg, curve, params, init);

  result.embedding.value = y;
  result.ordering.rank_of = ranks_from_values(y);
  result.ordering.method = "umap";
  result.ordering.params = {
      {"n_neighbors", format_int(params.n_neighbors)},
      {"min_dist", format_double(params.min_dist)},
      {"epochs", format_int(params.epochs)},
      {"learning_rate", format_double(params.learning_rate)},
      {"negative_sample_rate", format_int(params.negative_sample_rate)},
      {"seed", format_int(params.seed)},
  };
  return result;
}

}  // namespace vorder
