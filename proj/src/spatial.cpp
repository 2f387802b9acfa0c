#include "vorder/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace vorder {

namespace {

struct HeapEntry {
  double d2;
  int index;
  // max-heap on (d2, index): the entry at the top is the worst candidate
  bool operator<(const HeapEntry& o) const {
    if (d2 != o.d2) return d2 < o.d2;
    return index < o.index;
  }
};

}  // namespace

KdTree2D::KdTree2D(std::span<const Point2> points)
    : points_(points.begin(), points.end()) {
  std::vector<int> idx(points_.size());
  for (int i = 0; i < static_cast<int>(idx.size()); ++i) idx[i] = i;
  nodes_.reserve(points_.size());
  if (!idx.empty()) root_ = build(idx, 0, static_cast<int>(idx.size()), 0);
}

int KdTree2D::build(std::vector<int>& idx, int lo, int hi, int depth) {
  if (lo >= hi) return -1;
  const int axis = depth & 1;
  const int mid = lo + (hi - lo) / 2;
  std::nth_element(idx.begin() + lo, idx.begin() + mid, idx.begin() + hi,
                   [&](int a, int b) {
                     const double ca = axis == 0 ? points_[a].x : points_[a].y;
                     const double cb = axis == 0 ? points_[b].x : points_[b].y;
                     if (ca != cb) return ca < cb;
                     return a < b;
                   });
  const int node_id = static_cast<int>(nodes_.size());
  nodes_.push_back({idx[mid], -1, -1, axis});
  const int left = build(idx, lo, mid, depth + 1);
  const int right = build(idx, mid + 1, hi, depth + 1);
  nodes_[node_id].left = left;
  nodes_[node_id].right = right;
  return node_id;
}

std::vector<int> KdTree2D::nearest(const Point2& q, int m) const {
  if (m < 1 || m > size()) throw std::invalid_argument("knn count out of range");

  std::priority_queue<HeapEntry> best;  // holds the m best so far
  auto visit = [&](auto&& self, int node_id) -> void {
    if (node_id < 0) return;
    const Node& node = nodes_[node_id];
    const Point2& p = points_[node.point];
    const HeapEntry cand{squared_distance(q, p), node.point};
    if (static_cast<int>(best.size()) < m) {
      best.push(cand);
    } else if (cand < best.top()) {
      best.pop();
      best.push(cand);
    }

    const double qc = node.axis == 0 ? q.x : q.y;
    const double pc = node.axis == 0 ? p.x : p.y;
    const double diff = qc - pc;
    const int near_side = diff < 0.0 ? node.left : node.right;
    const int far_side = diff < 0.0 ? node.right : node.left;
    self(self, near_side);
    // The far side may still hold an equal-distance, lower-index point,
    // so only prune on a strict distance excess.
    if (static_cast<int>(best.size()) < m || diff * diff <= best.top().d2) {
      self(self, far_side);
    }
  };
  visit(visit, root_);

  std::vector<HeapEntry> out;
  out.reserve(best.size());
  while (!best.empty()) {
    out.push_back(best.top());
    best.pop();
  }
  std::vector<int> result(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) result[out.size() - 1 - i] = out[i].index;
  return result;
}

std::vector<int> KdTree2D::within(const Point2& q, double r) const {
  if (r < 0.0) throw std::invalid_argument("negative radius");
  const double r2 = r * r;
  std::vector<int> result;
  auto visit = [&](auto&& self, int node_id) -> void {
    if (node_id < 0) return;
    const Node& node = nodes_[node_id];
    const Point2& p = points_[node.point];
    if (squared_distance(q, p) <= r2) result.push_back(node.point);
    const double qc = node.axis == 0 ? q.x : q.y;
    const double pc = node.axis == 0 ? p.x : p.y;
    const double diff = qc - pc;
    const int near_side = diff < 0.0 ? node.left : node.right;
    const int far_side = diff < 0.0 ? node.right : node.left;
    self(self, near_side);
    if (diff * diff <= r2) self(self, far_side);
  };
  visit(visit, root_);
  std::sort(result.begin(), result.end());
  return result;
}

std::vector<int> knn_spatial(const UCSGraph& g, const KdTree2D& index, int center, int m) {
  if (center < 0 || center >= g.n()) throw std::invalid_argument("vertex out of range");
  if (m < 1 || m > g.n()) throw std::invalid_argument("knn count out of range");
  return index.nearest(g.coords()[center], m);
}

std::vector<int> knn_spatial(const UCSGraph& g, int center, int m) {
  KdTree2D index(g.coords());
  return knn_spatial(g, index, center, m);
}

std::vector<int> euclidean_ball(const UCSGraph& g, const KdTree2D& index, int center, double r) {
  if (center < 0 || center >= g.n()) throw std::invalid_argument("vertex out of range");
  if (r < 0.0) throw std::invalid_argument("negative radius");
  return index.within(g.coords()[center], r);
}

std::vector<int> euclidean_ball(const UCSGraph& g, int center, double r) {
  KdTree2D index(g.coords());
  return euclidean_ball(g, index, center, r);
}

}  // namespace vorder
