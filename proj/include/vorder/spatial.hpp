#pragma once

#include <span>
#include <vector>

#include "vorder/geometry.hpp"
#include "vorder/graph.hpp"

namespace vorder {

// Static 2-d tree over a fixed point set. Median splits on alternating axes;
// ties everywhere break by ascending point index so queries are deterministic
// and agree with an exhaustive scan ordered by (distance, index).
class KdTree2D {
 public:
  explicit KdTree2D(std::span<const Point2> points);

  // The m points closest to q, sorted by (distance, index) ascending.
  std::vector<int> nearest(const Point2& q, int m) const;

  // Indices with ||p - q|| <= r, sorted ascending.
  std::vector<int> within(const Point2& q, double r) const;

  int size() const { return static_cast<int>(points_.size()); }

 private:
  struct Node {
    int point = -1;   // index into points_
    int left = -1;    // node indices
    int right = -1;
    int axis = 0;
  };

  int build(std::vector<int>& idx, int lo, int hi, int depth);

  std::vector<Point2> points_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

// The m vertices closest to `center` in planar distance, center included
// (its own distance is 0). Ties break by ascending vertex index.
std::vector<int> knn_spatial(const UCSGraph& g, const KdTree2D& index, int center, int m);
std::vector<int> knn_spatial(const UCSGraph& g, int center, int m);

// {v : ||coords(v) - coords(center)|| <= r}
std::vector<int> euclidean_ball(const UCSGraph& g, const KdTree2D& index, int center, double r);
std::vector<int> euclidean_ball(const UCSGraph& g, int center, double r);

}  // namespace vorder
