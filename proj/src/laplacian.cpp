#include "vorder/laplacian.hpp"

#include <cassert>
#include <cmath>
#include <vector>

namespace vorder {

Eigen::SparseMatrix<double> build_laplacian(const UCSGraph& g) {
  const int n = g.n();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(2 * g.edge_count() + n);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (const Neighbor& nb : g.neighbors(i)) {
      assert(nb.length_m > 0.0);
      const double w = 1.0 / nb.length_m;
      triplets.emplace_back(i, nb.index, -w);
      diag += w;
    }
    triplets.emplace_back(i, i, diag);
  }
  Eigen::SparseMatrix<double> laplacian(n, n);
  laplacian.setFromTriplets(triplets.begin(), triplets.end());
  return laplacian;
}

double laplacian_inf_norm(const Eigen::SparseMatrix<double>& laplacian) {
  double norm = 0.0;
  std::vector<double> row_abs_sum(laplacian.rows(), 0.0);
  for (int k = 0; k < laplacian.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(laplacian, k); it; ++it) {
      row_abs_sum[it.row()] += std::abs(it.value());
    }
  }
  for (double s : row_abs_sum) norm = std::max(norm, s);
  return norm;
}

}  // namespace vorder
