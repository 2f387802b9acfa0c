#pragma once

#include <Eigen/SparseCore>

#include "vorder/graph.hpp"

namespace vorder {

// Length-weighted graph Laplacian:
//   L_ij = -1/l_ij for adjacent i != j, 0 otherwise, L_ii = sum_j |L_ij|.
// Symmetric positive semi-definite with zero row sums; for a connected graph
// the zero eigenvalue is simple.
Eigen::SparseMatrix<double> build_laplacian(const UCSGraph& g);

// Max absolute row sum; for this Laplacian it equals 2 * max diagonal entry.
double laplacian_inf_norm(const Eigen::SparseMatrix<double>& laplacian);

}  // namespace vorder
