#pragma once

#include <Eigen/SparseCore>
#include <cstdint>

namespace vorder {

struct FiedlerOptions {
  enum class Engine { kAuto, kDense, kIterative };

  Engine engine = Engine::kAuto;
  int dense_threshold = 500;  // kAuto uses the dense path up to this size
  int krylov_dim = 80;        // Lanczos steps per restart
  int max_restarts = 60;
  double residual_factor = 1e-7;  // accept when ||Lv - lambda*v|| <= factor * ||L||_inf
  std::uint64_t start_seed = 0x51ED3A9BULL;  // fixed start vector, keeps runs reproducible
};

struct FiedlerPair {
  Eigen::VectorXd vector;  // unit norm, orthogonal to the constant vector
  double lambda = 0.0;
  double residual = 0.0;   // ||L v - lambda v||_2
};

// Eigenpair for the smallest non-zero eigenvalue of a symmetric PSD matrix
// whose kernel is spanned by the constant vector (a connected-graph
// Laplacian). The iterative engine runs shift-invert Lanczos on
// (L + eps*I)^-1 with the constant direction deflated at every step; eps
// shifts eigenvalues uniformly and leaves eigenvectors untouched.
//
// Throws EigensolverError when the residual budget is exhausted or the
// second eigenvalue is numerically zero (disconnected input).
FiedlerPair fiedler_pair(const Eigen::SparseMatrix<double>& laplacian,
                         const FiedlerOptions& options = {});

}  // namespace vorder
