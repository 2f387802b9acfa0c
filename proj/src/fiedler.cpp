#include "vorder/fiedler.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <vector>

#include "vorder/error.hpp"
#include "vorder/laplacian.hpp"
#include "vorder/rng.hpp"

namespace vorder {

namespace {

void project_out_constant(Eigen::VectorXd& x) {
  x.array() -= x.mean();
}

FiedlerPair finish(const Eigen::SparseMatrix<double>& laplacian, Eigen::VectorXd v) {
  project_out_constant(v);
  const double norm = v.norm();
  if (norm <= 0.0) throw EigensolverError("fiedler: degenerate eigenvector");
  v /= norm;
  FiedlerPair pair;
  pair.lambda = v.dot(laplacian * v);
  pair.residual = (laplacian * v - pair.lambda * v).norm();
  pair.vector = std::move(v);
  return pair;
}

FiedlerPair dense_pair(const Eigen::SparseMatrix<double>& laplacian) {
  const Eigen::MatrixXd dense(laplacian);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
  if (solver.info() != Eigen::Success) {
    throw EigensolverError("fiedler: dense eigendecomposition failed");
  }
  // eigenvalues ascending; index 0 is the constant kernel vector
  return finish(laplacian, solver.eigenvectors().col(1));
}

FiedlerPair iterative_pair(const Eigen::SparseMatrix<double>& laplacian,
                           const FiedlerOptions& options, double inf_norm) {
  const int n = static_cast<int>(laplacian.rows());
  const double eps = 1e-8 * std::max(inf_norm, 1e-300);

  Eigen::SparseMatrix<double> shifted = laplacian;
  Eigen::SparseMatrix<double> identity(n, n);
  identity.setIdentity();
  shifted += eps * identity;

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> factor(shifted);
  if (factor.info() != Eigen::Success) {
    throw EigensolverError("fiedler: sparse factorization failed");
  }

  const double tol = options.residual_factor * inf_norm;
  DetRng rng(options.start_seed);
  Eigen::VectorXd start(n);
  for (int i = 0; i < n; ++i) start[i] = rng.normal();

  const int krylov = std::min(options.krylov_dim, n - 1);
  Eigen::VectorXd best;
  for (int restart = 0; restart < options.max_restarts; ++restart) {
    project_out_constant(start);
    double norm = start.norm();
    if (norm <= 0.0) {
      for (int i = 0; i < n; ++i) start[i] = rng.normal();
      project_out_constant(start);
      norm = start.norm();
    }

    // Lanczos on B = P (L + eps I)^-1 P with full reorthogonalization.
    std::vector<Eigen::VectorXd> basis;
    basis.reserve(krylov + 1);
    basis.push_back(start / norm);
    std::vector<double> alpha, beta;
    for (int j = 0; j < krylov; ++j) {
      Eigen::VectorXd w = factor.solve(basis[j]);
      project_out_constant(w);
      const double a = basis[j].dot(w);
      alpha.push_back(a);
      w -= a * basis[j];
      if (j > 0) w -= beta[j - 1] * basis[j - 1];
      for (int pass = 0; pass < 2; ++pass) {
        for (const Eigen::VectorXd& q : basis) w -= q.dot(w) * q;
      }
      const double b = w.norm();
      if (b < 1e-14) break;  // invariant subspace reached
      beta.push_back(b);
      basis.push_back(w / b);
    }

    const int k = static_cast<int>(alpha.size());
    Eigen::MatrixXd tridiag = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) {
      tridiag(i, i) = alpha[i];
      if (i + 1 < k) tridiag(i, i + 1) = tridiag(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(tridiag);
    if (ritz.info() != Eigen::Success) {
      throw EigensolverError("fiedler: Ritz decomposition failed");
    }
    // largest Ritz value of the inverted operator <-> smallest nonzero of L
    const Eigen::VectorXd y = ritz.eigenvectors().col(k - 1);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < k; ++i) u += y[i] * basis[i];
    project_out_constant(u);
    u.normalize();

    const double lambda = u.dot(laplacian * u);
    const double residual = (laplacian * u - lambda * u).norm();
    best = u;
    if (residual <= tol) return finish(laplacian, best);
    start = u;
  }
  throw EigensolverError("fiedler: eigensolver did not converge within restart budget");
}

}  // namespace

FiedlerPair fiedler_pair(const Eigen::SparseMatrix<double>& laplacian,
                         const FiedlerOptions& options) {
  const int n = static_cast<int>(laplacian.rows());
  if (n < 2) throw EigensolverError("fiedler: need at least two vertices");

  const double inf_norm = laplacian_inf_norm(laplacian);
  const bool dense = options.engine == FiedlerOptions::Engine::kDense ||
                     (options.engine == FiedlerOptions::Engine::kAuto &&
                      n <= options.dense_threshold);

  FiedlerPair pair = dense ? dense_pair(laplacian) : iterative_pair(laplacian, options, inf_norm);

  const double tol = options.residual_factor * std::max(inf_norm, 1e-300);
  if (pair.residual > tol) {
    throw EigensolverError("fiedler: residual above tolerance");
  }
  if (pair.lambda <= 1e-12 * std::max(inf_norm, 1e-300)) {
    throw EigensolverError("fiedler: smallest non-zero eigenvalue is numerically zero (disconnected input?)");
  }
  return pair;
}

}  // namespace vorder
