#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <vector>

#include "vorder/geometry.hpp"
#include "vorder/graph.hpp"

namespace vorder {

struct TsneParams {
  double perplexity = 30.0;
  int iterations = 1000;
  double learning_rate = 200.0;
  double early_exaggeration = 12.0;
  int exaggeration_iterations = 250;
  double initial_momentum = 0.5;
  double final_momentum = 0.8;
  int momentum_switch = 250;
  std::uint64_t seed = 0;
};

struct PerplexityFit {
  std::vector<double> probabilities;  // over the other points, same order as input
  double beta = 1.0;                  // Gaussian precision 1/(2 sigma^2)
  double achieved_perplexity = 0.0;   // 2^H of the fitted distribution
  bool converged = false;
};

// Bisection on the Gaussian precision so the Shannon-entropy perplexity
// 2^H(P_i) matches `perplexity` within 1e-4 (at most 64 steps).
PerplexityFit fit_conditional_distribution(std::span<const double> squared_distances,
                                           double perplexity);

// Row i holds p_{j|i} (Gaussian kernel over pairwise distances, per-row
// bandwidth from the perplexity search); zero diagonal, rows sum to 1.
// Throws TsneError if any row's search fails to converge.
Eigen::MatrixXd tsne_conditional_probabilities(std::span<const Point2> points, double perplexity,
                                               std::vector<double>* achieved_perplexity = nullptr);

// Symmetrized joint probabilities p_ij = (p_{j|i} + p_{i|j}) / (2n).
Eigen::MatrixXd tsne_joint_probabilities(const Eigen::MatrixXd& conditional);

struct TsneLayout {
  std::vector<double> coordinate;  // final 1-D embedding
  double kl_initial = 0.0;         // KL(P||Q) at the initial layout
  double kl_final = 0.0;
  std::vector<double> kl_trace;    // KL after each of the final iterations
};

// Minimizes KL(P||Q) with a Student-t Q in one dimension. Runs early
// exaggeration then momentum gradient descent with per-coordinate adaptive
// gains; the step size is held at or below the explicit-descent stability
// bound n/(4*exaggeration) and single moves are clipped to +-4. The last 100
// iterations use plain descent with KL backtracking so the divergence is
// non-increasing there. Initial coordinates are seeded Gaussian, sigma 1e-4.
TsneLayout tsne_layout_1d(const Eigen::MatrixXd& joint, const TsneParams& params);

struct TsneOrderResult {
  Ordering ordering;
  Embedding1D embedding;
  std::vector<double> achieved_perplexity;
  double kl_initial = 0.0;
  double kl_final = 0.0;
  std::vector<double> kl_trace;
};

// 1-D t-SNE over the projected vertex coordinates, ranked by ascending
// embedding value. Coincident-point degeneracies are retried once with a
// 1e-9 m jitter before erroring.
TsneOrderResult tsne_order(const UCSGraph& g, const TsneParams& params);

}  // namespace vorder
