#include "vorder/tsne.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vorder/error.hpp"
#include "vorder/format.hpp"
#include "vorder/orderings.hpp"
#include "vorder/rng.hpp"

namespace vorder {

namespace {

// Entropy (nats) and probabilities of the Gaussian row at a given precision.
// Distances come pre-shifted by their minimum so exp() never underflows for
// the nearest point; the entropy is shift-invariant, only beta*E corrects it.
struct RowEval {
  double entropy;
  double sum;
};

RowEval eval_row(std::span<const double> shifted, double beta, std::span<double> out) {
  double sum = 0.0;
  double weighted = 0.0;
  for (std::size_t j = 0; j < shifted.size(); ++j) {
    const double w = std::exp(-beta * shifted[j]);
    out[j] = w;
    sum += w;
    weighted += shifted[j] * w;
  }
  const double entropy = std::log(sum) + beta * weighted / sum;
  return {entropy, sum};
}

}  // namespace

PerplexityFit fit_conditional_distribution(std::span<const double> squared_distances,
                                           double perplexity) {
  PerplexityFit fit;
  const std::size_t k = squared_distances.size();
  if (k == 0) throw TsneError("perplexity search: no other points");
  if (!(perplexity > 0.0)) throw TsneError("perplexity search: target must be positive");

  const double dmin = *std::min_element(squared_distances.begin(), squared_distances.end());
  std::vector<double> shifted(k);
  for (std::size_t j = 0; j < k; ++j) shifted[j] = squared_distances[j] - dmin;

  const double log_target = std::log(perplexity);
  double beta = 1.0;
  double beta_lo = 0.0;
  double beta_hi = std::numeric_limits<double>::infinity();

  fit.probabilities.assign(k, 0.0);
  RowEval ev{};
  for (int step = 0; step < 64; ++step) {
    ev = eval_row(shifted, beta, fit.probabilities);
    fit.achieved_perplexity = std::exp(ev.entropy);
    if (std::abs(fit.achieved_perplexity - perplexity) <= 1e-4) {
      fit.converged = true;
      break;
    }
    if (ev.entropy > log_target) {
      // too diffuse: sharpen the kernel
      beta_lo = beta;
      beta = std::isinf(beta_hi) ? beta * 2.0 : 0.5 * (beta_lo + beta_hi);
    } else {
      beta_hi = beta;
      beta = 0.5 * (beta_lo + beta_hi);
    }
  }
  if (!fit.converged) {
    ev = eval_row(shifted, beta, fit.probabilities);
    fit.achieved_perplexity = std::exp(ev.entropy);
  }
  fit.beta = beta;
  for (std::size_t j = 0; j < k; ++j) fit.probabilities[j] /= ev.sum;
  return fit;
}

Eigen::MatrixXd tsne_conditional_probabilities(std::span<const Point2> points, double perplexity,
                                               std::vector<double>* achieved_perplexity) {
  const int n = static_cast<int>(points.size());
  if (n < 2) throw TsneError("conditional probabilities need at least two points");
  if (!(perplexity > 1.0) || !(perplexity < static_cast<double>(n)))
    throw TsneError("perplexity must lie in (1, n); got " + format_double(perplexity) +
                    " for n=" + format_int(n));

  Eigen::MatrixXd cond = Eigen::MatrixXd::Zero(n, n);
  if (achieved_perplexity) achieved_perplexity->assign(static_cast<std::size_t>(n), 0.0);

  std::vector<double> d2(static_cast<std::size_t>(n) - 1);
  for (int i = 0; i < n; ++i) {
    std::size_t w = 0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      d2[w++] = squared_distance(points[static_cast<std::size_t>(i)],
                                 points[static_cast<std::size_t>(j)]);
    }
    PerplexityFit fit = fit_conditional_distribution(d2, perplexity);
    if (!fit.converged)
      throw TsneError("perplexity search failed to converge for point " + format_int(i) +
                      " (achieved " + format_double(fit.achieved_perplexity) + ", target " +
                      format_double(perplexity) + ")");
    if (achieved_perplexity) (*achieved_perplexity)[static_cast<std::size_t>(i)] = fit.achieved_perplexity;
    w = 0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      cond(i, j) = fit.probabilities[w++];
    }
  }
  return cond;
}

Eigen::MatrixXd tsne_joint_probabilities(const Eigen::MatrixXd& conditional) {
  const auto n = conditional.rows();
  if (n != conditional.cols() || n < 2) throw TsneError("conditional matrix must be square");
  Eigen::MatrixXd joint = (conditional + conditional.transpose()) / (2.0 * static_cast<double>(n));
  return joint;
}

namespace {

// One O(n^2) sweep: Student-t normalizer Z, the gradient, and the cross term
// sum_{i!=j} P_ij * ln(1/(1+d^2)) needed for the KL divergence. The KL uses
// the identity KL = sum P ln P - sum P ln num + ln Z (P sums to one).
struct SweepResult {
  double z = 0.0;
  double p_log_num = 0.0;  // sum over ordered pairs of P_ij * ln(num_ij)
};

SweepResult tsne_sweep(const Eigen::MatrixXd& joint, std::span<const double> y, double exaggeration,
                       std::span<double> grad) {
  const int n = static_cast<int>(y.size());
  std::fill(grad.begin(), grad.end(), 0.0);
  double z = 0.0;
  // column-major friendly pair loop (i < j within column j)
  for (int j = 1; j < n; ++j) {
    const double yj = y[static_cast<std::size_t>(j)];
    for (int i = 0; i < j; ++i) {
      const double diff = y[static_cast<std::size_t>(i)] - yj;
      z += 1.0 / (1.0 + diff * diff);
    }
  }
  z *= 2.0;
  double p_log_num = 0.0;
  for (int j = 1; j < n; ++j) {
    const double yj = y[static_cast<std::size_t>(j)];
    for (int i = 0; i < j; ++i) {
      const double diff = y[static_cast<std::size_t>(i)] - yj;
      const double num = 1.0 / (1.0 + diff * diff);
      const double p = joint(i, j);
      if (p > 0.0) p_log_num += 2.0 * p * std::log(num);
      const double q = num / z;
      const double f = 4.0 * (exaggeration * p - q) * num * diff;
      grad[static_cast<std::size_t>(i)] += f;
      grad[static_cast<std::size_t>(j)] -= f;
    }
  }
  return {z, p_log_num};
}

double kl_cross_terms(const Eigen::MatrixXd& joint, std::span<const double> y, double* z_out) {
  const int n = static_cast<int>(y.size());
  double z = 0.0;
  double p_log_num = 0.0;
  for (int j = 1; j < n; ++j) {
    const double yj = y[static_cast<std::size_t>(j)];
    for (int i = 0; i < j; ++i) {
      const double diff = y[static_cast<std::size_t>(i)] - yj;
      const double num = 1.0 / (1.0 + diff * diff);
      z += num;
      const double p = joint(i, j);
      if (p > 0.0) p_log_num += 2.0 * p * std::log(num);
    }
  }
  z *= 2.0;
  if (z_out) *z_out = z;
  return p_log_num;
}

double entropy_term(const Eigen::MatrixXd& joint) {
  double p_log_p = 0.0;
  const auto n = joint.rows();
  for (Eigen::Index j = 1; j < n; ++j)
    for (Eigen::Index i = 0; i < j; ++i) {
      const double p = joint(i, j);
      if (p > 0.0) p_log_p += 2.0 * p * std::log(p);
    }
  return p_log_p;
}

}  // namespace

TsneLayout tsne_layout_1d(const Eigen::MatrixXd& joint, const TsneParams& params) {
  const int n = static_cast<int>(joint.rows());
  if (joint.cols() != n || n < 2) throw TsneError("joint matrix must be square with n >= 2");
  if (params.iterations < 1) throw TsneError("iterations must be >= 1");
  if (!(params.learning_rate > 0.0)) throw TsneError("learning rate must be positive");

  TsneLayout out;
  std::vector<double> y(static_cast<std::size_t>(n));
  DetRng rng(params.seed);
  for (auto& v : y) v = 1e-4 * rng.normal();

  const double p_log_p = entropy_term(joint);
  const auto kl_at = [&](std::span<const double> coords) {
    double z = 0.0;
    const double p_log_num = kl_cross_terms(joint, coords, &z);
    return p_log_p - p_log_num + std::log(z);
  };
  out.kl_initial = kl_at(y);

  std::vector<double> velocity(static_cast<std::size_t>(n), 0.0);
  std::vector<double> gains(static_cast<std::size_t>(n), 1.0);
  std::vector<double> grad(static_cast<std::size_t>(n), 0.0);
  std::vector<double> trial(static_cast<std::size_t>(n), 0.0);

  // Explicit-descent stability ceiling: the attraction stiffness is about
  // 4*exaggeration/n (each row of the joint matrix sums to 1/n), so steps
  // beyond ~n/(4*exaggeration) oscillate instead of descending and shatter
  // the layout. The configured rate applies whenever it is already safe.
  const auto stable_rate = [&](double exaggeration) {
    return std::min(params.learning_rate, static_cast<double>(n) / (4.0 * exaggeration));
  };
  constexpr double kMaxMove = 4.0;  // hard cap per coordinate per iteration

  // Plain-descent tail: long enough to certify a non-increasing KL, started
  // only after exaggeration ends so the objective does not switch under it.
  const int tail_start = std::max(params.iterations - 100, params.exaggeration_iterations);
  double kl_current = std::numeric_limits<double>::quiet_NaN();

  for (int t = 1; t <= params.iterations; ++t) {
    const bool exaggerating = t <= params.exaggeration_iterations;
    const double exaggeration = exaggerating ? params.early_exaggeration : 1.0;

    if (t > tail_start) {
      const SweepResult sweep = tsne_sweep(joint, y, 1.0, grad);
      if (std::isnan(kl_current)) kl_current = p_log_p - sweep.p_log_num + std::log(sweep.z);
      double gmax = 0.0;
      for (double gv : grad) gmax = std::max(gmax, std::abs(gv));
      if (!std::isfinite(gmax))
        throw TsneError("non-finite gradient at iteration " + format_int(t));
      if (gmax > 0.0) {
        double step = stable_rate(1.0);
        bool accepted = false;
        for (int half = 0; half < 40 && !accepted; ++half) {
          for (std::size_t i = 0; i < y.size(); ++i) trial[i] = y[i] - step * grad[i];
          const double kl_trial = kl_at(trial);
          if (kl_trial <= kl_current + 1e-9) {
            y.swap(trial);
            kl_current = kl_trial;
            accepted = true;
          } else {
            step *= 0.5;
          }
        }
      }
      out.kl_trace.push_back(kl_current);
      continue;
    }

    tsne_sweep(joint, y, exaggeration, grad);
    double gsum = 0.0;
    const double momentum = t <= params.momentum_switch ? params.initial_momentum
                                                        : params.final_momentum;
    const double rate = stable_rate(exaggeration);
    for (std::size_t i = 0; i < y.size(); ++i) {
      // adaptive per-coordinate gain: grow while descending consistently
      // (gradient opposes the velocity), shrink on oscillation
      const bool oscillating = (grad[i] > 0.0) == (velocity[i] > 0.0);
      gains[i] = oscillating ? gains[i] * 0.8 : gains[i] + 0.2;
      if (gains[i] < 0.01) gains[i] = 0.01;
      velocity[i] = momentum * velocity[i] - rate * gains[i] * grad[i];
      if (velocity[i] > kMaxMove) velocity[i] = kMaxMove;
      else if (velocity[i] < -kMaxMove) velocity[i] = -kMaxMove;
      y[i] += velocity[i];
      gsum += std::abs(grad[i]) + std::abs(y[i]);
    }
    if (!std::isfinite(gsum)) throw TsneError("non-finite gradient at iteration " + format_int(t));
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(n);
    for (auto& v : y) v -= mean;
  }

  out.kl_final = std::isnan(kl_current) ? kl_at(y) : kl_current;
  out.coordinate = std::move(y);
  return out;
}

TsneOrderResult tsne_order(const UCSGraph& g, const TsneParams& params) {
  const int n = g.n();
  if (n < 4) throw TsneError("t-SNE ordering needs at least 4 vertices");
  if (!(params.perplexity > 1.0) || !(params.perplexity < static_cast<double>(n)))
    throw TsneError("perplexity must lie in (1, n); got " + format_double(params.perplexity) +
                    " for n=" + format_int(n));

  std::vector<Point2> points(g.coords().begin(), g.coords().end());
  TsneOrderResult result;
  Eigen::MatrixXd cond;
  try {
    cond = tsne_conditional_probabilities(points, params.perplexity, &result.achieved_perplexity);
  } catch (const TsneError&) {
    // Coincident vertices can make a row's perplexity unreachable: jitter by
    // a nanometer (deterministically) and retry once before giving up.
    DetRng jitter(params.seed ^ 0x7f4a7c15ULL);
    for (auto& p : points) {
      p.x += 1e-9 * jitter.normal();
      p.y += 1e-9 * jitter.normal();
    }
    cond = tsne_conditional_probabilities(points, params.perplexity, &result.achieved_perplexity);
  }
  const Eigen::MatrixXd joint = tsne_joint_probabilities(cond);
  TsneLayout layout = tsne_layout_1d(joint, params);

  result.kl_initial = layout.kl_initial;
  result.kl_final = layout.kl_final;
  result.kl_trace = std::move(layout.kl_trace);
  result.embedding.value = layout.coordinate;
  result.ordering.rank_of = ranks_from_values(layout.coordinate);
  result.ordering.method = "tsne";
  result.ordering.params = {
      {"perplexity", format_double(params.perplexity)},
      {"iterations", format_int(params.iterations)},
      {"learning_rate", format_double(params.learning_rate)},
      {"early_exaggeration", format_double(params.early_exaggeration)},
      {"exaggeration_iterations", format_int(params.exaggeration_iterations)},
      {"seed", format_int(params.seed)},
  };
  return result;
}

}  // namespace vorder
