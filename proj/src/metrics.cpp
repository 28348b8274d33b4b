#include "oblique/metrics.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <utility>

#include "oblique/errors.hpp"

namespace oblique {

EvaluationContext make_evaluation_context(Vector v_true, Vector weights, Matrix phi,
                                          Matrix next_phi, Vector reward, double gamma) {
  const Eigen::Index n = phi.rows();
  if (n == 0 || phi.cols() == 0) throw ShapeError("EvaluationContext: empty feature matrix");
  if (v_true.size() != n || weights.size() != n || reward.size() != n ||
      next_phi.rows() != n || next_phi.cols() != phi.cols()) {
    throw ShapeError("EvaluationContext: inconsistent evaluation-state counts");
  }
  if (!v_true.allFinite() || !weights.allFinite() || !phi.allFinite() || !next_phi.allFinite() ||
      !reward.allFinite()) {
    throw std::invalid_argument("EvaluationContext: entries must be finite");
  }
  if ((weights.array() < 0.0).any() || std::abs(weights.sum() - 1.0) > 1e-10) {
    throw std::invalid_argument("EvaluationContext: weights must be a probability vector");
  }
  EvaluationContext ctx;
  const Matrix weighted_t = phi.transpose() * weights.asDiagonal();  // ΦᵀΞ
  const Matrix gram = weighted_t * phi;
  ctx.gram_pinv = Eigen::CompleteOrthogonalDecomposition<Matrix>(gram).pseudoInverse();
  ctx.bellman_a = weighted_t * (gamma * next_phi - phi);
  ctx.bellman_b = weighted_t * reward;
  ctx.v_true = std::move(v_true);
  ctx.weights = std::move(weights);
  ctx.phi = std::move(phi);
  ctx.next_phi = std::move(next_phi);
  ctx.reward = std::move(reward);
  ctx.gamma = gamma;
  return ctx;
}

EvaluationContext make_tabular_context(const InducedChain& chain, const StateDistribution& xi,
                                       const FeatureMap& features) {
  if (chain.n_states() != xi.size() || features.n_states() != xi.size()) {
    throw ShapeError("make_tabular_context: chain, distribution and features disagree on |S|");
  }
  return make_evaluation_context(true_value(chain), xi.weights(), features.matrix(),
                                 chain.p_pi * features.matrix(), chain.r_pi, chain.gamma);
}

double mse(const Vector& theta, const EvaluationContext& ctx) {
  if (static_cast<std::size_t>(theta.size()) != ctx.dim()) throw ShapeError("mse: theta length mismatch");
  return ctx.weights.dot((ctx.phi * theta - ctx.v_true).cwiseAbs2());
}

double mspbe(const Vector& theta, const EvaluationContext& ctx) {
  if (static_cast<std::size_t>(theta.size()) != ctx.dim()) throw ShapeError("mspbe: theta length mismatch");
  const Vector g = ctx.bellman_b + ctx.bellman_a * theta;
  // The quadratic form is nonnegative in exact arithmetic; clamp rounding.
  return std::max(0.0, g.dot(ctx.gram_pinv * g));
}

double rms(double x) {
  if (std::isnan(x)) return x;
  if (x < 0.0) throw std::invalid_argument("rms: negative input " + std::to_string(x));
  return std::sqrt(x);
}

std::size_t default_horizon(double gamma, double r_max, double tolerance) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("default_horizon: gamma in [0,1)");
  if (r_max <= 0.0 || gamma == 0.0) return 1;
  std::size_t h = 0;
  double tail = r_max / (1.0 - gamma);
  while (!(tail < tolerance)) {
    tail *= gamma;
    ++h;
  }
  return std::max<std::size_t>(h, 1);
}

Simulator<std::size_t> tabular_simulator(const TabularMDP& mdp, const Policy& policy) {
  if (policy.n_states() != mdp.n_states() || policy.n_actions() != mdp.n_actions()) {
    throw ShapeError("tabular_simulator: policy shape does not match the MDP");
  }
  // Own copies so the simulator may outlive its arguments.
  auto model = std::make_shared<const std::pair<TabularMDP, Policy>>(mdp, policy);
  return [model](const std::size_t& s, Rng& rng) {
    const auto& [m, pi] = *model;
    const auto row = static_cast<Eigen::Index>(s);
    const std::size_t a = rng.categorical(pi.probs().row(row), m.n_actions());
    Outcome<std::size_t> o;
    o.reward = m.reward()(row, static_cast<Eigen::Index>(a));
    o.next = rng.categorical(m.kernel(a).row(row), m.n_states());
    return o;
  };
}

}  // namespace oblique
