#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "oblique/mdp.hpp"
#include "oblique/rng.hpp"
#include "oblique/types.hpp"

namespace oblique {

/// Everything needed to score a weight vector θ over a set of evaluation
/// states: the target values, state weights, and the one-step Bellman data
/// (expected reward and expected next-state features under the target policy).
/// For tabular domains the evaluation states are all states and the data is
/// exact; for continuous domains it is a fixed sampled grid.
struct EvaluationContext {
  Vector v_true;     // V(s)
  Vector weights;    // ξ(s), sums to 1
  Matrix phi;        // rows φ(s)ᵀ
  Matrix next_phi;   // rows E[φ(s′)|s]ᵀ under the target policy
  Vector reward;     // E[r|s] under the target policy
  double gamma = 0.0;

  // MSPBE(θ) = (b + Aθ)ᵀ G⁺ (b + Aθ) with G = ΦᵀΞΦ, b = ΦᵀΞR, A = ΦᵀΞ(γΦ′ − Φ).
  Matrix gram_pinv;
  Matrix bellman_a;
  Vector bellman_b;

  std::size_t dim() const { return static_cast<std::size_t>(phi.cols()); }
  std::size_t n_states() const { return static_cast<std::size_t>(phi.rows()); }
};

/// Validates the fields and precomputes the MSPBE matrices. The Gram matrix
/// is pseudo-inverted, so rank-deficient (overcomplete) features are allowed.
EvaluationContext make_evaluation_context(Vector v_true, Vector weights, Matrix phi,
                                          Matrix next_phi, Vector reward, double gamma);

/// Exact context for a tabular chain: V = true_value(chain), Φ′ = P^πΦ, R = R^π.
EvaluationContext make_tabular_context(const InducedChain& chain, const StateDistribution& xi,
                                       const FeatureMap& features);

/// Σ_s ξ(s)(φ(s)ᵀθ − V(s))².
double mse(const Vector& theta, const EvaluationContext& ctx);

/// ‖Φθ − Π(R + γΦ′θ)‖²_ξ with Π the ξ-weighted projection onto span(Φ).
double mspbe(const Vector& theta, const EvaluationContext& ctx);

/// √x; rejects negative input. Infinite input maps to infinity.
double rms(double x);

struct MonteCarloEstimate {
  Vector value;
  Vector std_error;
};

/// One simulated transition under the evaluated policy.
template <typename S>
struct Outcome {
  S next;
  double reward = 0.0;
  bool done = false;
};

template <typename S>
using Simulator = std::function<Outcome<S>(const S&, Rng&)>;

/// Smallest H with γ^H·R_max/(1−γ) < tolerance.
std::size_t default_horizon(double gamma, double r_max, double tolerance = 1e-3);

/// Mean over n_rollouts of the truncated discounted return Σ_{t<horizon} γ^t r_t
/// from each evaluation state, with per-state standard errors. Each state uses
/// its own random stream derived from (seed, index), so results do not depend
/// on evaluation order.
template <typename S>
MonteCarloEstimate monte_carlo_value(const Simulator<S>& simulate, std::span<const S> eval_states,
                                     std::size_t n_rollouts, std::size_t horizon, double gamma,
                                     std::uint64_t seed) {
  if (n_rollouts == 0) throw std::invalid_argument("monte_carlo_value: n_rollouts must be >= 1");
  const auto n = static_cast<Eigen::Index>(eval_states.size());
  MonteCarloEstimate out{Vector::Zero(n), Vector::Zero(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t k = 0; k < n_rollouts; ++k) {
      S state = eval_states[static_cast<std::size_t>(i)];
      double ret = 0.0;
      double discount = 1.0;
      for (std::size_t t = 0; t < horizon; ++t) {
        Outcome<S> o = simulate(state, rng);
        ret += discount * o.reward;
        discount *= gamma;
        if (o.done) break;
        state = std::move(o.next);
      }
      sum += ret;
      sum_sq += ret * ret;
    }
    const double mean = sum / static_cast<double>(n_rollouts);
    out.value[i] = mean;
    if (n_rollouts > 1) {
      const double var = std::max(0.0, (sum_sq - static_cast<double>(n_rollouts) * mean * mean) /
                                           static_cast<double>(n_rollouts - 1));
      out.std_error[i] = std::sqrt(var / static_cast<double>(n_rollouts));
    }
  }
  return out;
}

/// Simulator for a tabular MDP following `policy` (one draw of a then s′).
/// Holds its own copies of the MDP and policy.
Simulator<std::size_t> tabular_simulator(const TabularMDP& mdp, const Policy& policy);

}  // namespace oblique
