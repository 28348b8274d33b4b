#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include "oblique/rng.hpp"
#include "oblique/types.hpp"

namespace oblique {

/// Finite MDP: per-action transition kernels, reward table R(s, a), discount.
class TabularMDP {
 public:
  /// `transition[a]` is the |S|×|S| kernel of action a; `reward` is |S|×|A|.
  /// Throws ShapeError on inconsistent sizes and std::invalid_argument on
  /// non-stochastic rows, non-finite rewards, or gamma outside [0, 1).
  TabularMDP(std::vector<Matrix> transition, Matrix reward, double gamma);

  std::size_t n_states() const { return static_cast<std::size_t>(reward_.rows()); }
  std::size_t n_actions() const { return static_cast<std::size_t>(reward_.cols()); }
  double gamma() const { return gamma_; }
  const Matrix& kernel(std::size_t action) const { return transition_[action]; }
  const Matrix& reward() const { return reward_; }
  double r_max() const { return reward_.cwiseAbs().maxCoeff(); }

 private:
  std::vector<Matrix> transition_;
  Matrix reward_;
  double gamma_;
};

/// Stationary stochastic policy π(a|s), stored |S|×|A|.
class Policy {
 public:
  explicit Policy(Matrix probs);

  static Policy uniform(std::size_t n_states, std::size_t n_actions);

  std::size_t n_states() const { return static_cast<std::size_t>(probs_.rows()); }
  std::size_t n_actions() const { return static_cast<std::size_t>(probs_.cols()); }
  double operator()(std::size_t s, std::size_t a) const { return probs_(s, a); }
  const Matrix& probs() const { return probs_; }

 private:
  Matrix probs_;
};

/// Markov chain induced by a policy; L^π = I − γP^π.
struct InducedChain {
  Matrix p_pi;
  Vector r_pi;
  double gamma = 0.0;

  std::size_t n_states() const { return static_cast<std::size_t>(p_pi.rows()); }
  Matrix l_pi() const;
};

/// Probability vector ξ over states.
class StateDistribution {
 public:
  explicit StateDistribution(Vector xi);

  static StateDistribution uniform(std::size_t n);
  static StateDistribution point_mass(std::size_t n, std::size_t state);

  const Vector& weights() const { return xi_; }
  std::size_t size() const { return static_cast<std::size_t>(xi_.size()); }
  double operator[](std::size_t s) const { return xi_[static_cast<Eigen::Index>(s)]; }
  double max() const { return xi_.maxCoeff(); }

 private:
  Vector xi_;
};

/// Tabular feature matrix Φ (|S|×d), rows are φ(s)ᵀ.
class FeatureMap {
 public:
  explicit FeatureMap(Matrix phi);

  std::size_t n_states() const { return static_cast<std::size_t>(phi_.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(phi_.cols()); }
  const Matrix& matrix() const { return phi_; }
  Vector operator()(std::size_t s) const { return phi_.row(static_cast<Eigen::Index>(s)).transpose(); }
  /// K: the largest absolute feature value.
  double bound() const { return phi_.size() == 0 ? 0.0 : phi_.cwiseAbs().maxCoeff(); }

 private:
  Matrix phi_;
};

/// Continuous state (position, velocity) for the mountain-car domain.
using ContinuousState = std::array<double, 2>;
using State = std::variant<std::size_t, ContinuousState>;

/// One transition (s, a, r, s′) with its features and importance ratio.
struct Sample {
  State s;
  std::size_t a = 0;
  double r = 0.0;
  State s_next;
  Vector phi;
  Vector phi_next;
  double rho = 1.0;
  // s_next ended the episode; phi_next is zero and the next sample restarts.
  bool terminal = false;

  bool is_tabular() const { return std::holds_alternative<std::size_t>(s); }
  /// Throws UnsupportedOperation for continuous samples.
  std::size_t state_id() const;
  std::size_t next_state_id() const;
};

/// P^π(s, s′) = Σ_a π(a|s)·P(s′|s,a), R^π(s) = Σ_a π(a|s)·R(s,a).
InducedChain induce_chain(const TabularMDP& mdp, const Policy& policy);

/// V^π from the dense solve (I − γP^π)V = R^π.
Vector true_value(const InducedChain& chain);

/// Stationary ξ (ξᵀP = ξᵀ) by power iteration from uniform; throws
/// NonErgodicError when the max-abs change does not drop below `tolerance`
/// within `max_iterations`.
StateDistribution stationary_distribution(const Matrix& p, double tolerance = 1e-12,
                                          std::size_t max_iterations = 1000000);

/// Draws transitions from a tabular MDP under a behavior policy and labels
/// them with features and ρ = π(a|s)/π_b(a|s). Holds references: the MDP,
/// policies and features must outlive the sampler.
class TabularSampler {
 public:
  TabularSampler(const TabularMDP& mdp, const Policy& target, const Policy& behavior,
                 const FeatureMap& features, std::uint64_t seed);

  /// Positions the trajectory at a state drawn from `start`.
  void restart(const StateDistribution& start);
  /// Next transition of the current trajectory (s of the result equals the
  /// s_next of the previous call).
  Sample next();
  /// Independent transition with s drawn from `xi`.
  Sample draw(const StateDistribution& xi);
  /// Transition from a given state.
  Sample transition_from(std::size_t s);

 private:
  const TabularMDP& mdp_;
  const Policy& target_;
  const Policy& behavior_;
  const FeatureMap& features_;
  Rng rng_;
  std::size_t current_ = 0;
};

std::vector<Sample> generate_sequential(const TabularMDP& mdp, const Policy& target,
                                        const Policy& behavior, const FeatureMap& features,
                                        const StateDistribution& start, std::size_t n,
                                        std::uint64_t seed);

std::vector<Sample> generate_iid(const TabularMDP& mdp, const Policy& target,
                                 const Policy& behavior, const FeatureMap& features,
                                 const StateDistribution& state_dist, std::size_t n,
                                 std::uint64_t seed);

}  // namespace oblique
