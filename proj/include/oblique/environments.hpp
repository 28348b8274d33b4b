#pragma once

#include <cstddef>
#include <cstdint>

#include "oblique/mdp.hpp"
#include "oblique/rng.hpp"
#include "oblique/types.hpp"

namespace oblique {

// ---------------------------------------------------------------------------
// Baird's star counterexample.
//
// States 0..5 are the outer states, state 6 is the hub. Action 0 ("solid")
// moves to the hub; action 1 ("dash") moves to one of the outer states
// uniformly. All rewards are zero, so V ≡ 0.
//
// Features (8 columns): outer state i has φ = 2e_i + e_7; the hub has
// φ = e_6 + 2e_7. Initial weights θ₀ = (1,1,1,1,1,1,10,1).
// Behavior policy: dash w.p. 6/7, solid w.p. 1/7. Target: always solid.
// ---------------------------------------------------------------------------

struct BairdConstants {
  static constexpr std::size_t kStates = 7;
  static constexpr std::size_t kFeatures = 8;
  static constexpr std::size_t kHub = 6;
  static constexpr std::size_t kSolid = 0;
  static constexpr std::size_t kDash = 1;
  static constexpr double kGamma = 0.99;
  static constexpr double kBehaviorSolid = 1.0 / 7.0;
  static constexpr double kHubWeight = 10.0;
};

struct BairdDomain {
  TabularMDP mdp;
  Policy behavior;
  Policy target;
  FeatureMap features;
  Vector theta0;
};

BairdDomain build_baird();

// ---------------------------------------------------------------------------
// Random MDP: P(s′|s,a) ∝ u + 1e-5 with u ~ U[0,1]; policies and the start
// distribution use the same recipe; R(s,a) ~ U[0,1]. Features: n_features−1
// columns ~ U[0,1] plus a trailing constant-one column.
// ---------------------------------------------------------------------------

struct RandomMDPSpec {
  std::size_t n_states = 400;
  std::size_t n_actions = 10;
  std::size_t n_features = 201;  // including the constant column
  double gamma = 0.95;
  std::uint64_t seed = 0;
};

inline constexpr double kRandomMDPOffset = 1e-5;

struct RandomMDPDomain {
  TabularMDP mdp;
  Policy behavior;
  Policy target;
  StateDistribution start;
  FeatureMap features;
};

RandomMDPDomain build_random_mdp(const RandomMDPSpec& spec);

// ---------------------------------------------------------------------------
// Mountain car (standard dynamics) with Fourier-basis features.
// ---------------------------------------------------------------------------

namespace mountain_car {

inline constexpr double kMinPosition = -1.2;
inline constexpr double kMaxPosition = 0.6;
inline constexpr double kMaxSpeed = 0.07;
inline constexpr double kGoalPosition = 0.5;
inline constexpr double kForce = 0.001;
inline constexpr double kGravity = 0.0025;
inline constexpr std::size_t kActions = 3;  // 0 reverse, 1 coast, 2 forward

using CarState = ContinuousState;  // {position, velocity}

inline double position(const CarState& s) { return s[0]; }
inline double velocity(const CarState& s) { return s[1]; }

struct StepResult {
  CarState next;
  double reward = -1.0;
  bool done = false;
};

/// velocity′ = clip(v + 0.001(a−1) − 0.0025cos(3p)), position′ = clip(p + velocity′);
/// velocity is zeroed when the car hits the left wall. Throws std::invalid_argument
/// for out-of-bounds states or actions.
StepResult step(const CarState& state, std::size_t action);

/// Start state: position ~ U[−0.6, −0.4), velocity 0.
CarState sample_start(Rng& rng);

/// Energy pumping: push in the direction of travel (forward when at rest).
std::size_t energy_pumping_action(const CarState& state);

/// Maps the state box onto [0,1]².
ContinuousState normalize(const CarState& state);

}  // namespace mountain_car

/// Fourier basis cos(π cᵀx) over all c ∈ {0..order}², x the state normalized
/// to [0,1]²; d = (order+1)². Coefficients are enumerated with the velocity
/// index varying fastest.
class FourierBasis {
 public:
  explicit FourierBasis(std::size_t order);

  std::size_t order() const { return order_; }
  std::size_t dim() const { return (order_ + 1) * (order_ + 1); }
  /// Features of a point already normalized to [0,1]².
  Vector features_normalized(const ContinuousState& x) const;
  /// Features of a raw mountain-car state.
  Vector operator()(const mountain_car::CarState& state) const;

 private:
  std::size_t order_;
};

/// Features of a raw mountain-car state with the given basis order.
Vector fourier_features(const mountain_car::CarState& state, std::size_t order);

}  // namespace oblique
