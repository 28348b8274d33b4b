#include "oblique/environments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oblique {

BairdDomain build_baird() {
  using C = BairdConstants;
  const auto n = static_cast<Eigen::Index>(C::kStates);
  Matrix solid = Matrix::Zero(n, n);
  solid.col(C::kHub).setOnes();
  Matrix dash = Matrix::Zero(n, n);
  dash.leftCols(n - 1).setConstant(1.0 / static_cast<double>(n - 1));

  Matrix behavior(n, 2);
  behavior.col(C::kSolid).setConstant(C::kBehaviorSolid);
  behavior.col(C::kDash).setConstant(1.0 - C::kBehaviorSolid);
  Matrix target(n, 2);
  target.col(C::kSolid).setOnes();
  target.col(C::kDash).setZero();

  Matrix phi = Matrix::Zero(n, static_cast<Eigen::Index>(C::kFeatures));
  for (Eigen::Index s = 0; s + 1 < n; ++s) {
    phi(s, s) = 2.0;
    phi(s, 7) = 1.0;
  }
  phi(C::kHub, 6) = 1.0;
  phi(C::kHub, 7) = 2.0;

  Vector theta0 = Vector::Ones(static_cast<Eigen::Index>(C::kFeatures));
  theta0[6] = C::kHubWeight;

  return BairdDomain{TabularMDP({solid, dash}, Matrix::Zero(n, 2), C::kGamma),
                     Policy(std::move(behavior)), Policy(std::move(target)),
                     FeatureMap(std::move(phi)), std::move(theta0)};
}

namespace {

// Row-normalized (u + offset) with u ~ U[0,1], filled row by row.
Matrix random_stochastic(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = rng.uniform() + kRandomMDPOffset;
    m.row(r) /= m.row(r).sum();
  }
  return m;
}

}  // namespace

RandomMDPDomain build_random_mdp(const RandomMDPSpec& spec) {
  if (spec.n_states == 0 || spec.n_actions == 0 || spec.n_features == 0) {
    throw std::invalid_argument("build_random_mdp: sizes must be positive");
  }
  const auto n = static_cast<Eigen::Index>(spec.n_states);
  const auto na = static_cast<Eigen::Index>(spec.n_actions);
  const auto d = static_cast<Eigen::Index>(spec.n_features);
  Rng rng(spec.seed);
  // Draw order is part of the format: kernels (action-major), reward,
  // behavior, target, start, features.
  std::vector<Matrix> kernels;
  kernels.reserve(spec.n_actions);
  for (Eigen::Index a = 0; a < na; ++a) kernels.push_back(random_stochastic(rng, n, n));
  Matrix reward(n, na);
  for (Eigen::Index s = 0; s < n; ++s)
    for (Eigen::Index a = 0; a < na; ++a) reward(s, a) = rng.uniform();
  Matrix behavior = random_stochastic(rng, n, na);
  Matrix target = random_stochastic(rng, n, na);
  Vector start = random_stochastic(rng, 1, n).row(0).transpose();
  Matrix phi(n, d);
  for (Eigen::Index s = 0; s < n; ++s) {
    for (Eigen::Index j = 0; j + 1 < d; ++j) phi(s, j) = rng.uniform();
    phi(s, d - 1) = 1.0;
  }
  return RandomMDPDomain{TabularMDP(std::move(kernels), std::move(reward), spec.gamma),
                         Policy(std::move(behavior)), Policy(std::move(target)),
                         StateDistribution(std::move(start)), FeatureMap(std::move(phi))};
}

namespace mountain_car {

StepResult step(const CarState& state, std::size_t action) {
  const double p = position(state);
  const double v = velocity(state);
  if (!(p >= kMinPosition && p <= kMaxPosition && v >= -kMaxSpeed && v <= kMaxSpeed)) {
    throw std::invalid_argument("mountain_car::step: state out of bounds");
  }
  if (action >= kActions) throw std::invalid_argument("mountain_car::step: action out of range");
  double v2 = v + kForce * (static_cast<double>(action) - 1.0) - kGravity * std::cos(3.0 * p);
  v2 = std::clamp(v2, -kMaxSpeed, kMaxSpeed);
  double p2 = std::clamp(p + v2, kMinPosition, kMaxPosition);
  if (p2 == kMinPosition && v2 < 0.0) v2 = 0.0;
  StepResult out;
  out.next = {p2, v2};
  out.reward = -1.0;
  out.done = p2 >= kGoalPosition;
  return out;
}

CarState sample_start(Rng& rng) { return {rng.uniform(-0.6, -0.4), 0.0}; }

std::size_t energy_pumping_action(const CarState& state) { return velocity(state) < 0.0 ? 0 : 2; }

ContinuousState normalize(const CarState& state) {
  return {(position(state) - kMinPosition) / (kMaxPosition - kMinPosition),
          (velocity(state) + kMaxSpeed) / (2.0 * kMaxSpeed)};
}

}  // namespace mountain_car

FourierBasis::FourierBasis(std::size_t order) : order_(order) {}

Vector FourierBasis::features_normalized(const ContinuousState& x) const {
  Vector out(static_cast<Eigen::Index>(dim()));
  Eigen::Index k = 0;
  for (std::size_t c0 = 0; c0 <= order_; ++c0) {
    for (std::size_t c1 = 0; c1 <= order_; ++c1) {
      out[k++] = std::cos(std::numbers::pi * (static_cast<double>(c0) * x[0] +
                                              static_cast<double>(c1) * x[1]));
    }
  }
  return out;
}

Vector FourierBasis::operator()(const mountain_car::CarState& state) const {
  return features_normalized(mountain_car::normalize(state));
}

Vector fourier_features(const mountain_car::CarState& state, std::size_t order) {
  return FourierBasis(order)(state);
}

}  // namespace oblique
