#include <gtest/gtest.h>

#include <cmath>

#include "oblique/environments.hpp"
#include "oblique/metrics.hpp"
#include "support.hpp"

using namespace oblique;
namespace mc = oblique::mountain_car;

TEST(Baird, TargetChainGoesToHub) {
  BairdDomain b = build_baird();
  InducedChain c = induce_chain(b.mdp, b.target);
  for (Eigen::Index s = 0; s < 7; ++s) {
    EXPECT_EQ(c.p_pi(s, BairdConstants::kHub), 1.0);
  }
  EXPECT_EQ(c.r_pi, Vector::Zero(7));
  EXPECT_EQ(b.mdp.gamma(), 0.99);
}

TEST(Baird, ImportanceRatios) {
  BairdDomain b = build_baird();
  for (std::size_t s = 0; s < 7; ++s) {
    EXPECT_NEAR(b.target(s, BairdConstants::kSolid) / b.behavior(s, BairdConstants::kSolid), 7.0, 1e-14);
    EXPECT_EQ(b.target(s, BairdConstants::kDash) / b.behavior(s, BairdConstants::kDash), 0.0);
  }
}

TEST(Baird, FeaturesAndInitialWeights) {
  BairdDomain b = build_baird();
  ASSERT_EQ(b.features.dim(), 8u);
  for (std::size_t i = 0; i < 6; ++i) {
    Vector expected = Vector::Zero(8);
    expected[static_cast<Eigen::Index>(i)] = 2;
    expected[7] = 1;
    EXPECT_EQ(b.features(i), expected);
  }
  Vector hub = Vector::Zero(8);
  hub[6] = 1;
  hub[7] = 2;
  EXPECT_EQ(b.features(6), hub);
  Vector theta0(8);
  theta0 << 1, 1, 1, 1, 1, 1, 10, 1;
  EXPECT_EQ(b.theta0, theta0);
  // Overcomplete: rank 7 with 8 columns.
  EXPECT_EQ(Eigen::FullPivLU<Matrix>(b.features.matrix()).rank(), 7);
}

TEST(Baird, ZeroValueAndMseIsWeightedNorm) {
  BairdDomain b = build_baird();
  InducedChain c = induce_chain(b.mdp, b.target);
  StateDistribution xi = stationary_distribution(induce_chain(b.mdp, b.behavior).p_pi);
  EvaluationContext ctx = make_tabular_context(c, xi, b.features);
  EXPECT_EQ(ctx.v_true, Vector::Zero(7));
  EXPECT_EQ(mse(Vector::Zero(8), ctx), 0.0);
  Vector v = b.features.matrix() * b.theta0;
  EXPECT_NEAR(mse(b.theta0, ctx), v.dot(xi.weights().asDiagonal() * v), 1e-10);
}

TEST(RandomMdp, StrictlyPositiveAndConstantFeature) {
  RandomMDPSpec spec;
  spec.n_states = 30;
  spec.n_actions = 4;
  spec.n_features = 11;
  spec.seed = 5;
  RandomMDPDomain d = build_random_mdp(spec);
  for (std::size_t a = 0; a < 4; ++a) {
    EXPECT_GT(d.mdp.kernel(a).minCoeff(), 0.0);
    EXPECT_LT((d.mdp.kernel(a).rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12);
  }
  EXPECT_GT(d.behavior.probs().minCoeff(), 0.0);
  EXPECT_GT(d.target.probs().minCoeff(), 0.0);
  EXPECT_GT(d.start.weights().minCoeff(), 0.0);
  EXPECT_EQ(d.features.dim(), 11u);
  EXPECT_EQ(d.features.matrix().col(10), Vector::Ones(30));
  EXPECT_GE(d.features.matrix().leftCols(10).minCoeff(), 0.0);
  EXPECT_LT(d.features.matrix().leftCols(10).maxCoeff(), 1.0);
  EXPECT_EQ(d.mdp.gamma(), 0.95);
  EXPECT_NO_THROW(stationary_distribution(induce_chain(d.mdp, d.behavior).p_pi));
}

TEST(RandomMdp, DefaultSpecification) {
  RandomMDPSpec spec;
  EXPECT_EQ(spec.n_states, 400u);
  EXPECT_EQ(spec.n_actions, 10u);
  EXPECT_EQ(spec.n_features, 201u);
  EXPECT_EQ(spec.gamma, 0.95);
}

TEST(RandomMdp, SeedDeterminism) {
  RandomMDPSpec spec;
  spec.n_states = 20;
  spec.n_actions = 3;
  spec.n_features = 6;
  spec.seed = 9;
  RandomMDPDomain a = build_random_mdp(spec);
  RandomMDPDomain b = build_random_mdp(spec);
  spec.seed = 10;
  RandomMDPDomain c = build_random_mdp(spec);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(a.mdp.kernel(k), b.mdp.kernel(k));
  EXPECT_EQ(a.mdp.reward(), b.mdp.reward());
  EXPECT_EQ(a.features.matrix(), b.features.matrix());
  EXPECT_EQ(a.target.probs(), b.target.probs());
  EXPECT_NE(a.mdp.kernel(0), c.mdp.kernel(0));
}

TEST(MountainCar, CoastingAtValleyFloor) {
  // cos(3p) = 0 at p = −π/6 … use the floor p = −π/6 where gravity vanishes,
  // and a generic point where only gravity acts.
  mc::CarState s{-0.5, 0.0};
  auto r = mc::step(s, 1);
  EXPECT_DOUBLE_EQ(r.next[1], -mc::kGravity * std::cos(3 * -0.5));
  EXPECT_DOUBLE_EQ(r.next[0], -0.5 + r.next[1]);
  EXPECT_EQ(r.reward, -1.0);
  EXPECT_FALSE(r.done);
}

TEST(MountainCar, GoalAndBounds) {
  auto r = mc::step({0.49, 0.07}, 2);
  EXPECT_TRUE(r.done);
  EXPECT_LE(r.next[0], mc::kMaxPosition);
  auto left = mc::step({-1.2, -0.07}, 0);
  EXPECT_EQ(left.next[0], mc::kMinPosition);
  EXPECT_EQ(left.next[1], 0.0);
  auto fast = mc::step({0.0, 0.0699}, 2);
  EXPECT_LE(fast.next[1], mc::kMaxSpeed);
  EXPECT_THROW(mc::step({0.7, 0.0}, 1), std::invalid_argument);
  EXPECT_THROW(mc::step({0.0, 0.0}, 3), std::invalid_argument);
}

TEST(MountainCar, EnergyPumpingReachesGoal) {
  Rng rng(1);
  for (int episode = 0; episode < 20; ++episode) {
    mc::CarState s = mc::sample_start(rng);
    EXPECT_GE(s[0], -0.6);
    EXPECT_LT(s[0], -0.4);
    int t = 0;
    bool done = false;
    for (; t < 500 && !done; ++t) {
      auto r = mc::step(s, mc::energy_pumping_action(s));
      s = r.next;
      done = r.done;
    }
    EXPECT_TRUE(done) << "episode " << episode;
  }
}

TEST(MountainCar, DeterministicTrajectories) {
  mc::CarState a{-0.5, 0.0}, b{-0.5, 0.0};
  for (int t = 0; t < 100; ++t) {
    a = mc::step(a, mc::energy_pumping_action(a)).next;
    b = mc::step(b, mc::energy_pumping_action(b)).next;
  }
  EXPECT_EQ(a, b);
}

TEST(Fourier, ConstantTermAndRange) {
  Rng rng(2);
  FourierBasis basis(3);
  EXPECT_EQ(basis.dim(), 16u);
  for (int i = 0; i < 200; ++i) {
    mc::CarState s{rng.uniform(mc::kMinPosition, mc::kMaxPosition), rng.uniform(-mc::kMaxSpeed, mc::kMaxSpeed)};
    Vector f = basis(s);
    EXPECT_EQ(f[0], 1.0);
    EXPECT_LE(f.cwiseAbs().maxCoeff(), 1.0);
  }
}

TEST(Fourier, OriginAllOnesAndOrdering) {
  FourierBasis basis(2);
  EXPECT_EQ(basis.features_normalized({0.0, 0.0}), Vector::Ones(9));
  Vector f = basis.features_normalized({0.25, 0.5});
  // Index 1 is c = (0, 1): velocity varies fastest.
  EXPECT_NEAR(f[1], std::cos(M_PI * 0.5), 1e-15);
  EXPECT_NEAR(f[3], std::cos(M_PI * 0.25), 1e-15);
  EXPECT_NEAR(f[4], std::cos(M_PI * 0.75), 1e-15);
  EXPECT_EQ(fourier_features({mc::kMinPosition, -mc::kMaxSpeed}, 3), Vector::Ones(16));
}
