#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oblique/batch.hpp"
#include "oblique/errors.hpp"
#include "oblique/projection.hpp"
#include "support.hpp"

using namespace oblique;

namespace {

Sample tabular_sample(std::size_t s, std::size_t s_next, const Vector& phi, const Vector& phi_next,
                      double r, double rho = 1.0) {
  Sample x;
  x.s = s;
  x.s_next = s_next;
  x.phi = phi;
  x.phi_next = phi_next;
  x.r = r;
  x.rho = rho;
  return x;
}

AggregatedModel model_from(const Matrix& delta, const Vector& r, const Matrix& c) {
  AggregatedModel m;
  for (Eigen::Index i = 0; i < delta.rows(); ++i) {
    m.states.push_back(static_cast<std::size_t>(i));
    m.counts.push_back(1);
  }
  m.delta_hat = delta;
  m.r_hat = r;
  m.c_hat = c;
  m.n_samples = static_cast<std::size_t>(delta.rows());
  return m;
}

double stage1_objective(const Matrix& delta, const Matrix& x, const Matrix& c) {
  return 0.5 * (delta.transpose() * x - c).squaredNorm();
}

}  // namespace

TEST(Aggregate, SingleState) {
  Vector phi(2), n1(2), n2(2);
  phi << 1, 2;
  n1 << 0, 1;
  n2 << 2, 0;
  std::vector<Sample> samples{tabular_sample(3, 1, phi, n1, 1.0, 2.0), tabular_sample(3, 2, phi, n2, 3.0, 1.0)};
  AggregatedModel m = aggregate(samples, 0.5);
  ASSERT_EQ(m.m(), 1u);
  EXPECT_EQ(m.states[0], 3u);
  EXPECT_EQ(m.counts[0], 2u);
  Vector expected = 0.5 * (2.0 * (phi - 0.5 * n1) + 1.0 * (phi - 0.5 * n2));
  EXPECT_LT((m.delta_hat.row(0).transpose() - expected).norm(), 1e-15);
  EXPECT_DOUBLE_EQ(m.r_hat[0], 0.5 * (2.0 * 1.0 + 3.0));
  EXPECT_LT((m.c_hat - phi * phi.transpose()).norm(), 1e-15);
}

TEST(Aggregate, DeterministicOnPolicyChainExact) {
  Matrix p(3, 3);
  p << 0, 1, 0, 0, 0, 1, 1, 0, 0;
  TabularMDP mdp({p}, Matrix::Ones(3, 1), 0.9);
  Policy pi = Policy::uniform(3, 1);
  Rng rng(1);
  FeatureMap phi(support::random_matrix(rng, 3, 2));
  auto samples = generate_sequential(mdp, pi, pi, phi, StateDistribution::point_mass(3, 0), 30, 2);
  AggregatedModel m = aggregate(samples, 0.9);
  ASSERT_EQ(m.m(), 3u);
  for (std::size_t j = 0; j < 3; ++j) {
    const std::size_t s = m.states[j];
    Vector expected = phi(s) - 0.9 * phi((s + 1) % 3);
    EXPECT_LT((m.delta_hat.row(static_cast<Eigen::Index>(j)).transpose() - expected).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(Aggregate, ConvergesToExactRows) {
  Rng rng(2);
  TabularMDP mdp = support::random_mdp(rng, 10, 3, 0.9);
  Policy target(support::random_stochastic(rng, 10, 3));
  Policy behavior = Policy::uniform(10, 3);
  FeatureMap phi(support::random_matrix(rng, 10, 3));
  const std::size_t n = 100000;
  auto samples = generate_iid(mdp, target, behavior, phi, StateDistribution::uniform(10), n, 4);
  AggregatedModel m = aggregate(samples, 0.9);
  InducedChain chain = induce_chain(mdp, target);
  Matrix exact = chain.l_pi() * phi.matrix();

  // Per-entry standard errors from the sample variance within each group.
  Matrix sum = Matrix::Zero(10, 3), sum_sq = Matrix::Zero(10, 3);
  Vector count = Vector::Zero(10);
  for (const Sample& s : samples) {
    const auto i = static_cast<Eigen::Index>(s.state_id());
    Vector d = s.rho * (s.phi - 0.9 * s.phi_next);
    sum.row(i) += d.transpose();
    sum_sq.row(i) += d.cwiseProduct(d).transpose();
    count[i] += 1;
  }
  for (std::size_t j = 0; j < m.m(); ++j) {
    const auto s = static_cast<Eigen::Index>(m.states[j]);
    for (Eigen::Index k = 0; k < 3; ++k) {
      const double mean = sum(s, k) / count[s];
      const double var = sum_sq(s, k) / count[s] - mean * mean;
      const double se = std::sqrt(var / count[s]);
      EXPECT_NEAR(m.delta_hat(static_cast<Eigen::Index>(j), k), exact(s, k), 5 * se + 1e-12);
    }
  }
}

TEST(Aggregate, RejectsContinuousAndEmpty) {
  std::vector<Sample> none;
  EXPECT_THROW(aggregate(none, 0.9), std::invalid_argument);
  Sample s;
  s.s = ContinuousState{0, 0};
  s.s_next = ContinuousState{0, 0};
  s.phi = Vector::Ones(2);
  s.phi_next = Vector::Ones(2);
  std::vector<Sample> cont{s};
  EXPECT_THROW(aggregate(cont, 0.9), UnsupportedOperation);
}

TEST(Aggregate, CHatSymmetricPsd) {
  Rng rng(3);
  TabularMDP mdp = support::random_mdp(rng, 6, 2, 0.9);
  Policy pi = Policy::uniform(6, 2);
  FeatureMap phi(support::random_matrix(rng, 6, 4));
  auto samples = generate_iid(mdp, pi, pi, phi, StateDistribution::uniform(6), 500, 1);
  AggregatedModel m = aggregate(samples, 0.9);
  EXPECT_LT((m.c_hat - m.c_hat.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m.c_hat);
  EXPECT_GT(eig.eigenvalues().minCoeff(), -1e-12);
  for (std::size_t c : m.counts) EXPECT_GE(c, 1u);
}

TEST(SotdStageOne, IdentityDelta) {
  Rng rng(4);
  Matrix c = support::random_matrix(rng, 4, 4);
  c = c * c.transpose();
  StageOneResult r = sotd_solve_x(model_from(Matrix::Identity(4, 4), Vector::Zero(4), c));
  EXPECT_TRUE(r.report.closed_form);
  EXPECT_LT((r.x_hat - c).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SotdStageOne, FullRankMatchesNormalEquations) {
  Rng rng(5);
  Matrix delta = support::random_matrix(rng, 4, 6);  // m = 4 states, d = 6: ΔΔᵀ invertible
  Matrix c = support::random_matrix(rng, 6, 6);
  StageOneResult r = sotd_solve_x(model_from(delta, Vector::Zero(4), c));
  Matrix oracle = (delta * delta.transpose()).inverse() * (delta * c);
  EXPECT_TRUE(r.report.closed_form);
  EXPECT_NEAR(stage1_objective(delta, r.x_hat, c), stage1_objective(delta, oracle, c), 1e-8);
  EXPECT_LT((r.x_hat - oracle).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(SotdStageOne, RankDeficientGradientPathMatchesPinv) {
  Rng rng(6);
  // m = 6 states, d = 3: ΔΔᵀ (6×6) has rank 3, forcing the gradient path.
  Matrix delta = support::random_matrix(rng, 6, 3);
  Matrix c = support::random_matrix(rng, 3, 3);
  StageOneResult r = sotd_solve_x(model_from(delta, Vector::Zero(6), c));
  EXPECT_FALSE(r.report.closed_form);
  EXPECT_TRUE(r.report.converged);
  EXPECT_LT(r.report.gradient_norm, 1e-9);
  Matrix oracle = support::svd_pinv(delta.transpose()) * c;
  EXPECT_NEAR(stage1_objective(delta, r.x_hat, c), stage1_objective(delta, oracle, c), 1e-6);
  // Starting from zero, the iterates stay in range(Δ), so this is the min-norm solution.
  EXPECT_LT((r.x_hat - oracle).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(SotdStageOne, BestSoFarObjectiveNonIncreasing) {
  Rng rng(7);
  Matrix delta = support::random_matrix(rng, 8, 3);
  Matrix c = support::random_matrix(rng, 3, 3);
  GradientOptions opt;
  opt.record_objective = true;
  StageOneResult r = sotd_solve_x(model_from(delta, Vector::Zero(8), c), opt);
  ASSERT_FALSE(r.report.objective_trace.empty());
  double best = r.report.objective_trace.front();
  std::vector<double> envelope;
  for (double f : r.report.objective_trace) {
    best = std::min(best, f);
    envelope.push_back(best);
  }
  for (std::size_t i = 1; i < envelope.size(); ++i) EXPECT_LE(envelope[i], envelope[i - 1]);
  EXPECT_LT(envelope.back(), r.report.objective_trace.front());
}

TEST(SotdStageOne, IterationCapFlagsNonConvergence) {
  Rng rng(8);
  Matrix delta = support::random_matrix(rng, 8, 3);
  Matrix c = support::random_matrix(rng, 3, 3);
  GradientOptions opt;
  opt.max_iterations = 2;
  StageOneResult r = sotd_solve_x(model_from(delta, Vector::Zero(8), c), opt);
  EXPECT_FALSE(r.report.converged);
  EXPECT_EQ(r.report.iterations, 2u);
}

TEST(SotdStageTwo, ZeroRewardGivesZero) {
  Rng rng(9);
  Matrix delta = support::random_matrix(rng, 5, 3);
  AggregatedModel m = model_from(delta, Vector::Zero(5), Matrix::Identity(3, 3));
  StageTwoResult r = sotd_solve_theta(support::random_matrix(rng, 5, 3), m);
  EXPECT_LT(r.theta.cwiseAbs().maxCoeff(), 1e-14);
}

TEST(SotdStageTwo, ExactModelReproducesOptimalFixedPoint) {
  Rng rng(10);
  auto inst = support::random_instance(rng, 8, 3, 0.9);
  Matrix x_star = canonical_x(ProjectionKind::kOptimal, inst.chain, inst.xi, inst.phi);
  AggregatedModel m = model_from(inst.chain.l_pi() * inst.phi.matrix(), inst.chain.r_pi,
                                 inst.phi.matrix().transpose() * inst.xi.weights().asDiagonal() * inst.phi.matrix());
  StageTwoResult r = sotd_solve_theta(x_star, m);
  FixedPointSolution fp = fixed_point_theta(x_star, inst.chain, inst.phi);
  EXPECT_LT((r.theta - fp.theta).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(SotdStageTwo, ResidualVanishesWhenWellConditioned) {
  Rng rng(11);
  Matrix delta = support::random_matrix(rng, 6, 3);
  Vector rhat = support::random_vector(rng, 6);
  Matrix x = support::random_matrix(rng, 6, 3);
  StageTwoResult r = sotd_solve_theta(x, model_from(delta, rhat, Matrix::Identity(3, 3)));
  EXPECT_LT((x.transpose() * (delta * r.theta - rhat)).norm(), 1e-9);
}

TEST(SotdStageTwo, SingularFallsBackToGradient) {
  Rng rng(12);
  Matrix delta = support::random_matrix(rng, 6, 3);
  delta.col(2) = delta.col(0);
  Vector rhat = support::random_vector(rng, 6);
  Matrix x = support::random_matrix(rng, 6, 3);
  StageTwoResult r = sotd_solve_theta(x, model_from(delta, rhat, Matrix::Identity(3, 3)));
  EXPECT_FALSE(r.report.closed_form);
  Matrix a = x.transpose() * delta;
  Vector b = x.transpose() * rhat;
  Vector oracle = support::svd_pinv(a) * b;
  EXPECT_NEAR((a * r.theta - b).squaredNorm(), (a * oracle - b).squaredNorm(), 1e-8);
}

TEST(Sotd, ExactModelIdentities) {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    auto inst = support::random_instance(rng, 8, 3, 0.95);
    Matrix delta = inst.chain.l_pi() * inst.phi.matrix();
    Matrix c = inst.phi.matrix().transpose() * inst.xi.weights().asDiagonal() * inst.phi.matrix();
    Matrix x_star = canonical_x(ProjectionKind::kOptimal, inst.chain, inst.xi, inst.phi);
    EXPECT_LT((delta.transpose() * x_star - c).cwiseAbs().maxCoeff(), 1e-10);
    Vector theta_star = orthogonal_projection_theta(true_value(inst.chain), inst.xi, inst.phi);
    EXPECT_LT((x_star.transpose() * (delta * theta_star - inst.chain.r_pi)).norm(), 1e-9);
  }
}

TEST(Sotd, EndToEndResidualsFinite) {
  Rng rng(14);
  TabularMDP mdp = support::random_mdp(rng, 10, 2, 0.9);
  Policy pi = Policy::uniform(10, 2);
  FeatureMap phi(support::random_matrix(rng, 10, 3));
  auto samples = generate_iid(mdp, pi, pi, phi, StateDistribution::uniform(10), 2000, 3);
  SOTDResult r = sotd(samples, 0.9);
  EXPECT_TRUE(std::isfinite(r.stage1_residual));
  EXPECT_GE(r.stage1_residual, 0.0);
  EXPECT_TRUE(std::isfinite(r.stage2_residual));
  EXPECT_EQ(r.x_hat.rows(), static_cast<Eigen::Index>(r.model.m()));
}

TEST(Lstd, RepresentableValueRecovered) {
  Rng rng(15);
  TabularMDP base = support::random_mdp(rng, 6, 1, 0.8);
  FeatureMap phi(support::random_matrix(rng, 6, 3));
  Vector theta0 = support::random_vector(rng, 3);
  Matrix l = Matrix::Identity(6, 6) - 0.8 * base.kernel(0);
  Matrix reward = l * phi.matrix() * theta0;
  TabularMDP mdp({base.kernel(0)}, reward, 0.8);
  Policy pi = Policy::uniform(6, 1);
  auto samples = generate_iid(mdp, pi, pi, phi, StateDistribution::uniform(6), 200000, 9);
  EXPECT_LT((lstd(samples, 0.8) - theta0).cwiseAbs().maxCoeff(), 1e-2);
}

TEST(Lstd, OneHotTabularMonteCarlo) {
  std::vector<Sample> samples;
  const double rewards[] = {0.5, -1.0, 2.0};
  for (std::size_t s = 0; s < 3; ++s) {
    Vector e = Vector::Unit(3, static_cast<Eigen::Index>(s));
    samples.push_back(tabular_sample(s, (s + 1) % 3, e, Vector::Unit(3, (s + 1) % 3), rewards[s]));
  }
  Vector theta = lstd(samples, 0.0);
  for (int s = 0; s < 3; ++s) EXPECT_NEAR(theta[s], rewards[s], 1e-15);
}

TEST(Lstd, DuplicatedSetIdentical) {
  Rng rng(16);
  TabularMDP mdp = support::random_mdp(rng, 5, 2, 0.9);
  Policy pi = Policy::uniform(5, 2);
  FeatureMap phi(support::random_matrix(rng, 5, 3));
  auto samples = generate_iid(mdp, pi, pi, phi, StateDistribution::uniform(5), 300, 1);
  auto doubled = samples;
  doubled.insert(doubled.end(), samples.begin(), samples.end());
  EXPECT_LT((lstd(samples, 0.9) - lstd(doubled, 0.9)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Lstd, SingularWithoutRidge) {
  Vector e0 = Vector::Unit(2, 0);
  std::vector<Sample> samples{tabular_sample(0, 0, e0, e0, 1.0)};
  EXPECT_THROW(lstd(samples, 0.5), SingularMatrixError);
  EXPECT_NO_THROW(lstd(samples, 0.5, 1e-3));
}

TEST(DiagonalOmega, GammaZeroOnesOptimal) {
  Rng rng(17);
  auto inst = support::random_instance(rng, 6, 3, 0.0);
  Vector omega = solve_diagonal_omega(inst.chain, inst.xi, inst.phi);
  EXPECT_NEAR(diagonal_omega_objective(omega, inst.chain, inst.xi, inst.phi), 0.0, 1e-20);
  EXPECT_NEAR(diagonal_omega_objective(Vector::Ones(6), inst.chain, inst.xi, inst.phi), 0.0, 1e-20);
}

TEST(DiagonalOmega, BeatsOnesAndPerStateWeights) {
  Rng rng(18);
  for (int trial = 0; trial < 20; ++trial) {
    auto inst = support::random_instance(rng, 6, 3, 0.9);
    Vector omega = solve_diagonal_omega(inst.chain, inst.xi, inst.phi);
    const double best = diagonal_omega_objective(omega, inst.chain, inst.xi, inst.phi);
    EXPECT_LE(best, diagonal_omega_objective(Vector::Ones(6), inst.chain, inst.xi, inst.phi) + 1e-14);
    EXPECT_LE(best, diagonal_omega_objective(per_state_o2td_omega(inst.chain, inst.phi), inst.chain, inst.xi,
                                             inst.phi) + 1e-14);
  }
}

TEST(DiagonalOmega, TwoStateGridSearch) {
  Rng rng(19);
  auto inst = support::random_instance(rng, 2, 2, 0.7);
  Vector omega = solve_diagonal_omega(inst.chain, inst.xi, inst.phi);
  double best = std::numeric_limits<double>::infinity();
  Vector arg(2);
  const double step = 1e-3;
  // Coarse pass then a fine pass around the coarse minimizer keeps the grid
  // search tractable while reaching 1e-3 resolution.
  for (double a = -5; a <= 5; a += 0.05) {
    for (double b = -5; b <= 5; b += 0.05) {
      Vector w(2);
      w << a, b;
      const double f = diagonal_omega_objective(w, inst.chain, inst.xi, inst.phi);
      if (f < best) {
        best = f;
        arg = w;
      }
    }
  }
  const Vector coarse = arg;
  for (double a = coarse[0] - 0.05; a <= coarse[0] + 0.05; a += step) {
    for (double b = coarse[1] - 0.05; b <= coarse[1] + 0.05; b += step) {
      Vector w(2);
      w << a, b;
      const double f = diagonal_omega_objective(w, inst.chain, inst.xi, inst.phi);
      if (f < best) {
        best = f;
        arg = w;
      }
    }
  }
  ASSERT_LT(omega.cwiseAbs().maxCoeff(), 5.0);
  EXPECT_LE(diagonal_omega_objective(omega, inst.chain, inst.xi, inst.phi), best + 1e-12);
  EXPECT_LT((omega - arg).cwiseAbs().maxCoeff(), 2 * step);
}
