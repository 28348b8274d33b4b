#include "oblique/mdp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "oblique/errors.hpp"
#include "oblique/linalg.hpp"

namespace oblique {

namespace {

constexpr double kRowSumTolerance = 1e-12;
constexpr double kDistributionTolerance = 1e-10;

void check_stochastic_rows(const Matrix& m, const char* what) {
  if (!m.allFinite() || (m.array() < 0.0).any()) {
    throw std::invalid_argument(std::string(what) + ": entries must be finite and nonnegative");
  }
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    if (std::abs(m.row(r).sum() - 1.0) > kRowSumTolerance) {
      throw std::invalid_argument(std::string(what) + ": row " + std::to_string(r) +
                                  " does not sum to 1");
    }
  }
}

}  // namespace

TabularMDP::TabularMDP(std::vector<Matrix> transition, Matrix reward, double gamma)
    : transition_(std::move(transition)), reward_(std::move(reward)), gamma_(gamma) {
  if (reward_.rows() == 0 || reward_.cols() == 0) {
    throw ShapeError("TabularMDP: need at least one state and one action");
  }
  if (transition_.size() != n_actions()) {
    throw ShapeError("TabularMDP: one transition kernel per action required");
  }
  for (const Matrix& k : transition_) {
    if (k.rows() != reward_.rows() || k.cols() != reward_.rows()) {
      throw ShapeError("TabularMDP: transition kernels must be |S|x|S|");
    }
    check_stochastic_rows(k, "TabularMDP transition");
  }
  if (!reward_.allFinite()) throw std::invalid_argument("TabularMDP: rewards must be finite");
  if (!(gamma_ >= 0.0 && gamma_ < 1.0)) {
    throw std::invalid_argument("TabularMDP: gamma must lie in [0, 1)");
  }
}

Policy::Policy(Matrix probs) : probs_(std::move(probs)) {
  if (probs_.rows() == 0 || probs_.cols() == 0) throw ShapeError("Policy: empty table");
  check_stochastic_rows(probs_, "Policy");
}

Policy Policy::uniform(std::size_t n_states, std::size_t n_actions) {
  return Policy(Matrix::Constant(static_cast<Eigen::Index>(n_states),
                                 static_cast<Eigen::Index>(n_actions),
                                 1.0 / static_cast<double>(n_actions)));
}

Matrix InducedChain::l_pi() const {
  return Matrix::Identity(p_pi.rows(), p_pi.cols()) - gamma * p_pi;
}

StateDistribution::StateDistribution(Vector xi) : xi_(std::move(xi)) {
  if (xi_.size() == 0) throw ShapeError("StateDistribution: empty");
  if (!xi_.allFinite() || (xi_.array() < 0.0).any()) {
    throw std::invalid_argument("StateDistribution: entries must be finite and nonnegative");
  }
  if (std::abs(xi_.sum() - 1.0) > kDistributionTolerance) {
    throw std::invalid_argument("StateDistribution: entries must sum to 1");
  }
}

StateDistribution StateDistribution::uniform(std::size_t n) {
  return StateDistribution(Vector::Constant(static_cast<Eigen::Index>(n), 1.0 / static_cast<double>(n)));
}

StateDistribution StateDistribution::point_mass(std::size_t n, std::size_t state) {
  if (state >= n) throw ShapeError("StateDistribution::point_mass: state out of range");
  Vector xi = Vector::Zero(static_cast<Eigen::Index>(n));
  xi[static_cast<Eigen::Index>(state)] = 1.0;
  return StateDistribution(std::move(xi));
}

FeatureMap::FeatureMap(Matrix phi) : phi_(std::move(phi)) {
  if (phi_.rows() == 0 || phi_.cols() == 0) throw ShapeError("FeatureMap: empty feature matrix");
  if (!phi_.allFinite()) throw std::invalid_argument("FeatureMap: features must be finite");
}

std::size_t Sample::state_id() const {
  if (const auto* id = std::get_if<std::size_t>(&s)) return *id;
  throw UnsupportedOperation("sample state is continuous; a tabular state id is required");
}

std::size_t Sample::next_state_id() const {
  if (const auto* id = std::get_if<std::size_t>(&s_next)) return *id;
  throw UnsupportedOperation("sample state is continuous; a tabular state id is required");
}

InducedChain induce_chain(const TabularMDP& mdp, const Policy& policy) {
  if (policy.n_states() != mdp.n_states() || policy.n_actions() != mdp.n_actions()) {
    throw ShapeError("induce_chain: policy is " + std::to_string(policy.n_states()) + "x" +
                     std::to_string(policy.n_actions()) + " but the MDP has " +
                     std::to_string(mdp.n_states()) + " states and " +
                     std::to_string(mdp.n_actions()) + " actions");
  }
  const auto n = static_cast<Eigen::Index>(mdp.n_states());
  InducedChain chain{Matrix::Zero(n, n), Vector::Zero(n), mdp.gamma()};
  for (std::size_t a = 0; a < mdp.n_actions(); ++a) {
    const auto col = static_cast<Eigen::Index>(a);
    chain.p_pi.noalias() += policy.probs().col(col).asDiagonal() * mdp.kernel(a);
    chain.r_pi += policy.probs().col(col).cwiseProduct(mdp.reward().col(col));
  }
  return chain;
}

Vector true_value(const InducedChain& chain) {
  return solve(chain.l_pi(), chain.r_pi, "true_value: I - gamma*P");
}

StateDistribution stationary_distribution(const Matrix& p, double tolerance,
                                          std::size_t max_iterations) {
  if (p.rows() != p.cols() || p.rows() == 0) {
    throw ShapeError("stationary_distribution: matrix must be square and non-empty");
  }
  const Matrix pt = p.transpose();
  Vector xi = Vector::Constant(p.rows(), 1.0 / static_cast<double>(p.rows()));
  for (std::size_t it = 0; it < max_iterations; ++it) {
    Vector next = pt * xi;
    next /= next.sum();
    const double change = (next - xi).cwiseAbs().maxCoeff();
    xi = std::move(next);
    if (change < tolerance) {
      return StateDistribution(std::move(xi));
    }
  }
  throw NonErgodicError("stationary_distribution: power iteration did not converge in " +
                        std::to_string(max_iterations) +
                        " iterations (chain is not irreducible and aperiodic)");
}

TabularSampler::TabularSampler(const TabularMDP& mdp, const Policy& target,
                               const Policy& behavior, const FeatureMap& features,
                               std::uint64_t seed)
    : mdp_(mdp), target_(target), behavior_(behavior), features_(features), rng_(seed) {
  if (target.n_states() != mdp.n_states() || target.n_actions() != mdp.n_actions() ||
      behavior.n_states() != mdp.n_states() || behavior.n_actions() != mdp.n_actions()) {
    throw ShapeError("TabularSampler: policy shape does not match the MDP");
  }
  if (features.n_states() != mdp.n_states()) {
    throw ShapeError("TabularSampler: feature rows do not match the MDP state count");
  }
}

void TabularSampler::restart(const StateDistribution& start) {
  if (start.size() != mdp_.n_states()) throw ShapeError("TabularSampler: start distribution size");
  current_ = rng_.categorical(start.weights(), start.size());
}

Sample TabularSampler::next() {
  Sample sample = transition_from(current_);
  current_ = std::get<std::size_t>(sample.s_next);
  return sample;
}

Sample TabularSampler::draw(const StateDistribution& xi) {
  if (xi.size() != mdp_.n_states()) throw ShapeError("TabularSampler: state distribution size");
  return transition_from(rng_.categorical(xi.weights(), xi.size()));
}

Sample TabularSampler::transition_from(std::size_t s) {
  const auto row = static_cast<Eigen::Index>(s);
  const std::size_t a = rng_.categorical(behavior_.probs().row(row), mdp_.n_actions());
  const std::size_t s_next =
      rng_.categorical(mdp_.kernel(a).row(row), mdp_.n_states());
  Sample sample;
  sample.s = s;
  sample.a = a;
  sample.r = mdp_.reward()(row, static_cast<Eigen::Index>(a));
  sample.s_next = s_next;
  sample.phi = features_(s);
  sample.phi_next = features_(s_next);
  // categorical never returns a zero-probability action, so the ratio is finite.
  sample.rho = target_(s, a) / behavior_(s, a);
  return sample;
}

std::vector<Sample> generate_sequential(const TabularMDP& mdp, const Policy& target,
                                        const Policy& behavior, const FeatureMap& features,
                                        const StateDistribution& start, std::size_t n,
                                        std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("generate_sequential: n must be at least 1");
  TabularSampler sampler(mdp, target, behavior, features, seed);
  sampler.restart(start);
  std::vector<Sample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(sampler.next());
  return out;
}

std::vector<Sample> generate_iid(const TabularMDP& mdp, const Policy& target,
                                 const Policy& behavior, const FeatureMap& features,
                                 const StateDistribution& state_dist, std::size_t n,
                                 std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("generate_iid: n must be at least 1");
  TabularSampler sampler(mdp, target, behavior, features, seed);
  std::vector<Sample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(sampler.draw(state_dist));
  return out;
}

}  // namespace oblique
