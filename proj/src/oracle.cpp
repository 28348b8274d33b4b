#include "oblique/oracle.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "oblique/batch.hpp"
#include "oblique/errors.hpp"
#include "oblique/matrix_io.hpp"
#include "oblique/metrics.hpp"
#include "oblique/projection.hpp"
#include "oblique/rng.hpp"

namespace oblique {

namespace {

ProjectionReport evaluate(std::string name, const Matrix& x, const InducedChain& chain,
                          const FeatureMap& phi, const EvaluationContext& ctx) {
  ProjectionReport r;
  r.name = std::move(name);
  try {
    FixedPointSolution sol = fixed_point_theta(x, chain, phi);
    r.mse = mse(sol.theta, ctx);
    r.mspbe = mspbe(sol.theta, ctx);
    r.v_hat = std::move(sol.v_hat);
    r.theta = std::move(sol.theta);
  } catch (const SingularMatrixError&) {
    r.mse = std::numeric_limits<double>::quiet_NaN();
    r.mspbe = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

Matrix random_stochastic(Rng& rng, std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = -std::log(1.0 - rng.uniform());
    m.row(i) /= m.row(i).sum();
  }
  return m;
}

void print_vector(std::ostream& out, const char* label, const Vector& v) {
  out << label << ':';
  for (Eigen::Index i = 0; i < v.size(); ++i) out << ' ' << format_double(v[i]);
  out << '\n';
}

}  // namespace

OracleReport run_oracle(const OracleInputs& in) {
  if (in.features.n_states() != in.mdp.n_states() || in.target.n_states() != in.mdp.n_states() ||
      in.behavior.n_states() != in.mdp.n_states() || in.target.n_actions() != in.mdp.n_actions() ||
      in.behavior.n_actions() != in.mdp.n_actions()) {
    throw ShapeError("run_oracle: MDP, policies and features disagree on sizes");
  }
  const InducedChain chain = induce_chain(in.mdp, in.target);
  const InducedChain behavior_chain = induce_chain(in.mdp, in.behavior);
  const StateDistribution xi = stationary_distribution(behavior_chain.p_pi);
  const EvaluationContext ctx = make_tabular_context(chain, xi, in.features);

  OracleReport rep;
  rep.v_true = ctx.v_true;
  rep.xi = xi.weights();
  rep.theta_star = orthogonal_projection_theta(rep.v_true, xi, in.features);
  rep.mse_star = mse(rep.theta_star, ctx);
  rep.on_policy = in.target.probs() == in.behavior.probs();

  for (ProjectionKind kind : {ProjectionKind::kTD, ProjectionKind::kRG, ProjectionKind::kOptimal}) {
    rep.projections.push_back(
        evaluate(to_string(kind), canonical_x(kind, chain, xi, in.features), chain, in.features, ctx));
  }

  const Vector omega = solve_diagonal_omega(chain, xi, in.features);
  const Matrix xi_phi = xi.weights().asDiagonal() * in.features.matrix();
  rep.projections.push_back(
      evaluate("diag_omega", omega.asDiagonal() * xi_phi, chain, in.features, ctx));

  const Vector v_star = in.features.matrix() * rep.theta_star;
  rep.tvr_rhs = weighted_norm(rep.v_true - v_star, xi) * td_error_bound_factor(chain.gamma);
  const ProjectionReport& td = rep.projections.front();
  rep.tvr_lhs = td.theta ? weighted_norm(rep.v_true - td.v_hat, xi)
                         : std::numeric_limits<double>::quiet_NaN();

  rep.omega_objective_optimal = diagonal_omega_objective(omega, chain, xi, in.features);
  rep.omega_objective_td =
      diagonal_omega_objective(Vector::Ones(static_cast<Eigen::Index>(chain.n_states())), chain, xi,
                               in.features);
  rep.omega_objective_o2td =
      diagonal_omega_objective(per_state_o2td_omega(chain, in.features), chain, xi, in.features);
  return rep;
}

void print_oracle(std::ostream& out, const OracleReport& rep) {
  print_vector(out, "V", rep.v_true);
  print_vector(out, "xi", rep.xi);
  print_vector(out, "theta_star", rep.theta_star);
  out << "mse_star: " << format_double(rep.mse_star) << '\n';
  for (const ProjectionReport& p : rep.projections) {
    out << '\n' << "[" << p.name << "]\n";
    if (!p.theta) {
      out << "singular: X^T Delta is not invertible\n";
      continue;
    }
    print_vector(out, "theta", *p.theta);
    print_vector(out, "v_hat", p.v_hat);
    out << "mse: " << format_double(p.mse) << '\n';
    out << "mspbe: " << format_double(p.mspbe) << '\n';
  }
  out << '\n' << "[bound]\n";
  out << "td_error: " << format_double(rep.tvr_lhs) << '\n';
  out << "bound: " << format_double(rep.tvr_rhs) << '\n';
  out << "on_policy: " << (rep.on_policy ? "yes" : "no") << '\n';
  out << '\n' << "[omega_objective]\n";
  out << "optimal: " << format_double(rep.omega_objective_optimal) << '\n';
  out << "ones: " << format_double(rep.omega_objective_td) << '\n';
  out << "o2td: " << format_double(rep.omega_objective_o2td) << '\n';
}

OracleInputs random_oracle_inputs(std::size_t n_states, std::size_t n_actions, std::uint64_t seed,
                                  std::size_t dim) {
  if (n_states == 0 || n_actions == 0 || dim == 0) {
    throw ConfigError("random MDP needs n_states, n_actions and dim >= 1");
  }
  if (dim > n_states) throw ConfigError("random MDP: dim must not exceed n_states");
  Rng rng(seed);
  std::vector<Matrix> kernels;
  for (std::size_t a = 0; a < n_actions; ++a) kernels.push_back(random_stochastic(rng, n_states, n_states));
  Matrix reward(n_states, n_actions);
  for (Eigen::Index i = 0; i < reward.size(); ++i) reward.data()[i] = rng.uniform();
  Policy target(random_stochastic(rng, n_states, n_actions));
  Matrix phi(n_states, dim);
  for (Eigen::Index i = 0; i < phi.size(); ++i) phi.data()[i] = rng.uniform(-1.0, 1.0);
  return OracleInputs{TabularMDP(std::move(kernels), std::move(reward), 0.9), std::move(target),
                      Policy::uniform(n_states, n_actions), FeatureMap(std::move(phi))};
}

}  // namespace oblique
