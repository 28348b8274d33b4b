#include "oblique/batch.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "oblique/errors.hpp"
#include "oblique/learners.hpp"
#include "oblique/linalg.hpp"

namespace oblique {

AggregatedModel aggregate(std::span<const Sample> samples, double gamma) {
  if (samples.empty()) throw std::invalid_argument("aggregate: need at least one sample");
  const Eigen::Index d = samples.front().phi.size();
  std::map<std::size_t, std::size_t> index_of;
  for (const Sample& s : samples) {
    if (!s.is_tabular()) throw UnsupportedOperation("aggregate: samples must carry tabular state ids");
    if (s.phi.size() != d || s.phi_next.size() != d) throw ShapeError("aggregate: feature length mismatch");
    index_of.emplace(s.state_id(), 0);
  }
  AggregatedModel model;
  model.states.reserve(index_of.size());
  for (auto& [state, idx] : index_of) {
    idx = model.states.size();
    model.states.push_back(state);
  }
  const auto m = static_cast<Eigen::Index>(model.states.size());
  model.delta_hat = Matrix::Zero(m, d);
  model.r_hat = Vector::Zero(m);
  model.c_hat = Matrix::Zero(d, d);
  model.counts.assign(model.states.size(), 0);
  model.n_samples = samples.size();
  for (const Sample& s : samples) {
    const std::size_t j = index_of.at(s.state_id());
    const auto row = static_cast<Eigen::Index>(j);
    model.delta_hat.row(row) += s.rho * (s.phi - gamma * s.phi_next).transpose();
    model.r_hat[row] += s.rho * s.r;
    model.c_hat.selfadjointView<Eigen::Lower>().rankUpdate(s.phi);
    model.counts[j] += 1;
  }
  for (Eigen::Index j = 0; j < m; ++j) {
    const double inv = 1.0 / static_cast<double>(model.counts[static_cast<std::size_t>(j)]);
    model.delta_hat.row(j) *= inv;
    model.r_hat[j] *= inv;
  }
  model.c_hat = model.c_hat.selfadjointView<Eigen::Lower>();
  model.c_hat /= static_cast<double>(samples.size());
  return model;
}

Matrix nesterov_least_squares(const Matrix& a, const Matrix& b, const Matrix& x0,
                              const GradientOptions& options, SolveReport& report) {
  if (a.rows() != b.rows() || x0.rows() != a.cols() || x0.cols() != b.cols()) {
    throw ShapeError("nesterov_least_squares: inconsistent shapes");
  }
  report = SolveReport{};
  const Matrix at = a.transpose();
  auto objective = [&](const Matrix& x) { return 0.5 * (a * x - b).squaredNorm(); };

  Matrix x = x0;
  Matrix gradient = at * (a * x - b);
  report.gradient_norm = gradient.norm();
  if (options.record_objective) report.objective_trace.push_back(objective(x));
  if (report.gradient_norm < options.tolerance) return x;

  const double lipschitz = largest_gram_eigenvalue(a);
  if (!(lipschitz > 0.0)) return x;  // A = 0: every X is a minimizer
  const double step = 1.0 / lipschitz;

  Matrix y = x;
  Matrix x_prev = x;
  double t = 1.0;
  report.converged = false;
  for (std::size_t k = 1; k <= options.max_iterations; ++k) {
    const Matrix grad_y = at * (a * y - b);
    x_prev.swap(x);
    x = y - step * grad_y;
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = x + ((t - 1.0) / t_next) * (x - x_prev);
    t = t_next;

    gradient = at * (a * x - b);
    report.gradient_norm = gradient.norm();
    report.iterations = k;
    if (options.record_objective) report.objective_trace.push_back(objective(x));
    if (!std::isfinite(report.gradient_norm)) break;
    if (report.gradient_norm < options.tolerance) {
      report.converged = true;
      break;
    }
  }
  return x;
}

StageOneResult sotd_solve_x(const AggregatedModel& model, const GradientOptions& options) {
  const Matrix& delta = model.delta_hat;
  StageOneResult out;
  const Matrix normal = delta * delta.transpose();  // m×m
  if (condition_estimate(normal) < kMaxCondition) {
    out.x_hat = solve(normal, Matrix(delta * model.c_hat), "sotd_solve_x: Delta Delta^T");
    out.report.closed_form = true;
    out.report.gradient_norm = (delta * (delta.transpose() * out.x_hat - model.c_hat)).norm();
    return out;
  }
  // Each column of X is an independent least-squares problem against Δ̂ᵀ;
  // solving them jointly runs the same iteration on all columns at once.
  const Matrix zero = Matrix::Zero(delta.rows(), model.c_hat.cols());
  out.x_hat = nesterov_least_squares(delta.transpose(), model.c_hat, zero, options, out.report);
  return out;
}

StageTwoResult sotd_solve_theta(const Matrix& x_hat, const AggregatedModel& model,
                                const GradientOptions& options) {
  if (x_hat.rows() != model.delta_hat.rows() || x_hat.cols() != model.delta_hat.cols()) {
    throw ShapeError("sotd_solve_theta: x_hat must be m x d like delta_hat");
  }
  const Matrix system = x_hat.transpose() * model.delta_hat;  // d×d
  const Vector rhs = x_hat.transpose() * model.r_hat;
  StageTwoResult out;
  if (condition_estimate(system) < kMaxCondition) {
    out.theta = solve(system, rhs, "sotd_solve_theta: X^T Delta");
    out.report.closed_form = true;
    out.report.gradient_norm = (system.transpose() * (system * out.theta - rhs)).norm();
    return out;
  }
  const Matrix theta = nesterov_least_squares(system, rhs, Matrix::Zero(system.cols(), 1), options,
                                              out.report);
  out.theta = theta.col(0);
  return out;
}

SOTDResult sotd(std::span<const Sample> samples, double gamma, const GradientOptions& options) {
  SOTDResult out;
  out.model = aggregate(samples, gamma);
  StageOneResult one = sotd_solve_x(out.model, options);
  StageTwoResult two = sotd_solve_theta(one.x_hat, out.model, options);
  out.x_hat = std::move(one.x_hat);
  out.theta = std::move(two.theta);
  out.stage1_residual = (out.model.delta_hat.transpose() * out.x_hat - out.model.c_hat).norm();
  out.stage2_residual =
      (out.x_hat.transpose() * (out.model.delta_hat * out.theta - out.model.r_hat)).norm();
  out.converged = one.report.converged && two.report.converged;
  return out;
}

Vector lstd(std::span<const Sample> samples, double gamma, double ridge) {
  if (samples.empty()) throw std::invalid_argument("lstd: need at least one sample");
  if (ridge < 0.0) throw std::invalid_argument("lstd: ridge must be nonnegative");
  const Eigen::Index d = samples.front().phi.size();
  Matrix a = Matrix::Zero(d, d);
  Vector b = Vector::Zero(d);
  for (const Sample& s : samples) {
    if (s.phi.size() != d || s.phi_next.size() != d) throw ShapeError("lstd: feature length mismatch");
    a.noalias() += s.rho * s.phi * (s.phi - gamma * s.phi_next).transpose();
    b += (s.rho * s.r) * s.phi;
  }
  const double inv_n = 1.0 / static_cast<double>(samples.size());
  a *= inv_n;
  b *= inv_n;
  a.diagonal().array() += ridge;
  return solve(a, b, "lstd: A");
}

namespace {

// Column s is vec(ξ_s Δ_s φ_sᵀ), so the objective is ½‖Mω − vec(C)‖².
Matrix omega_design(const InducedChain& chain, const StateDistribution& xi, const FeatureMap& phi,
                    Vector& target) {
  if (chain.n_states() != xi.size() || phi.n_states() != xi.size()) {
    throw ShapeError("diagonal omega: chain, distribution and features disagree on |S|");
  }
  const Matrix& f = phi.matrix();
  const Matrix delta = chain.l_pi() * f;
  const Eigen::Index d = f.cols();
  const Eigen::Index n = f.rows();
  Matrix design(d * d, n);
  for (Eigen::Index s = 0; s < n; ++s) {
    const Matrix outer = xi[static_cast<std::size_t>(s)] * delta.row(s).transpose() * f.row(s);
    design.col(s) = outer.reshaped();
  }
  const Matrix c = f.transpose() * xi.weights().asDiagonal() * f;
  target = c.reshaped();
  return design;
}

}  // namespace

double diagonal_omega_objective(const Vector& omega, const InducedChain& chain,
                                const StateDistribution& xi, const FeatureMap& phi) {
  if (static_cast<std::size_t>(omega.size()) != xi.size()) throw ShapeError("diagonal omega: length");
  Vector target;
  const Matrix design = omega_design(chain, xi, phi, target);
  return 0.5 * (design * omega - target).squaredNorm();
}

Vector solve_diagonal_omega(const InducedChain& chain, const StateDistribution& xi,
                            const FeatureMap& phi) {
  Vector target;
  const Matrix design = omega_design(chain, xi, phi, target);
  return Eigen::CompleteOrthogonalDecomposition<Matrix>(design).solve(target);
}

Vector per_state_o2td_omega(const InducedChain& chain, const FeatureMap& phi) {
  if (chain.n_states() != phi.n_states()) throw ShapeError("per_state_o2td_omega: |S| mismatch");
  const Matrix delta = chain.l_pi() * phi.matrix();
  Vector omega = Vector::Zero(delta.rows());
  for (Eigen::Index s = 0; s < delta.rows(); ++s) {
    const double nn = delta.row(s).squaredNorm();
    if (nn >= kDegenerateDeltaPhi) omega[s] = delta.row(s).dot(phi.matrix().row(s)) / nn;
  }
  return omega;
}

}  // namespace oblique
