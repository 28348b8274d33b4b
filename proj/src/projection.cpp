#include "oblique/projection.hpp"

#include <cmath>
#include <limits>

#include "oblique/errors.hpp"
#include "oblique/linalg.hpp"

namespace oblique {

ObliqueProjector::ObliqueProjector(Matrix phi, Matrix x) : phi_(std::move(phi)), x_(std::move(x)) {
  if (phi_.rows() != x_.rows() || phi_.cols() != x_.cols()) {
    throw ShapeError("ObliqueProjector: X must have the same shape as Phi");
  }
  const Matrix xt_phi = x_.transpose() * phi_;
  condition_ = condition_estimate(xt_phi);
  if (!(condition_ <= kMaxCondition)) {
    throw SingularMatrixError("ObliqueProjector: X^T Phi is singular", condition_);
  }
  lu_.compute(xt_phi);
}

Vector ObliqueProjector::coefficients(const Vector& v) const {
  if (v.size() != phi_.rows()) throw ShapeError("ObliqueProjector: vector length mismatch");
  return lu_.solve(x_.transpose() * v);
}

Vector ObliqueProjector::apply(const Vector& v) const { return phi_ * coefficients(v); }

const char* to_string(ProjectionKind kind) {
  switch (kind) {
    case ProjectionKind::kTD: return "TD";
    case ProjectionKind::kRG: return "RG";
    case ProjectionKind::kOptimal: return "optimal";
  }
  return "?";
}

Matrix canonical_x(ProjectionKind kind, const InducedChain& chain, const StateDistribution& xi,
                   const FeatureMap& phi) {
  if (chain.n_states() != xi.size() || phi.n_states() != xi.size()) {
    throw ShapeError("canonical_x: chain, distribution and features disagree on |S|");
  }
  const Matrix xi_phi = xi.weights().asDiagonal() * phi.matrix();
  switch (kind) {
    case ProjectionKind::kTD:
      return xi_phi;
    case ProjectionKind::kRG:
      return xi.weights().asDiagonal() * (chain.l_pi() * phi.matrix());
    case ProjectionKind::kOptimal:
      return solve(Matrix(chain.l_pi().transpose()), xi_phi, "canonical_x: L^T X = Xi Phi");
  }
  throw std::invalid_argument("canonical_x: unknown projection kind");
}

FixedPointSolution fixed_point_theta(const Matrix& x, const InducedChain& chain,
                                     const FeatureMap& phi) {
  if (x.rows() != phi.matrix().rows() || x.cols() != phi.matrix().cols() ||
      chain.n_states() != phi.n_states()) {
    throw ShapeError("fixed_point_theta: X, Phi and the chain must agree in shape");
  }
  const Matrix delta = chain.l_pi() * phi.matrix();
  FixedPointSolution out;
  out.theta = solve(Matrix(x.transpose() * delta), Vector(x.transpose() * chain.r_pi),
                    "fixed_point_theta: X^T Delta");
  out.v_hat = phi.matrix() * out.theta;
  return out;
}

Vector orthogonal_projection_theta(const Vector& v, const StateDistribution& xi,
                                   const FeatureMap& phi) {
  if (v.size() != phi.matrix().rows() || xi.size() != phi.n_states()) {
    throw ShapeError("orthogonal_projection_theta: length mismatch");
  }
  const Matrix weighted = xi.weights().asDiagonal() * phi.matrix();
  return solve(Matrix(phi.matrix().transpose() * weighted), Vector(weighted.transpose() * v),
               "orthogonal_projection_theta: Phi^T Xi Phi");
}

double weighted_norm(const Vector& v, const StateDistribution& xi) {
  if (static_cast<std::size_t>(v.size()) != xi.size()) throw ShapeError("weighted_norm: length mismatch");
  return std::sqrt(xi.weights().dot(v.cwiseAbs2()));
}

double td_error_bound_factor(double gamma) { return 1.0 / std::sqrt(1.0 - gamma * gamma); }

}  // namespace oblique
