#pragma once

#include "oblique/mdp.hpp"
#include "oblique/types.hpp"

namespace oblique {

/// Oblique projection Π_Φ^X = Φ(XᵀΦ)⁻¹Xᵀ: onto span(Φ), orthogonal to span(X).
class ObliqueProjector {
 public:
  /// Throws ShapeError on mismatched shapes and SingularMatrixError when the
  /// condition estimate of XᵀΦ exceeds kMaxCondition.
  ObliqueProjector(Matrix phi, Matrix x);

  Vector apply(const Vector& v) const;
  /// Coefficients θ with apply(v) = Φθ.
  Vector coefficients(const Vector& v) const;

  const Matrix& phi() const { return phi_; }
  const Matrix& x() const { return x_; }
  double condition() const { return condition_; }

 private:
  Matrix phi_;
  Matrix x_;
  Eigen::PartialPivLU<Matrix> lu_;
  double condition_;
};

enum class ProjectionKind { kTD, kRG, kOptimal };

const char* to_string(ProjectionKind kind);

/// The canonical projection directions: X_TD = ΞΦ, X_RG = ΞL^πΦ, and the
/// optimal X* = (L^πᵀ)⁻¹ΞΦ obtained by solving L^πᵀX = ΞΦ.
Matrix canonical_x(ProjectionKind kind, const InducedChain& chain, const StateDistribution& xi,
                   const FeatureMap& phi);

struct FixedPointSolution {
  Vector theta;
  Vector v_hat;
};

/// Solution of v̂ = Π_Φ^X T v̂: θ = (XᵀΔ)⁻¹XᵀR^π with Δ = L^πΦ.
FixedPointSolution fixed_point_theta(const Matrix& x, const InducedChain& chain,
                                     const FeatureMap& phi);

/// ξ-weighted least-squares coefficients θ* = (ΦᵀΞΦ)⁻¹ΦᵀΞv, so Φθ* = Πv.
Vector orthogonal_projection_theta(const Vector& v, const StateDistribution& xi,
                                   const FeatureMap& phi);

/// ‖v‖_ξ = sqrt(Σ ξ(s) v(s)²).
double weighted_norm(const Vector& v, const StateDistribution& xi);

/// Factor 1/sqrt(1 − γ²) bounding ‖V − v̂_TD‖_ξ by ‖V − ΠV‖_ξ when ξ is
/// the on-policy stationary distribution.
double td_error_bound_factor(double gamma);

}  // namespace oblique
