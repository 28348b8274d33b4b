#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "oblique/mdp.hpp"
#include "oblique/types.hpp"

namespace oblique {

/// Per-state conditional means of a tabular sample set.
///
/// Row j of delta_hat is the mean of ρ_i(φ_i − γφ′_i) over samples with
/// s_i = states[j]; r_hat[j] is the mean of ρ_i·r_i over the same samples;
/// c_hat = (1/n)Σφ_iφ_iᵀ over all samples (unweighted).
struct AggregatedModel {
  std::vector<std::size_t> states;
  Matrix delta_hat;
  Vector r_hat;
  Matrix c_hat;
  std::vector<std::size_t> counts;
  std::size_t n_samples = 0;

  std::size_t m() const { return states.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(c_hat.rows()); }
};

/// Throws UnsupportedOperation for continuous samples, std::invalid_argument
/// for an empty set, ShapeError for inconsistent feature lengths.
AggregatedModel aggregate(std::span<const Sample> samples, double gamma);

struct GradientOptions {
  double tolerance = 1e-9;            // stop when the gradient's Frobenius norm is below
  std::size_t max_iterations = 100000;
  bool record_objective = false;      // keep the objective value of every iterate
};

struct SolveReport {
  bool closed_form = false;
  bool converged = true;
  std::size_t iterations = 0;
  double gradient_norm = 0.0;
  std::vector<double> objective_trace;
};

/// min_X ½‖AX − B‖²_F by Nesterov's accelerated gradient from X = x0 with
/// step 1/L (L = λ_max(AᵀA), power iteration) and momentum schedule
/// t_{k+1} = (1 + √(1 + 4t_k²))/2, no restarts.
Matrix nesterov_least_squares(const Matrix& a, const Matrix& b, const Matrix& x0,
                              const GradientOptions& options, SolveReport& report);

struct StageOneResult {
  Matrix x_hat;
  SolveReport report;
};

/// X̂ = argmin ½‖Δ̂ᵀX − Ĉ‖²_F. Closed form (Δ̂Δ̂ᵀ)⁻¹Δ̂Ĉ when Δ̂Δ̂ᵀ is
/// well-conditioned, otherwise accelerated gradient from X = 0.
StageOneResult sotd_solve_x(const AggregatedModel& model, const GradientOptions& options = {});

struct StageTwoResult {
  Vector theta;
  SolveReport report;
};

/// θ̂ = argmin ‖X̂ᵀ(Δ̂θ − R̂)‖₂². Closed form (X̂ᵀΔ̂)⁻¹X̂ᵀR̂ when X̂ᵀΔ̂ is
/// well-conditioned, otherwise accelerated gradient from θ = 0.
StageTwoResult sotd_solve_theta(const Matrix& x_hat, const AggregatedModel& model,
                                const GradientOptions& options = {});

struct SOTDResult {
  Matrix x_hat;
  Vector theta;
  double stage1_residual = 0.0;  // ‖Δ̂ᵀX̂ − Ĉ‖_F
  double stage2_residual = 0.0;  // ‖X̂ᵀ(Δ̂θ̂ − R̂)‖₂
  bool converged = true;
  AggregatedModel model;
};

/// Both stages of the state-aggregated batch estimator.
SOTDResult sotd(std::span<const Sample> samples, double gamma, const GradientOptions& options = {});

/// Off-policy LSTD: θ = (A + εI)⁻¹b with A = (1/n)Σρφ(φ − γφ′)ᵀ, b = (1/n)Σρrφ.
/// Throws SingularMatrixError when A + εI is numerically singular.
Vector lstd(std::span<const Sample> samples, double gamma, double ridge = 0.0);

/// ½‖Δᵀ diag(ω) ΞΦ − C‖²_F with Δ = L^πΦ and C = ΦᵀΞΦ.
double diagonal_omega_objective(const Vector& omega, const InducedChain& chain,
                                const StateDistribution& xi, const FeatureMap& phi);

/// Minimizer of diagonal_omega_objective over ω ∈ R^|S| (minimum-norm when
/// not unique). Exact-model oracle for small |S|.
Vector solve_diagonal_omega(const InducedChain& chain, const StateDistribution& xi,
                            const FeatureMap& phi);

/// Per-state rank-one weights ω(s) = Δ_sᵀφ_s / ‖Δ_s‖² from the exact rows of
/// Δ = L^πΦ (the expected-sample analogue of O²TD's ω_i with ρ folded in).
/// States with ‖Δ_s‖² below the degeneracy threshold get ω = 0.
Vector per_state_o2td_omega(const InducedChain& chain, const FeatureMap& phi);

}  // namespace oblique
