#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "oblique/mdp.hpp"
#include "oblique/types.hpp"

namespace oblique {

struct OracleInputs {
  TabularMDP mdp;
  Policy target;
  Policy behavior;
  FeatureMap features;
};

struct ProjectionReport {
  std::string name;
  std::optional<Vector> theta;  // empty when XᵀΔ is singular
  Vector v_hat;
  double mse = 0.0;
  double mspbe = 0.0;
};

struct OracleReport {
  Vector v_true;
  Vector xi;
  Vector theta_star;  // ξ-weighted orthogonal projection coefficients
  double mse_star = 0.0;
  std::vector<ProjectionReport> projections;  // TD, RG, optimal, diagonal-Ω
  // ‖V − v̂_TD‖_ξ ≤ ‖V − ΠV‖_ξ / sqrt(1 − γ²); guaranteed only on-policy.
  double tvr_lhs = 0.0;
  double tvr_rhs = 0.0;
  bool on_policy = false;
  // ½‖Δᵀ diag(ω) ΞΦ − C‖²_F at the optimum, at ω ≡ 1 (plain TD), and at the
  // per-state O²TD weights.
  double omega_objective_optimal = 0.0;
  double omega_objective_td = 0.0;
  double omega_objective_o2td = 0.0;
};

/// ξ is the stationary distribution of the behavior chain. Raises
/// NonErgodicError when it does not exist.
OracleReport run_oracle(const OracleInputs& inputs);

void print_oracle(std::ostream& out, const OracleReport& report);

/// Random instance: Dirichlet-like kernels, U[0,1] rewards, random target
/// policy, uniform behavior, U[-1,1] features with d = `dim` columns.
OracleInputs random_oracle_inputs(std::size_t n_states, std::size_t n_actions, std::uint64_t seed,
                                  std::size_t dim = 5);

}  // namespace oblique
