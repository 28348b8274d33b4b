#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "oblique/mdp.hpp"
#include "oblique/types.hpp"

namespace oblique {

enum class LearnerKind { kO2TD, kETD, kGTD2, kTD0, kRG };

std::string_view to_string(LearnerKind kind);
/// Parses "o2td", "etd", "gtd2", "td0", "rg"; throws ConfigError otherwise.
LearnerKind parse_learner_kind(std::string_view name);

/// Divergence guard: any |θ_i| above this (or a non-finite value) halts a learner.
inline constexpr double kDivergenceThreshold = 1e12;
/// Samples with ‖Δφ‖² below this are skipped by O²TD.
inline constexpr double kDegenerateDeltaPhi = 1e-12;

struct LearnerParams {
  LearnerKind kind = LearnerKind::kTD0;
  double alpha = 0.01;
  // GTD2 secondary step size; 0 means "same as alpha".
  double beta = 0.0;
  double gamma = 0.0;
  // ETD only: accept streams whose samples do not chain (s_t ≠ s′_{t−1}).
  bool allow_nonsequential = false;

  double effective_beta() const { return beta > 0.0 ? beta : alpha; }
};

struct LearnerState {
  Vector theta;
  Vector aux;                // GTD2's y; empty for other learners
  double follow_on = 1.0;    // ETD's F_t
  double prev_rho = 0.0;     // ρ_{t−1}, feeds the follow-on recursion
  std::size_t step = 0;      // samples consumed
  bool diverged = false;
  std::optional<std::size_t> diverged_at;
  std::optional<State> expected_next;  // s′ of the previous sample
  bool after_terminal = false;

  static LearnerState initial(LearnerKind kind, Vector theta0);
};

struct StepRecord {
  double delta = 0.0;
  double omega = 0.0;     // O²TD's ω_i; 0 for other learners
  bool skipped = false;   // discarded sample (ρ = 0 or degenerate Δφ)
  bool diverged = false;  // this step tripped the divergence guard
};

/// ω_i = Δφᵀφ / (ρ Δφᵀ Δφ): the minimizer of ‖ωρΔφ − φ‖². Throws
/// DegenerateSampleError when ‖Δφ‖² < kDegenerateDeltaPhi and
/// std::invalid_argument for ρ ≤ 0.
double o2td_omega(std::span<const double> phi, std::span<const double> delta_phi, double rho);
double o2td_omega(const Vector& phi, const Vector& delta_phi, double rho);

// Single-sample updates. Each mutates `state` in place and reports what it did.
// A diverged state ignores further samples.

/// θ ← θ + αρωδφ.
StepRecord o2td_step(LearnerState& state, const LearnerParams& params, const Sample& sample);

/// F_t = 1 + γρ_{t−1}F_{t−1} (F_0 = 1, reset after episode ends), then θ ← θ + αFρδφ.
/// Throws ContractError when the stream is not sequential, unless
/// params.allow_nonsequential is set.
StepRecord etd_step(LearnerState& state, const LearnerParams& params, const Sample& sample);

/// y ← y + β(ρδ − φᵀy)φ;  θ ← θ + αρ(φ − γφ′)(φᵀy), both from pre-step values.
StepRecord gtd2_step(LearnerState& state, const LearnerParams& params, const Sample& sample);

/// TD(0): θ ← θ + αρδφ.  RG: θ ← θ − αρδ(γφ′ − φ).
StepRecord baseline_step(LearnerKind kind, LearnerState& state, const LearnerParams& params,
                         const Sample& sample);

/// Dispatches to the update for params.kind.
StepRecord learner_step(LearnerState& state, const LearnerParams& params, const Sample& sample);

class Learner {
 public:
  Learner(LearnerParams params, Vector theta0);

  StepRecord step(const Sample& sample) { return learner_step(state_, params_, sample); }

  const LearnerParams& params() const { return params_; }
  const LearnerState& state() const { return state_; }
  const Vector& theta() const { return state_.theta; }

 private:
  LearnerParams params_;
  LearnerState state_;
};

}  // namespace oblique
