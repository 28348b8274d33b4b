#include "oblique/learners.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "oblique/errors.hpp"
#include "oblique/kernels.hpp"

namespace oblique {

namespace {

std::span<const double> view(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}
std::span<double> view(Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

void check_sample(const LearnerState& state, const Sample& sample) {
  if (sample.phi.size() != state.theta.size() || sample.phi_next.size() != state.theta.size()) {
    throw ShapeError("learner: sample features have length " + std::to_string(sample.phi.size()) +
                     " but theta has " + std::to_string(state.theta.size()));
  }
  if (!(sample.rho >= 0.0)) throw std::invalid_argument("learner: importance ratio must be >= 0");
}

bool theta_ok(const Vector& theta) {
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    if (!(std::abs(theta[i]) <= kDivergenceThreshold)) return false;  // catches NaN too
  }
  return true;
}

// Bookkeeping shared by every learner once the update has been applied.
StepRecord finish(LearnerState& state, const Sample& sample, StepRecord record) {
  state.step += 1;
  state.expected_next = sample.s_next;
  state.after_terminal = sample.terminal;
  state.prev_rho = sample.rho;
  if (!record.diverged && (!std::isfinite(record.delta) || !theta_ok(state.theta) ||
                           (state.aux.size() > 0 && !theta_ok(state.aux)))) {
    record.diverged = true;
  }
  if (record.diverged) {
    state.diverged = true;
    state.diverged_at = state.step;
  }
  return record;
}

StepRecord halted() {
  StepRecord r;
  r.skipped = true;
  return r;
}

double omega_from_moments(double dphi_phi, double dphi_dphi, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("o2td_omega: rho must be positive");
  if (!(dphi_dphi >= kDegenerateDeltaPhi)) {
    throw DegenerateSampleError("o2td_omega: |delta_phi|^2 is below the degeneracy threshold");
  }
  return dphi_phi / (rho * dphi_dphi);
}

}  // namespace

std::string_view to_string(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::kO2TD: return "o2td";
    case LearnerKind::kETD: return "etd";
    case LearnerKind::kGTD2: return "gtd2";
    case LearnerKind::kTD0: return "td0";
    case LearnerKind::kRG: return "rg";
  }
  return "unknown";
}

LearnerKind parse_learner_kind(std::string_view name) {
  for (LearnerKind k : {LearnerKind::kO2TD, LearnerKind::kETD, LearnerKind::kGTD2,
                        LearnerKind::kTD0, LearnerKind::kRG}) {
    if (name == to_string(k)) return k;
  }
  throw ConfigError("unknown learner kind '" + std::string(name) +
                    "' (expected o2td, etd, gtd2, td0 or rg)");
}

LearnerState LearnerState::initial(LearnerKind kind, Vector theta0) {
  LearnerState s;
  if (kind == LearnerKind::kGTD2) s.aux = Vector::Zero(theta0.size());
  s.theta = std::move(theta0);
  return s;
}

double o2td_omega(std::span<const double> phi, std::span<const double> delta_phi, double rho) {
  if (phi.size() != delta_phi.size()) throw ShapeError("o2td_omega: length mismatch");
  return omega_from_moments(kernels::dot(delta_phi, phi), kernels::dot(delta_phi, delta_phi), rho);
}

double o2td_omega(const Vector& phi, const Vector& delta_phi, double rho) {
  return o2td_omega(view(phi), view(delta_phi), rho);
}

StepRecord o2td_step(LearnerState& state, const LearnerParams& params, const Sample& sample) {
  if (state.diverged) return halted();
  check_sample(state, sample);
  const double gamma = params.gamma;
  const auto m = kernels::td_moments(view(sample.phi), view(sample.phi_next), view(state.theta), gamma);
  StepRecord rec;
  rec.delta = sample.r + gamma * m.next_theta - m.phi_theta;
  if (sample.rho == 0.0) {
    rec.skipped = true;
    return finish(state, sample, rec);
  }
  // Δφ = ρu, so Δφᵀφ = ρ·uᵀφ and ΔφᵀΔφ = ρ²·uᵀu.
  const double rho = sample.rho;
  const double dphi_dphi = rho * rho * m.u_u;
  if (!(dphi_dphi >= kDegenerateDeltaPhi)) {
    rec.skipped = true;
    return finish(state, sample, rec);
  }
  rec.omega = omega_from_moments(rho * m.u_phi, dphi_dphi, rho);
  if (!std::isfinite(rec.omega)) {
    rec.diverged = true;
    return finish(state, sample, rec);
  }
  kernels::axpy(params.alpha * rho * rec.omega * rec.delta, view(sample.phi), view(state.theta));
  return finish(state, sample, rec);
}

StepRecord etd_step(LearnerState& state, const LearnerParams& params, const Sample& sample) {
  if (state.diverged) return halted();
  check_sample(state, sample);
  if (!params.allow_nonsequential && state.expected_next && !state.after_terminal &&
      *state.expected_next != sample.s) {
    throw ContractError("etd_step: sample " + std::to_string(state.step) +
                        " does not start where the previous transition ended; "
                        "ETD requires a sequential sample stream");
  }
  if (state.step == 0 || state.after_terminal) {
    state.follow_on = 1.0;
  } else {
    state.follow_on = 1.0 + params.gamma * state.prev_rho * state.follow_on;
  }
  const auto m = kernels::td_moments(view(sample.phi), view(sample.phi_next), view(state.theta),
                                     params.gamma);
  StepRecord rec;
  rec.delta = sample.r + params.gamma * m.next_theta - m.phi_theta;
  kernels::axpy(params.alpha * state.follow_on * sample.rho * rec.delta, view(sample.phi),
                view(state.theta));
  return finish(state, sample, rec);
}

StepRecord gtd2_step(LearnerState& state, const LearnerParams& params, const Sample& sample) {
  if (state.diverged) return halted();
  check_sample(state, sample);
  if (state.aux.size() != state.theta.size()) state.aux = Vector::Zero(state.theta.size());
  const double gamma = params.gamma;
  const auto m = kernels::td_moments(view(sample.phi), view(sample.phi_next), view(state.theta), gamma);
  StepRecord rec;
  rec.delta = sample.r + gamma * m.next_theta - m.phi_theta;
  const double phi_y = kernels::dot(view(sample.phi), view(state.aux));
  // θ uses the pre-step y, so update θ first.
  const double scale = params.alpha * sample.rho * phi_y;
  kernels::axpy(scale, view(sample.phi), view(state.theta));
  kernels::axpy(-scale * gamma, view(sample.phi_next), view(state.theta));
  kernels::axpy(params.effective_beta() * (sample.rho * rec.delta - phi_y), view(sample.phi),
                view(state.aux));
  return finish(state, sample, rec);
}

StepRecord baseline_step(LearnerKind kind, LearnerState& state, const LearnerParams& params,
                         const Sample& sample) {
  if (kind != LearnerKind::kTD0 && kind != LearnerKind::kRG) {
    throw std::invalid_argument("baseline_step: kind must be td0 or rg");
  }
  if (state.diverged) return halted();
  check_sample(state, sample);
  const double gamma = params.gamma;
  const auto m = kernels::td_moments(view(sample.phi), view(sample.phi_next), view(state.theta), gamma);
  StepRecord rec;
  rec.delta = sample.r + gamma * m.next_theta - m.phi_theta;
  const double scale = params.alpha * sample.rho * rec.delta;
  kernels::axpy(scale, view(sample.phi), view(state.theta));
  if (kind == LearnerKind::kRG) {
    kernels::axpy(-scale * gamma, view(sample.phi_next), view(state.theta));
  }
  return finish(state, sample, rec);
}

StepRecord learner_step(LearnerState& state, const LearnerParams& params, const Sample& sample) {
  switch (params.kind) {
    case LearnerKind::kO2TD: return o2td_step(state, params, sample);
    case LearnerKind::kETD: return etd_step(state, params, sample);
    case LearnerKind::kGTD2: return gtd2_step(state, params, sample);
    case LearnerKind::kTD0:
    case LearnerKind::kRG: return baseline_step(params.kind, state, params, sample);
  }
  throw std::invalid_argument("learner_step: unknown learner kind");
}

Learner::Learner(LearnerParams params, Vector theta0)
    : params_(params), state_(LearnerState::initial(params.kind, std::move(theta0))) {
  if (!(params_.alpha > 0.0)) throw std::invalid_argument("Learner: alpha must be positive");
  if (params_.beta < 0.0) throw std::invalid_argument("Learner: beta must be nonnegative");
  if (!(params_.gamma >= 0.0 && params_.gamma < 1.0)) {
    throw std::invalid_argument("Learner: gamma must lie in [0, 1)");
  }
}

}  // namespace oblique
