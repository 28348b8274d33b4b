#include "oblique/domain.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "oblique/errors.hpp"

namespace oblique {

namespace {

class TabularSequentialStream final : public SampleStream {
 public:
  TabularSequentialStream(const TabularDomain& d, const StateDistribution& start, std::uint64_t seed)
      : sampler_(d.mdp(), d.target(), d.behavior(), d.features(), seed) {
    sampler_.restart(start);
  }
  Sample next() override { return sampler_.next(); }

 private:
  TabularSampler sampler_;
};

class TabularIidStream final : public SampleStream {
 public:
  TabularIidStream(const TabularDomain& d, std::uint64_t seed)
      : sampler_(d.mdp(), d.target(), d.behavior(), d.features(), seed), xi_(d.xi()) {}
  Sample next() override { return sampler_.draw(xi_); }

 private:
  TabularSampler sampler_;
  const StateDistribution& xi_;
};

// Runs the evaluation policy; rewards −1, φ′ = 0 on reaching the goal.
class CarEpisodes {
 public:
  CarEpisodes(const FourierBasis& basis, std::uint64_t seed) : basis_(basis), rng_(seed) {
    state_ = mountain_car::sample_start(rng_);
  }

  Sample next() {
    if (episode_steps_ >= MountainCarDomain::kMaxEpisodeSteps) {
      throw NumericalError("mountain car: evaluation policy did not reach the goal");
    }
    const std::size_t action = mountain_car::energy_pumping_action(state_);
    const auto result = mountain_car::step(state_, action);
    Sample s;
    s.s = state_;
    s.a = action;
    s.r = result.reward;
    s.s_next = result.next;
    s.phi = basis_(state_);
    s.phi_next = result.done ? Vector::Zero(static_cast<Eigen::Index>(basis_.dim())) : basis_(result.next);
    s.rho = 1.0;
    s.terminal = result.done;
    ++episode_steps_;
    if (result.done) {
      state_ = mountain_car::sample_start(rng_);
      episode_steps_ = 0;
    } else {
      state_ = result.next;
    }
    return s;
  }

 private:
  const FourierBasis& basis_;
  Rng rng_;
  mountain_car::CarState state_{};
  std::size_t episode_steps_ = 0;
};

class CarSequentialStream final : public SampleStream {
 public:
  CarSequentialStream(const FourierBasis& basis, std::uint64_t seed) : episodes_(basis, seed) {}
  Sample next() override { return episodes_.next(); }

 private:
  CarEpisodes episodes_;
};

// Draws uniformly, with replacement, from a pool of collected transitions.
class CarIidStream final : public SampleStream {
 public:
  CarIidStream(const FourierBasis& basis, std::size_t pool_size, std::uint64_t seed)
      : rng_(mix_seed(seed, 1)) {
    CarEpisodes episodes(basis, seed);
    pool_.reserve(pool_size);
    for (std::size_t i = 0; i < pool_size; ++i) pool_.push_back(episodes.next());
  }
  Sample next() override { return pool_[rng_.below(pool_.size())]; }

 private:
  std::vector<Sample> pool_;
  Rng rng_;
};

}  // namespace

TabularDomain::TabularDomain(std::string name, TabularMDP mdp, Policy behavior, Policy target,
                             FeatureMap features, StateDistribution start, Vector theta0)
    : name_(std::move(name)),
      mdp_(std::move(mdp)),
      behavior_(std::move(behavior)),
      target_(std::move(target)),
      features_(std::move(features)),
      start_(std::move(start)),
      xi_(stationary_distribution(induce_chain(mdp_, behavior_).p_pi)),
      theta0_(std::move(theta0)),
      context_(make_tabular_context(induce_chain(mdp_, target_), xi_, features_)) {
  if (static_cast<std::size_t>(theta0_.size()) != features_.dim()) {
    throw ShapeError("TabularDomain: initial theta length does not match the features");
  }
}

std::unique_ptr<SampleStream> TabularDomain::stream(SamplingMode mode, std::uint64_t seed) const {
  if (mode == SamplingMode::kSequential) {
    return std::make_unique<TabularSequentialStream>(*this, start_, seed);
  }
  return std::make_unique<TabularIidStream>(*this, seed);
}

MountainCarDomain::MountainCarDomain(const MountainCarSpec& spec) : spec_(spec), basis_(spec.order) {
  namespace mc = mountain_car;
  const std::size_t g = spec_.grid;
  auto cell_of = [g](const mc::CarState& s) {
    const auto x = mc::normalize(s);
    const auto ix = std::min<std::size_t>(g - 1, static_cast<std::size_t>(x[0] * static_cast<double>(g)));
    const auto iv = std::min<std::size_t>(g - 1, static_cast<std::size_t>(x[1] * static_cast<double>(g)));
    return ix * g + iv;
  };

  // Visitation pass: first state seen per cell and visit counts.
  std::map<std::size_t, std::pair<mc::CarState, std::size_t>> cells;
  std::size_t visits = 0;
  {
    CarEpisodes episodes(basis_, spec_.seed);
    std::size_t finished = 0;
    while (finished < spec_.visitation_episodes) {
      const Sample s = episodes.next();
      const auto& state = std::get<ContinuousState>(s.s);
      auto [it, inserted] = cells.try_emplace(cell_of(state), state, 0);
      it->second.second += 1;
      ++visits;
      if (s.terminal) ++finished;
    }
  }

  const auto n = static_cast<Eigen::Index>(cells.size());
  const auto d = static_cast<Eigen::Index>(basis_.dim());
  Matrix phi(n, d);
  Matrix next_phi(n, d);
  Vector reward(n);
  Vector weights(n);
  eval_states_.reserve(cells.size());
  Eigen::Index row = 0;
  for (const auto& [cell, entry] : cells) {
    const auto& [state, count] = entry;
    eval_states_.push_back(state);
    phi.row(row) = basis_(state).transpose();
    const auto step = mc::step(state, mc::energy_pumping_action(state));
    if (step.done) {
      next_phi.row(row).setZero();
    } else {
      next_phi.row(row) = basis_(step.next).transpose();
    }
    reward[row] = step.reward;
    weights[row] = static_cast<double>(count) / static_cast<double>(visits);
    ++row;
  }

  const Simulator<mc::CarState> simulate = [](const mc::CarState& s, Rng&) {
    const auto r = mc::step(s, mc::energy_pumping_action(s));
    return Outcome<mc::CarState>{r.next, r.reward, r.done};
  };
  const std::size_t horizon = default_horizon(spec_.gamma, 1.0);
  MonteCarloEstimate v = monte_carlo_value<mc::CarState>(
      simulate, eval_states_, spec_.mc_rollouts, horizon, spec_.gamma, mix_seed(spec_.seed, 7));
  value_std_error_ = std::move(v.std_error);
  context_ = make_evaluation_context(std::move(v.value), std::move(weights), std::move(phi),
                                     std::move(next_phi), std::move(reward), spec_.gamma);
}

std::unique_ptr<SampleStream> MountainCarDomain::stream(SamplingMode mode, std::uint64_t seed) const {
  if (mode == SamplingMode::kSequential) return std::make_unique<CarSequentialStream>(basis_, seed);
  return std::make_unique<CarIidStream>(basis_, spec_.dataset_size, seed);
}

std::unique_ptr<Domain> make_domain(const ExperimentConfig& config) {
  switch (config.domain) {
    case DomainKind::kBaird: {
      BairdDomain b = build_baird();
      const std::size_t n = b.mdp.n_states();
      return std::make_unique<TabularDomain>("baird", std::move(b.mdp), std::move(b.behavior),
                                             std::move(b.target), std::move(b.features),
                                             StateDistribution::uniform(n), std::move(b.theta0));
    }
    case DomainKind::kRandomMDP: {
      RandomMDPDomain r = build_random_mdp(config.random_mdp);
      const auto d = static_cast<Eigen::Index>(r.features.dim());
      return std::make_unique<TabularDomain>("random_mdp", std::move(r.mdp), std::move(r.behavior),
                                             std::move(r.target), std::move(r.features),
                                             std::move(r.start), Vector::Zero(d));
    }
    case DomainKind::kMountainCar:
      return std::make_unique<MountainCarDomain>(config.mountain_car);
  }
  throw ConfigError("unknown domain");
}

std::vector<DomainInfo> list_domains() {
  return {
      {"baird", "7-state star counterexample, 8 overcomplete features, gamma 0.99, off-policy"},
      {"random_mdp", "random MDP (default 400 states, 10 actions, 201 features, gamma 0.95), off-policy"},
      {"mountain_car", "mountain car, Fourier basis (default order 3), on-policy energy-pumping policy"},
  };
}

}  // namespace oblique
