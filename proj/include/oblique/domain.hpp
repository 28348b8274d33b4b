#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "oblique/config.hpp"
#include "oblique/environments.hpp"
#include "oblique/metrics.hpp"

namespace oblique {

/// Endless stream of transitions for one run.
class SampleStream {
 public:
  virtual ~SampleStream() = default;
  virtual Sample next() = 0;
};

/// An experimental domain prepared for evaluation: immutable after
/// construction and safe to share between concurrent runs.
class Domain {
 public:
  virtual ~Domain() = default;
  virtual std::string_view name() const = 0;
  virtual double gamma() const = 0;
  virtual std::size_t dim() const = 0;
  virtual Vector initial_theta() const = 0;
  virtual const EvaluationContext& evaluation() const = 0;
  virtual std::unique_ptr<SampleStream> stream(SamplingMode mode, std::uint64_t seed) const = 0;
};

/// Tabular domain evaluated exactly. ξ (for iid draws and metric weights) is
/// the stationary distribution of the behavior chain; sequential streams start
/// from `start`.
class TabularDomain final : public Domain {
 public:
  TabularDomain(std::string name, TabularMDP mdp, Policy behavior, Policy target,
                FeatureMap features, StateDistribution start, Vector theta0);

  std::string_view name() const override { return name_; }
  double gamma() const override { return mdp_.gamma(); }
  std::size_t dim() const override { return features_.dim(); }
  Vector initial_theta() const override { return theta0_; }
  const EvaluationContext& evaluation() const override { return context_; }
  std::unique_ptr<SampleStream> stream(SamplingMode mode, std::uint64_t seed) const override;

  const TabularMDP& mdp() const { return mdp_; }
  const Policy& behavior() const { return behavior_; }
  const Policy& target() const { return target_; }
  const FeatureMap& features() const { return features_; }
  const StateDistribution& xi() const { return xi_; }

 private:
  std::string name_;
  TabularMDP mdp_;
  Policy behavior_;
  Policy target_;
  FeatureMap features_;
  StateDistribution start_;
  StateDistribution xi_;
  Vector theta0_;
  EvaluationContext context_;
};

/// On-policy mountain car under the energy-pumping policy.
///
/// Evaluation set: the grid × grid lattice over the state box, restricted to
/// cells visited by `visitation_episodes` episodes from the standard start.
/// Each visited cell is represented by the first state observed in it and
/// weighted by its visit frequency; V there is a Monte-Carlo estimate.
class MountainCarDomain final : public Domain {
 public:
  explicit MountainCarDomain(const MountainCarSpec& spec);

  std::string_view name() const override { return "mountain_car"; }
  double gamma() const override { return spec_.gamma; }
  std::size_t dim() const override { return basis_.dim(); }
  Vector initial_theta() const override { return Vector::Zero(static_cast<Eigen::Index>(dim())); }
  const EvaluationContext& evaluation() const override { return context_; }
  std::unique_ptr<SampleStream> stream(SamplingMode mode, std::uint64_t seed) const override;

  const std::vector<mountain_car::CarState>& evaluation_states() const { return eval_states_; }
  const Vector& value_std_error() const { return value_std_error_; }
  const FourierBasis& basis() const { return basis_; }

  /// Episodes longer than this mean the evaluation policy is broken.
  static constexpr std::size_t kMaxEpisodeSteps = 10000;

 private:
  MountainCarSpec spec_;
  FourierBasis basis_;
  std::vector<mountain_car::CarState> eval_states_;
  Vector value_std_error_;
  EvaluationContext context_;
};

std::unique_ptr<Domain> make_domain(const ExperimentConfig& config);

struct DomainInfo {
  std::string name;
  std::string description;
};

std::vector<DomainInfo> list_domains();

}  // namespace oblique
