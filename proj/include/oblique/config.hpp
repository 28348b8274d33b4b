#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "oblique/environments.hpp"
#include "oblique/learners.hpp"

namespace oblique {

// Experiment configuration.
//
// The file is a list of `key = value` lines. A `[section]` header prefixes the
// keys that follow with "section."; keys before the first header (or under
// `[experiment]`) are top-level. '#' and ';' start comments. Recognized keys:
//
//   domain          baird | random_mdp | mountain_car
//   sampling        sequential | iid
//   steps, runs, seed, eval_every, out_dir
//   learners.N.kind   o2td | etd | gtd2 | td0 | rg
//   learners.N.alpha, learners.N.beta, learners.N.label,
//   learners.N.allow_nonsequential (true|false, ETD only)
//   environments.random_mdp.{n_states, n_actions, n_features, gamma, seed}
//   environments.mountain_car.{order, gamma, dataset_size, mc_rollouts, grid,
//                              visitation_episodes, seed}
//
// Unknown keys are rejected so typos surface before any work is done.

enum class DomainKind { kBaird, kRandomMDP, kMountainCar };
enum class SamplingMode { kSequential, kIid };

std::string_view to_string(DomainKind kind);
std::string_view to_string(SamplingMode mode);

struct MountainCarSpec {
  std::size_t order = 3;
  double gamma = 0.99;
  std::size_t dataset_size = 20000;      // transitions pooled for iid sampling
  std::size_t mc_rollouts = 100;         // Monte-Carlo rollouts per evaluation state
  std::size_t grid = 20;                 // evaluation lattice is grid × grid
  std::size_t visitation_episodes = 50;  // episodes used to find reachable cells and ξ
  std::uint64_t seed = 0;                // seed of the evaluation set
};

struct LearnerConfig {
  std::string label;
  LearnerParams params;  // gamma is filled in from the domain
};

struct ExperimentConfig {
  DomainKind domain = DomainKind::kBaird;
  SamplingMode sampling = SamplingMode::kSequential;
  RandomMDPSpec random_mdp;
  MountainCarSpec mountain_car;
  std::vector<LearnerConfig> learners;
  std::size_t steps = 1000;
  std::size_t runs = 20;
  std::uint64_t seed = 0;
  std::size_t eval_every = 10;
  std::string out_dir = "out";
};

/// Raw `key -> value` map with section prefixes applied. Throws ConfigError
/// (with the line number) on malformed lines or duplicate keys.
std::map<std::string, std::string> parse_key_values(std::string_view text);

/// Parses and validates a configuration. Throws ConfigError.
ExperimentConfig parse_config(std::string_view text);

/// Reads and parses a file; IoError if it cannot be read.
ExperimentConfig load_config(const std::string& path);

/// Checks the invariants of a programmatically built configuration.
void validate(const ExperimentConfig& config);

}  // namespace oblique
