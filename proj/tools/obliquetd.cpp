// obliquetd: experiment runner and exact-oracle CLI.
//
//   obliquetd run --config <path> [--out <dir>] [--jobs <n>] [--svg]
//   obliquetd oracle --mdp <path> --features <path> [--policy <path>] [--behavior <path>]
//   obliquetd oracle --random-mdp <n_states> <n_actions> <seed> [--dim <d>]
//   obliquetd list-domains
//
// Exit codes: 0 success, 1 validation error, 2 I/O error.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "oblique/config.hpp"
#include "oblique/domain.hpp"
#include "oblique/errors.hpp"
#include "oblique/experiment.hpp"
#include "oblique/matrix_io.hpp"
#include "oblique/oracle.hpp"
#include "oblique/report.hpp"

namespace {

constexpr int kValidationError = 1;
constexpr int kIoError = 2;

struct RunArgs {
  std::string config;
  std::string out;
  std::size_t jobs = 0;
  bool svg = false;
};

struct OracleArgs {
  std::string mdp;
  std::string features;
  std::string policy;
  std::string behavior;
  std::vector<std::uint64_t> random;
  std::size_t dim = 5;
};

int cmd_run(const RunArgs& args) {
  oblique::ExperimentConfig config = oblique::load_config(args.config);
  if (!args.out.empty()) config.out_dir = args.out;
  const std::size_t jobs =
      args.jobs > 0 ? args.jobs : std::max<std::size_t>(1, std::thread::hardware_concurrency());
  const oblique::ExperimentResult result = oblique::run_experiment(config, jobs);
  for (const std::string& path : oblique::write_csv(result, config.out_dir)) std::cout << path << '\n';
  if (args.svg) {
    const std::string path = (std::filesystem::path(config.out_dir) / "curves.svg").string();
    oblique::write_svg(result, path, std::filesystem::path(args.config).stem().string());
    std::cout << path << '\n';
  }
  for (const auto& lc : result.learners) {
    for (const auto& d : lc.divergences) {
      std::cerr << "diverged: " << lc.label << " run " << d.run << " step " << d.step << '\n';
    }
  }
  return 0;
}

int cmd_oracle(const OracleArgs& args) {
  std::optional<oblique::OracleInputs> inputs;
  if (!args.random.empty()) {
    if (args.random.size() != 3) throw oblique::ConfigError("--random-mdp takes n_states n_actions seed");
    inputs = oblique::random_oracle_inputs(args.random[0], args.random[1], args.random[2], args.dim);
  } else {
    if (args.mdp.empty()) throw oblique::ConfigError("oracle needs --mdp or --random-mdp");
    if (args.features.empty()) throw oblique::ConfigError("--mdp requires --features");
    oblique::TabularMDP mdp = oblique::load_mdp(args.mdp);
    oblique::Policy target = args.policy.empty()
                                 ? oblique::Policy::uniform(mdp.n_states(), mdp.n_actions())
                                 : oblique::Policy(oblique::load_matrix(args.policy));
    oblique::Policy behavior =
        args.behavior.empty() ? target : oblique::Policy(oblique::load_matrix(args.behavior));
    oblique::FeatureMap features(oblique::load_matrix(args.features));
    inputs.emplace(oblique::OracleInputs{std::move(mdp), std::move(target), std::move(behavior),
                                         std::move(features)});
  }
  oblique::print_oracle(std::cout, oblique::run_oracle(*inputs));
  return 0;
}

int cmd_list_domains() {
  for (const auto& d : oblique::list_domains()) std::cout << d.name << "\t" << d.description << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Oblique-projection TD learning: experiments and exact oracle"};
  app.set_version_flag("--version", std::string("obliquetd ") + OBLIQUE_VERSION);
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run an experiment from a config file");
  run->add_option("--config", run_args.config, "Config file")->required();
  run->add_option("--out", run_args.out, "Output directory (overrides out_dir)");
  run->add_option("--jobs", run_args.jobs, "Worker threads (default: hardware concurrency)");
  run->add_flag("--svg", run_args.svg, "Also write curves.svg");

  OracleArgs oracle_args;
  auto* oracle = app.add_subcommand("oracle", "Exact projections on a tabular MDP");
  auto* mdp_opt = oracle->add_option("--mdp", oracle_args.mdp, "MDP file");
  oracle->add_option("--features", oracle_args.features, "Feature matrix file (|S| x d)");
  oracle->add_option("--policy", oracle_args.policy, "Target policy matrix (default uniform)");
  oracle->add_option("--behavior", oracle_args.behavior, "Behavior policy matrix (default: target)");
  auto* random_opt = oracle->add_option("--random-mdp", oracle_args.random, "n_states n_actions seed")
                         ->expected(3);
  oracle->add_option("--dim", oracle_args.dim, "Feature count for --random-mdp");
  mdp_opt->excludes(random_opt);

  app.add_subcommand("list-domains", "List built-in domains");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kValidationError;
  }

  try {
    if (*run) return cmd_run(run_args);
    if (*oracle) return cmd_oracle(oracle_args);
    return cmd_list_domains();
  } catch (const oblique::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidationError;
  }
}
