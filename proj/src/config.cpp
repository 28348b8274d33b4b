#include "oblique/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "oblique/errors.hpp"

namespace oblique {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("config key '" + key + "': cannot parse '" + value + "' as a number");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config key '" + key + "': expected true or false, got '" + value + "'");
}

}  // namespace

std::string_view to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::kBaird: return "baird";
    case DomainKind::kRandomMDP: return "random_mdp";
    case DomainKind::kMountainCar: return "mountain_car";
  }
  return "unknown";
}

std::string_view to_string(SamplingMode mode) {
  return mode == SamplingMode::kSequential ? "sequential" : "iid";
}

std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> out;
  std::string prefix;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto comment = raw.find_first_of("#;");
    const std::string line = trim(std::string_view(raw).substr(0, comment));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("config line " + std::to_string(line_no) + ": unterminated section header");
      }
      const std::string name = trim(std::string_view(line).substr(1, line.size() - 2));
      prefix = (name.empty() || name == "experiment") ? std::string() : name + ".";
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = prefix + trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty() || key == prefix) {
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    }
    if (!out.emplace(key, value).second) {
      throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }
  return out;
}

ExperimentConfig parse_config(std::string_view text) {
  const auto kv = parse_key_values(text);
  ExperimentConfig cfg;
  std::map<std::size_t, LearnerConfig> learners;
  std::set<std::size_t> learners_with_kind;

  for (const auto& [key, value] : kv) {
    if (key == "domain") {
      if (value == "baird") cfg.domain = DomainKind::kBaird;
      else if (value == "random_mdp") cfg.domain = DomainKind::kRandomMDP;
      else if (value == "mountain_car") cfg.domain = DomainKind::kMountainCar;
      else throw ConfigError("unknown domain '" + value + "' (expected baird, random_mdp or mountain_car)");
    } else if (key == "sampling") {
      if (value == "sequential") cfg.sampling = SamplingMode::kSequential;
      else if (value == "iid") cfg.sampling = SamplingMode::kIid;
      else throw ConfigError("unknown sampling mode '" + value + "' (expected sequential or iid)");
    } else if (key == "steps") {
      cfg.steps = parse_number<std::size_t>(key, value);
    } else if (key == "runs") {
      cfg.runs = parse_number<std::size_t>(key, value);
    } else if (key == "seed") {
      cfg.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "eval_every") {
      cfg.eval_every = parse_number<std::size_t>(key, value);
    } else if (key == "out_dir") {
      cfg.out_dir = value;
    } else if (key.starts_with("learners.")) {
      const std::string rest = key.substr(9);
      const auto dot = rest.find('.');
      if (dot == std::string::npos) throw ConfigError("malformed learner key '" + key + "'");
      const auto index = parse_number<std::size_t>(key, rest.substr(0, dot));
      const std::string field = rest.substr(dot + 1);
      LearnerConfig& lc = learners[index];
      if (field == "kind") {
        lc.params.kind = parse_learner_kind(value);
        learners_with_kind.insert(index);
      } else if (field == "alpha") {
        lc.params.alpha = parse_number<double>(key, value);
      } else if (field == "beta") {
        lc.params.beta = parse_number<double>(key, value);
      } else if (field == "label") {
        lc.label = value;
      } else if (field == "allow_nonsequential") {
        lc.params.allow_nonsequential = parse_bool(key, value);
      } else {
        throw ConfigError("unknown learner field '" + field + "' in '" + key + "'");
      }
    } else if (key.starts_with("environments.random_mdp.")) {
      const std::string field = key.substr(24);
      RandomMDPSpec& s = cfg.random_mdp;
      if (field == "n_states") s.n_states = parse_number<std::size_t>(key, value);
      else if (field == "n_actions") s.n_actions = parse_number<std::size_t>(key, value);
      else if (field == "n_features") s.n_features = parse_number<std::size_t>(key, value);
      else if (field == "gamma") s.gamma = parse_number<double>(key, value);
      else if (field == "seed") s.seed = parse_number<std::uint64_t>(key, value);
      else throw ConfigError("unknown config key '" + key + "'");
    } else if (key.starts_with("environments.mountain_car.")) {
      const std::string field = key.substr(26);
      MountainCarSpec& s = cfg.mountain_car;
      if (field == "order") s.order = parse_number<std::size_t>(key, value);
      else if (field == "gamma") s.gamma = parse_number<double>(key, value);
      else if (field == "dataset_size") s.dataset_size = parse_number<std::size_t>(key, value);
      else if (field == "mc_rollouts") s.mc_rollouts = parse_number<std::size_t>(key, value);
      else if (field == "grid") s.grid = parse_number<std::size_t>(key, value);
      else if (field == "visitation_episodes") s.visitation_episodes = parse_number<std::size_t>(key, value);
      else if (field == "seed") s.seed = parse_number<std::uint64_t>(key, value);
      else throw ConfigError("unknown config key '" + key + "'");
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }

  for (auto& [index, lc] : learners) {
    if (!learners_with_kind.contains(index)) {
      throw ConfigError("learner " + std::to_string(index) + " has no kind");
    }
    if (lc.label.empty()) lc.label = std::to_string(index) + "_" + std::string(to_string(lc.params.kind));
    cfg.learners.push_back(std::move(lc));
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.runs < 1) throw ConfigError("runs must be at least 1");
  if (cfg.eval_every < 1) throw ConfigError("eval_every must be at least 1");
  if (cfg.learners.empty()) throw ConfigError("at least one learner is required");
  std::set<std::string> labels;
  for (const LearnerConfig& lc : cfg.learners) {
    if (!(lc.params.alpha > 0.0)) throw ConfigError("learner '" + lc.label + "': alpha must be > 0");
    if (lc.params.beta < 0.0) throw ConfigError("learner '" + lc.label + "': beta must be > 0");
    if (lc.label.empty() || lc.label.find_first_of("/\\ ") != std::string::npos) {
      throw ConfigError("learner label '" + lc.label + "' must be non-empty without spaces or slashes");
    }
    if (!labels.insert(lc.label).second) throw ConfigError("duplicate learner label '" + lc.label + "'");
    if (lc.params.kind == LearnerKind::kETD && cfg.sampling == SamplingMode::kIid &&
        !lc.params.allow_nonsequential) {
      throw ConfigError("learner '" + lc.label +
                        "': ETD needs sequential sampling (set allow_nonsequential = true to "
                        "run it on an iid stream anyway)");
    }
  }
  if (cfg.domain == DomainKind::kRandomMDP) {
    const RandomMDPSpec& s = cfg.random_mdp;
    if (s.n_states < 1 || s.n_actions < 1 || s.n_features < 1) {
      throw ConfigError("environments.random_mdp sizes must be positive");
    }
    if (!(s.gamma >= 0.0 && s.gamma < 1.0)) throw ConfigError("environments.random_mdp.gamma must lie in [0, 1)");
  }
  if (cfg.domain == DomainKind::kMountainCar) {
    const MountainCarSpec& s = cfg.mountain_car;
    if (!(s.gamma >= 0.0 && s.gamma < 1.0)) throw ConfigError("environments.mountain_car.gamma must lie in [0, 1)");
    if (s.grid < 1 || s.mc_rollouts < 1 || s.dataset_size < 1 || s.visitation_episodes < 1) {
      throw ConfigError("environments.mountain_car counts must be positive");
    }
  }
}

}  // namespace oblique
