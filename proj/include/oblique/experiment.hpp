#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "oblique/config.hpp"
#include "oblique/domain.hpp"
#include "oblique/learners.hpp"

namespace oblique {

/// One evaluation of one learner in one run. After divergence both metrics
/// are +inf.
struct CurvePoint {
  std::size_t step = 0;
  std::size_t run = 0;
  double rmspbe = 0.0;
  double rmse = 0.0;
};

/// Across-run summary at one step; std is the sample standard deviation
/// (n − 1 denominator), reported as 0 for a single run.
struct AggregatePoint {
  std::size_t step = 0;
  double rmspbe_mean = 0.0;
  double rmspbe_std = 0.0;
  double rmse_mean = 0.0;
  double rmse_std = 0.0;
};

struct DivergenceRecord {
  std::size_t run = 0;
  std::size_t step = 0;
};

struct LearnerCurves {
  std::string label;
  LearnerParams params;
  std::vector<CurvePoint> points;  // ordered by run, then step
  std::vector<AggregatePoint> aggregate;
  std::vector<DivergenceRecord> divergences;
};

struct ExperimentResult {
  std::vector<LearnerCurves> learners;
};

/// Steps at which metrics are recorded: 0, every `eval_every`, and `steps`.
std::vector<std::size_t> evaluation_steps(std::size_t steps, std::size_t eval_every);

/// Mean and sample standard deviation per step over the runs in `points`.
std::vector<AggregatePoint> aggregate_curves(std::span<const CurvePoint> points);

/// Runs every learner on `config.runs` independent sample streams (run r uses
/// seed config.seed + r); all learners in a run see the same stream. Runs are
/// spread over up to `jobs` threads and collected by run index, so the result
/// does not depend on `jobs`.
ExperimentResult run_experiment(const ExperimentConfig& config, std::size_t jobs = 1);

/// Same, on a domain built by the caller.
ExperimentResult run_experiment(const ExperimentConfig& config, const Domain& domain,
                                std::size_t jobs = 1);

}  // namespace oblique
