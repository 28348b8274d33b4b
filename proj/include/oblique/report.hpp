#pragma once

#include <span>
#include <string>
#include <vector>

#include "oblique/experiment.hpp"

namespace oblique {

// CSV output. Files are UTF-8 with LF line endings and a header row. Numbers
// use the shortest decimal form that parses back to the same double.
//
//   <label>_runs.csv       step,run,rmspbe,rmse
//   <label>_aggregate.csv  step,rmspbe_mean,rmspbe_std,rmse_mean,rmse_std
//   divergence.csv         learner,run,step

void write_runs_csv(std::span<const CurvePoint> points, const std::string& path);
void write_aggregate_csv(std::span<const AggregatePoint> points, const std::string& path);

std::vector<CurvePoint> read_runs_csv(const std::string& path);
std::vector<AggregatePoint> read_aggregate_csv(const std::string& path);

/// Writes every learner's files plus divergence.csv into `dir` (created if
/// needed). Returns the written paths. I/O failures raise IoError.
std::vector<std::string> write_csv(const ExperimentResult& result, const std::string& dir);

/// Self-contained SVG with two panels (mean RMSPBE, mean RMSE vs step), one
/// polyline per learner. Non-finite points are left out.
void write_svg(const ExperimentResult& result, const std::string& path, const std::string& title);

}  // namespace oblique
