#include "oblique/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <optional>
#include <mutex>
#include <thread>

#include "oblique/metrics.hpp"

namespace oblique {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct RunOutput {
  std::vector<std::vector<CurvePoint>> points;  // per learner
  std::vector<std::optional<std::size_t>> diverged_at;
};

RunOutput run_once(const ExperimentConfig& config, const Domain& domain, std::size_t run,
                   const std::vector<std::size_t>& eval_at) {
  const EvaluationContext& ctx = domain.evaluation();
  std::vector<Learner> learners;
  learners.reserve(config.learners.size());
  for (const LearnerConfig& lc : config.learners) {
    LearnerParams p = lc.params;
    p.gamma = domain.gamma();
    learners.emplace_back(p, domain.initial_theta());
  }
  RunOutput out;
  out.points.resize(learners.size());
  out.diverged_at.resize(learners.size());

  auto evaluate = [&](std::size_t step) {
    for (std::size_t i = 0; i < learners.size(); ++i) {
      CurvePoint pt{step, run, kInf, kInf};
      if (!learners[i].state().diverged) {
        pt.rmspbe = rms(mspbe(learners[i].theta(), ctx));
        pt.rmse = rms(mse(learners[i].theta(), ctx));
      }
      out.points[i].push_back(pt);
    }
  };

  auto stream = domain.stream(config.sampling, config.seed + run);
  std::size_t next_eval = 0;
  evaluate(0);
  ++next_eval;
  for (std::size_t t = 1; t <= config.steps; ++t) {
    const Sample sample = stream->next();
    for (Learner& l : learners) l.step(sample);
    if (next_eval < eval_at.size() && eval_at[next_eval] == t) {
      evaluate(t);
      ++next_eval;
    }
  }
  for (std::size_t i = 0; i < learners.size(); ++i) out.diverged_at[i] = learners[i].state().diverged_at;
  return out;
}

double sample_std(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  if (!std::isfinite(mean)) return kInf;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace

std::vector<std::size_t> evaluation_steps(std::size_t steps, std::size_t eval_every) {
  std::vector<std::size_t> out{0};
  if (eval_every == 0) eval_every = 1;
  for (std::size_t t = eval_every; t <= steps; t += eval_every) out.push_back(t);
  if (out.back() != steps) out.push_back(steps);
  return out;
}

std::vector<AggregatePoint> aggregate_curves(std::span<const CurvePoint> points) {
  std::map<std::size_t, std::pair<std::vector<double>, std::vector<double>>> by_step;
  for (const CurvePoint& p : points) {
    auto& [a, b] = by_step[p.step];
    a.push_back(p.rmspbe);
    b.push_back(p.rmse);
  }
  std::vector<AggregatePoint> out;
  out.reserve(by_step.size());
  for (const auto& [step, values] : by_step) {
    const auto& [pbe, err] = values;
    AggregatePoint ap;
    ap.step = step;
    double s1 = 0.0, s2 = 0.0;
    for (double x : pbe) s1 += x;
    for (double x : err) s2 += x;
    ap.rmspbe_mean = s1 / static_cast<double>(pbe.size());
    ap.rmse_mean = s2 / static_cast<double>(err.size());
    ap.rmspbe_std = sample_std(pbe, ap.rmspbe_mean);
    ap.rmse_std = sample_std(err, ap.rmse_mean);
    out.push_back(ap);
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& config, std::size_t jobs) {
  validate(config);
  const auto domain = make_domain(config);
  return run_experiment(config, *domain, jobs);
}

ExperimentResult run_experiment(const ExperimentConfig& config, const Domain& domain,
                                std::size_t jobs) {
  validate(config);
  const auto eval_at = evaluation_steps(config.steps, config.eval_every);
  std::vector<RunOutput> runs(config.runs);

  std::atomic<std::size_t> next_run{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t r = next_run.fetch_add(1);
      if (r >= config.runs) return;
      try {
        runs[r] = run_once(config, domain, r, eval_at);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next_run.store(config.runs);
      }
    }
  };
  const std::size_t n_threads = std::clamp<std::size_t>(jobs, 1, config.runs);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  ExperimentResult result;
  for (std::size_t i = 0; i < config.learners.size(); ++i) {
    LearnerCurves lc;
    lc.label = config.learners[i].label;
    lc.params = config.learners[i].params;
    lc.params.gamma = domain.gamma();
    for (std::size_t r = 0; r < config.runs; ++r) {
      const auto& pts = runs[r].points[i];
      lc.points.insert(lc.points.end(), pts.begin(), pts.end());
      if (runs[r].diverged_at[i]) lc.divergences.push_back({r, *runs[r].diverged_at[i]});
    }
    lc.aggregate = aggregate_curves(lc.points);
    result.learners.push_back(std::move(lc));
  }
  return result;
}

}  // namespace oblique
