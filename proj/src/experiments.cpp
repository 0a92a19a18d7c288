#include "ohbk/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ohbk/errors.hpp"

namespace ohbk::experiments {

void ExperimentConfig::validate() const {
  if (trials == 0) throw ArgumentError("experiment needs at least one trial");
  if (iterations == 0) throw ArgumentError("experiment needs at least one iteration");
  if (record_every == 0) throw ArgumentError("record stride must be positive");
  if (betas.empty()) throw ArgumentError("experiment needs at least one beta");
  for (double b : betas) {
    if (!(b >= 0.0 && b < 1.0)) throw ArgumentError("every beta must lie in [0, 1)");
  }
  source.validate();
}

TrialSet run_trials(const ExperimentConfig& config) {
  config.validate();
  TrialSet set;
  set.betas = config.betas;
  set.runs.assign(config.betas.size(), {});
  solver::RunOptions options;
  options.iterations = config.iterations;
  options.record_every = config.record_every;
  for (std::size_t i = 0; i < config.trials; ++i) {
    const sources::SourceSpec spec = config.source.reseeded(config.base_seed + i);
    auto trajs = solver::run_paired(spec, config.betas, options);
    for (std::size_t b = 0; b < trajs.size(); ++b) set.runs[b].push_back(std::move(trajs[b]));
  }
  return set;
}

double percentile(std::span<const double> values, double p) {
  if (values.empty()) throw ArgumentError("percentile of an empty sample");
  if (!(p >= 0.0 && p <= 100.0)) throw ArgumentError("percentile rank must lie in [0, 100]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double rank = p / 100.0 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

PointStats summarize(std::span<const double> values) {
  PointStats s;
  // Sum in sorted order so the mean does not depend on trial order.
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size());
  s.median = percentile(sorted, 50.0);
  s.p25 = percentile(sorted, 25.0);
  s.p75 = percentile(sorted, 75.0);
  return s;
}

namespace {

void mark_argmin(SweepResult& result) {
  result.argmin = 0;
  for (std::size_t i = 1; i < result.axis.size(); ++i) {
    if (result.aggregate(i) < result.aggregate(result.argmin)) result.argmin = i;
  }
}

}  // namespace

SweepResult sweep_beta(const ExperimentConfig& config, std::optional<std::size_t> error_at) {
  if (error_at && *error_at > config.iterations) {
    throw ArgumentError("sweep_beta: error_at exceeds the iteration count");
  }
  ExperimentConfig cfg = config;
  if (error_at && *error_at % cfg.record_every != 0 && *error_at != cfg.iterations) {
    cfg.record_every = 1;
  }
  const TrialSet set = run_trials(cfg);

  SweepResult result;
  result.axis_name = "beta";
  result.functional = error_at ? "error@" + std::to_string(*error_at) : "final_error";
  result.axis = set.betas;
  result.trials = cfg.trials;
  result.argmin_by = Aggregate::median;
  for (const auto& runs : set.runs) {
    std::vector<double> values;
    values.reserve(runs.size());
    for (const auto& traj : runs) {
      values.push_back(error_at ? traj.error_at(*error_at) : traj.final_error());
    }
    result.stats.push_back(summarize(values));
  }
  mark_argmin(result);
  return result;
}

double log10_error(double error) {
  return std::log10(std::max(error, std::numeric_limits<double>::min()));
}

std::vector<SweepResult> sweep_epsilon(std::span<const double> eps_grid,
                                       std::span<const double> betas, std::size_t n,
                                       std::size_t iterations, std::size_t trials,
                                       std::uint64_t base_seed) {
  if (eps_grid.empty()) throw ArgumentError("sweep_epsilon: empty eps grid");
  for (double eps : eps_grid) {
    if (!(eps >= 0.0 && eps < 1.0)) throw ArgumentError("sweep_epsilon: eps must lie in [0, 1)");
  }
  std::vector<SweepResult> curves(betas.size());
  for (std::size_t b = 0; b < betas.size(); ++b) {
    auto& c = curves[b];
    c.axis_name = "eps";
    c.functional = "log10_error@" + std::to_string(iterations);
    c.fixed_name = "beta";
    c.fixed_value = betas[b];
    c.trials = trials;
    c.argmin_by = Aggregate::mean;
  }
  for (double eps : eps_grid) {
    ExperimentConfig cfg;
    cfg.source = sources::SourceSpec::uniform(n, eps, 1.0, base_seed);
    cfg.betas.assign(betas.begin(), betas.end());
    cfg.trials = trials;
    cfg.iterations = iterations;
    cfg.base_seed = base_seed;
    cfg.record_every = iterations;
    const TrialSet set = run_trials(cfg);
    for (std::size_t b = 0; b < betas.size(); ++b) {
      std::vector<double> logs;
      for (const auto& traj : set.runs[b]) logs.push_back(log10_error(traj.final_error()));
      curves[b].axis.push_back(eps);
      curves[b].stats.push_back(summarize(logs));
    }
  }
  for (auto& c : curves) mark_argmin(c);
  return curves;
}

std::vector<SweepResult> sweep_length(std::span<const std::size_t> n_set,
                                      std::span<const double> betas, std::size_t iterations,
                                      std::size_t trials, std::uint64_t base_seed) {
  std::vector<SweepResult> curves;
  for (std::size_t n : n_set) {
    if (n == 0) throw ArgumentError("sweep_length: every n must be positive");
    ExperimentConfig cfg;
    cfg.source = sources::SourceSpec::uniform(n, 0.0, 1.0, base_seed);
    cfg.betas.assign(betas.begin(), betas.end());
    cfg.trials = trials;
    cfg.iterations = iterations;
    cfg.base_seed = base_seed;
    cfg.record_every = iterations;
    const TrialSet set = run_trials(cfg);

    SweepResult c;
    c.axis_name = "beta";
    c.functional = "log10_error@" + std::to_string(iterations);
    c.fixed_name = "n";
    c.fixed_value = static_cast<double>(n);
    c.axis = set.betas;
    c.trials = trials;
    c.argmin_by = Aggregate::mean;
    for (const auto& runs : set.runs) {
      std::vector<double> logs;
      for (const auto& traj : runs) logs.push_back(log10_error(traj.final_error()));
      c.stats.push_back(summarize(logs));
    }
    mark_argmin(c);
    curves.push_back(std::move(c));
  }
  return curves;
}

std::vector<double> mean_error_curve(std::span<const solver::Trajectory> runs) {
  if (runs.empty()) throw ArgumentError("mean_error_curve: no trajectories");
  const auto& layout = runs.front().iterations;
  std::vector<double> mean(layout.size(), 0.0);
  for (const auto& traj : runs) {
    if (traj.iterations != layout) {
      throw DimensionError("mean_error_curve: trajectories recorded at different iterations");
    }
    for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += traj.errors[k];
  }
  for (double& m : mean) m /= static_cast<double>(runs.size());
  return mean;
}

std::optional<std::size_t> first_iteration_below(const solver::Trajectory& layout,
                                                 std::span<const double> curve,
                                                 double threshold) {
  if (curve.size() != layout.iterations.size()) {
    throw DimensionError("first_iteration_below: curve/layout length mismatch");
  }
  for (std::size_t k = 0; k < curve.size(); ++k) {
    if (curve[k] <= threshold) return layout.iterations[k];
  }
  return std::nullopt;
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  if (count == 0) throw ArgumentError("linspace: count must be positive");
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = lo + step * static_cast<double>(i);
  out.back() = hi;
  return out;
}

}  // namespace ohbk::experiments
