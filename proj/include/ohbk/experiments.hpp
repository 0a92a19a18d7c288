#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ohbk/solver.hpp"
#include "ohbk/sources.hpp"

namespace ohbk::experiments {

struct ExperimentConfig {
  // Template source; its seed is replaced by base_seed + trial for each trial.
  sources::SourceSpec source;
  std::vector<double> betas;
  std::size_t trials = 1;
  std::size_t iterations = 1;
  std::uint64_t base_seed = 0;
  std::size_t record_every = 1;

  void validate() const;
};

/// runs[b][i] is the trajectory for betas[b] on trial i. Within a trial
/// every beta sees the same x* and the same measurement stream.
struct TrialSet {
  std::vector<double> betas;
  std::vector<std::vector<solver::Trajectory>> runs;
};

TrialSet run_trials(const ExperimentConfig& config);

/// Linear interpolation between closest ranks: rank = p/100 * (N - 1) on sorted values.
double percentile(std::span<const double> values, double p);

struct PointStats {
  double mean = 0.0;
  double median = 0.0;
  double p25 = 0.0;
  double p75 = 0.0;
};

PointStats summarize(std::span<const double> values);

enum class Aggregate { median, mean };

struct SweepResult {
  std::string axis_name;        // "beta", "eps" or "n"
  std::string functional;       // what was aggregated, e.g. "error@100"
  std::string fixed_name;       // parameter held fixed along this curve, if any
  double fixed_value = 0.0;
  std::vector<double> axis;
  std::vector<PointStats> stats;
  std::size_t trials = 0;
  Aggregate argmin_by = Aggregate::median;
  std::size_t argmin = 0;  // index into axis; first minimum on ties

  double argmin_value() const { return axis.at(argmin); }
  double aggregate(std::size_t i) const {
    return argmin_by == Aggregate::median ? stats.at(i).median : stats.at(i).mean;
  }
};

/// Per beta: median / p25 / p75 of ||x_t - x*|| at t = error_at over the
/// trials (the last recorded error when error_at is unset). Argmin by median.
SweepResult sweep_beta(const ExperimentConfig& config, std::optional<std::size_t> error_at);

/// log10 of an error, clamped at the smallest normal double so exact zeros stay finite.
double log10_error(double error);

/// For each beta, a curve over eps of log10 ||x_T - x*|| on U[eps, 1] sources
/// of length n (statistics over trials; argmin by mean).
std::vector<SweepResult> sweep_epsilon(std::span<const double> eps_grid,
                                       std::span<const double> betas, std::size_t n,
                                       std::size_t iterations, std::size_t trials,
                                       std::uint64_t base_seed);

/// For each n, a curve over beta of log10 ||x_T - x*|| on U[0, 1] sources,
/// with the beta of minimum mean log-error marked.
std::vector<SweepResult> sweep_length(std::span<const std::size_t> n_set,
                                      std::span<const double> betas, std::size_t iterations,
                                      std::size_t trials, std::uint64_t base_seed);

/// Pointwise mean error across trajectories recorded at the same iterations.
std::vector<double> mean_error_curve(std::span<const solver::Trajectory> runs);

/// First recorded iteration at which curve <= threshold, if any.
std::optional<std::size_t> first_iteration_below(const solver::Trajectory& layout,
                                                 std::span<const double> curve,
                                                 double threshold);

/// `count` evenly spaced points on [lo, hi] (just lo when count == 1).
std::vector<double> linspace(double lo, double hi, std::size_t count);

}  // namespace ohbk::experiments
