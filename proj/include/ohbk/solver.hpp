#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ohbk/linalg.hpp"
#include "ohbk/sources.hpp"

namespace ohbk::solver {

/// Measurements with ||phi||^2 below this are skipped rather than applied.
inline constexpr double kDegenerateNormSq = 1e-24;

struct SolverState {
  linalg::Vector x_curr;
  linalg::Vector x_prev;
  double beta = 0.0;
  std::size_t t = 0;
  std::size_t skipped = 0;
};

/// State with x_curr = x_prev = x0. Throws ArgumentError unless beta is in [0, 1).
SolverState init(linalg::Vector x0, double beta);

/// One heavy-ball Kaczmarz update:
///   x_next = x_curr - (<phi, x_curr> - y) / ||phi||^2 * phi + beta * (x_curr - x_prev)
/// With beta = 0 this is the plain online Kaczmarz projection.
SolverState step(const SolverState& state, const sources::Measurement& m);
void step_in_place(SolverState& state, const sources::Measurement& m);

/// Error record ||x_t - x*|| for one run. iterations[k] is the t at which
/// errors[k] was taken; iterations[0] == 0.
struct Trajectory {
  std::vector<std::size_t> iterations;
  std::vector<double> errors;
  double beta = 0.0;
  std::uint64_t seed = 0;
  std::string source;
  std::size_t skipped = 0;

  std::size_t final_iteration() const { return iterations.back(); }
  double final_error() const { return errors.back(); }
  /// Error recorded at iteration t; throws ArgumentError if t was not recorded.
  double error_at(std::size_t t) const;
};

struct RunOptions {
  std::size_t iterations = 1;
  // Record every k-th iteration; the last one consumed is always recorded.
  std::size_t record_every = 1;
  std::optional<linalg::Vector> x0;  // zero vector when unset
};

/// Streams up to `iterations` measurements from a fresh source built from
/// `spec` (stopping early if a stream-once dataset runs dry) and records the
/// error against that source's ground truth.
Trajectory run(const sources::SourceSpec& spec, double beta, const RunOptions& options);

/// Same, against an existing source (consumed from its current position).
Trajectory run(sources::MeasurementSource& source, double beta, const RunOptions& options);

/// Runs one iterate per beta in lockstep on a single shared measurement
/// stream. Result k equals run(spec, betas[k], options) exactly.
std::vector<Trajectory> run_paired(const sources::SourceSpec& spec, std::span<const double> betas,
                                   const RunOptions& options);
std::vector<Trajectory> run_paired(sources::MeasurementSource& source,
                                   std::span<const double> betas, const RunOptions& options);

}  // namespace ohbk::solver
