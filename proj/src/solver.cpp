#include "ohbk/solver.hpp"

#include <algorithm>
#include <cmath>

#include "ohbk/errors.hpp"

namespace ohbk::solver {

SolverState init(linalg::Vector x0, double beta) {
  if (!(beta >= 0.0 && beta < 1.0)) throw ArgumentError("beta must lie in [0, 1)");
  if (!x0.all_finite()) throw ArgumentError("initial iterate has non-finite entries");
  linalg::Vector prev = x0;
  return SolverState{std::move(x0), std::move(prev), beta, 0, 0};
}

void step_in_place(SolverState& state, const sources::Measurement& m) {
  const std::size_t n = state.x_curr.size();
  if (m.phi.size() != n) throw DimensionError("step: measurement length differs from iterate");
  if (!m.phi.all_finite() || !std::isfinite(m.y)) {
    throw ArgumentError("step: measurement has non-finite entries");
  }
  const double phi_sq = linalg::norm_sq(m.phi);
  if (phi_sq < kDegenerateNormSq) {
    ++state.skipped;
    return;
  }
  const double scale = (linalg::dot(m.phi, state.x_curr) - m.y) / phi_sq;
  auto& x = state.x_curr;
  auto& prev = state.x_prev;
  for (std::size_t i = 0; i < n; ++i) {
    const double projected = x[i] - scale * m.phi[i];
    const double next = projected + state.beta * (x[i] - prev[i]);
    prev[i] = x[i];
    x[i] = next;
  }
  ++state.t;
}

SolverState step(const SolverState& state, const sources::Measurement& m) {
  SolverState next = state;
  step_in_place(next, m);
  return next;
}

double Trajectory::error_at(std::size_t t) const {
  const auto it = std::lower_bound(iterations.begin(), iterations.end(), t);
  if (it == iterations.end() || *it != t) {
    throw ArgumentError("trajectory has no record at t=" + std::to_string(t));
  }
  return errors[static_cast<std::size_t>(it - iterations.begin())];
}

std::vector<Trajectory> run_paired(sources::MeasurementSource& source,
                                   std::span<const double> betas, const RunOptions& options) {
  if (options.iterations == 0) throw ArgumentError("run: iteration count must be positive");
  if (options.record_every == 0) throw ArgumentError("run: record stride must be positive");
  if (betas.empty()) throw ArgumentError("run: no beta given");
  const std::size_t n = source.dimension();
  const linalg::Vector x0 = options.x0 ? *options.x0 : linalg::Vector(n);
  if (x0.size() != n) throw DimensionError("run: x0 length differs from source dimension");
  const linalg::Vector& x_star = source.ground_truth().x_star;

  std::vector<SolverState> states;
  std::vector<Trajectory> trajs(betas.size());
  for (std::size_t k = 0; k < betas.size(); ++k) {
    states.push_back(init(x0, betas[k]));
    trajs[k].beta = betas[k];
    trajs[k].seed = source.spec().seed;
    trajs[k].source = source.spec().describe();
  }
  auto record = [&](std::size_t t) {
    for (std::size_t k = 0; k < states.size(); ++k) {
      trajs[k].iterations.push_back(t);
      trajs[k].errors.push_back(linalg::distance(states[k].x_curr, x_star));
    }
  };

  record(0);
  std::size_t consumed = 0;
  while (consumed < options.iterations) {
    const auto m = source.next();
    if (!m) break;
    for (auto& state : states) step_in_place(state, *m);
    ++consumed;
    if (consumed % options.record_every == 0 || consumed == options.iterations) record(consumed);
  }
  if (trajs.front().iterations.back() != consumed) record(consumed);

  for (std::size_t k = 0; k < states.size(); ++k) {
    for (double e : trajs[k].errors) {
      if (!std::isfinite(e)) throw NumericalError("run: iterate diverged to non-finite values");
    }
    trajs[k].skipped = states[k].skipped;
  }
  return trajs;
}

std::vector<Trajectory> run_paired(const sources::SourceSpec& spec, std::span<const double> betas,
                                   const RunOptions& options) {
  sources::MeasurementSource source(spec);
  return run_paired(source, betas, options);
}

Trajectory run(sources::MeasurementSource& source, double beta, const RunOptions& options) {
  const double betas[] = {beta};
  return std::move(run_paired(source, betas, options).front());
}

Trajectory run(const sources::SourceSpec& spec, double beta, const RunOptions& options) {
  sources::MeasurementSource source(spec);
  return run(source, beta, options);
}

}  // namespace ohbk::solver
