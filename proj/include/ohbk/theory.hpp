#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ohbk/linalg.hpp"
#include "ohbk/sources.hpp"

namespace ohbk::theory {

/// Estimate (or exact value) of W = E[phi phi^T / ||phi||^2] with its
/// extreme eigenvalues.
struct WEstimate {
  linalg::SymMatrix matrix;
  std::size_t sample_count = 0;  // 0 when exact
  bool exact = false;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
};

/// Monte Carlo average of phi phi^T / ||phi||^2 over `samples` draws from a
/// fresh source built from `spec`. Degenerate draws are skipped and not
/// counted; a stream-once dataset is read at most once. Throws
/// NumericalError if no usable sample was drawn.
WEstimate estimate_W(const sources::SourceSpec& spec, std::size_t samples);

/// W = I/n, exact for sphere and standard Gaussian measurement vectors.
WEstimate closed_form_W_isotropic(std::size_t n);

/// Constants of the two-term error recurrence
///   E||x_{t+1} - x*||^2 <= a1 ||x_t - x*||^2 + a2 ||x_{t-1} - x*||^2
/// and the resulting geometric rate q and prefactor 1 + delta.
struct RateReport {
  double beta = 0.0;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double q = 0.0;
  double delta = 0.0;
  double condition = 0.0;  // 4b + 4b^2 - (1+b) sigma_min + b sigma_max
  bool admissible = false;
};

/// Positive root q of q^2 - a1 q - a2 = 0 (for a2 >= 0), computed without cancellation.
double dominant_root(double a1, double a2);

/// 4 beta + 4 beta^2 - (1 + beta) sigma_min + beta sigma_max.
double condition_value(double beta, double sigma_min, double sigma_max);

/// Throws ArgumentError unless 0 <= sigma_min <= sigma_max <= 1 and beta >= 0.
RateReport rate_constants(double beta, double sigma_min, double sigma_max);

/// True iff condition_value(beta, W.sigma_min, W.sigma_max) < 0.
bool check_condition(double beta, const WEstimate& w);

/// Positive root of 4 b^2 + (4 - sigma_min + sigma_max) b - sigma_min = 0:
/// every beta in [0, root) satisfies the admissibility condition.
double max_beta(double sigma_min, double sigma_max);

/// Positive root of b^2 + b - 1/(4n), the isotropic (W = I/n) case of max_beta.
double max_beta_isotropic(std::size_t n);

struct RecurrenceReport {
  double q = 0.0;
  double delta = 0.0;
  std::vector<double> values;  // F_0, F_1, ..., F_{T+1}
  std::vector<double> bounds;  // bounds[t] = q^t (1 + delta) F_0, compared with F_{t+1}, t = 0..T
  std::size_t violations = 0;  // count of t in [1, T] with F_{t+1} > bound
};

/// Runs the extremal recurrence F_{t+1} = a1 F_t + a2 F_{t-1} with F_1 = F_0
/// and checks F_{t+1} <= q^t (1 + delta) F_0 for t = 1..T.
/// Throws ArgumentError unless a2 > 0, a1 + a2 < 1 and F_0 >= 0.
RecurrenceReport recurrence_oracle(double a1, double a2, double f0, std::size_t steps);

/// q^t (1 + delta) e0_sq.
double theorem_bound(std::size_t t, double q, double delta, double e0_sq);

}  // namespace ohbk::theory
