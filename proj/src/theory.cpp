#include "ohbk/theory.hpp"

#include <cmath>

#include "ohbk/errors.hpp"

namespace ohbk::theory {

namespace {

void fill_spectrum(WEstimate& w) {
  const auto eig = linalg::sym_eigenvalues(w.matrix);
  w.sigma_min = eig.front();
  w.sigma_max = eig.back();
}

}  // namespace

WEstimate estimate_W(const sources::SourceSpec& spec, std::size_t samples) {
  if (samples == 0) throw ArgumentError("estimate_W: sample count must be positive");
  spec.validate();
  const std::size_t n = spec.dimension;
  sources::Rng rng(spec.seed);
  sources::SourceCursor cursor{&spec, 0};

  linalg::SymMatrix sum(n);
  std::size_t used = 0;
  for (std::size_t k = 0; k < samples; ++k) {
    auto phi = sources::next_vector(cursor, rng);
    if (!phi) break;
    const double len_sq = linalg::norm_sq(*phi);
    if (len_sq < 1e-24) continue;
    linalg::rank1_accumulate(sum, *phi, 1.0 / len_sq);
    ++used;
  }
  if (used == 0) throw NumericalError("estimate_W: every sample was degenerate");
  sum.scale(1.0 / static_cast<double>(used));

  WEstimate w{std::move(sum), used, false, 0.0, 0.0};
  fill_spectrum(w);
  return w;
}

WEstimate closed_form_W_isotropic(std::size_t n) {
  if (n == 0) throw ArgumentError("closed_form_W_isotropic: n must be positive");
  const double inv_n = 1.0 / static_cast<double>(n);
  return WEstimate{linalg::SymMatrix::identity(n, inv_n), 0, true, inv_n, inv_n};
}

double dominant_root(double a1, double a2) {
  const double disc = std::sqrt(a1 * a1 + 4.0 * a2);
  if (a1 >= 0.0) return 0.5 * (a1 + disc);
  // a1 < 0: (a1 + disc) cancels; use q = 2 a2 / (disc - a1).
  return 2.0 * a2 / (disc - a1);
}

double condition_value(double beta, double sigma_min, double sigma_max) {
  return 4.0 * beta + 4.0 * beta * beta - (1.0 + beta) * sigma_min + beta * sigma_max;
}

RateReport rate_constants(double beta, double sigma_min, double sigma_max) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw ArgumentError("rate_constants: beta must be >= 0");
  if (!(sigma_min >= 0.0 && sigma_min <= sigma_max && sigma_max <= 1.0)) {
    throw ArgumentError("rate_constants: need 0 <= sigma_min <= sigma_max <= 1");
  }
  RateReport r;
  r.beta = beta;
  r.sigma_min = sigma_min;
  r.sigma_max = sigma_max;
  r.a1 = 1.0 + 2.0 * beta * beta + 3.0 * beta - (1.0 + beta) * sigma_min;
  r.a2 = 2.0 * beta * beta + beta + beta * sigma_max;
  r.q = dominant_root(r.a1, r.a2);
  r.delta = r.q - r.a1;
  r.condition = condition_value(beta, sigma_min, sigma_max);
  r.admissible = r.condition < 0.0;
  return r;
}

bool check_condition(double beta, const WEstimate& w) {
  return condition_value(beta, w.sigma_min, w.sigma_max) < 0.0;
}

double max_beta(double sigma_min, double sigma_max) {
  if (!(sigma_min >= 0.0 && sigma_min <= sigma_max)) {
    throw ArgumentError("max_beta: need 0 <= sigma_min <= sigma_max");
  }
  // 4b^2 + B b - C = 0, C >= 0. Positive root (-B + sqrt(B^2 + 16C)) / 8, rationalized.
  const double b = 4.0 - sigma_min + sigma_max;
  const double c = sigma_min;
  return 2.0 * c / (b + std::sqrt(b * b + 16.0 * c));
}

double max_beta_isotropic(std::size_t n) {
  if (n == 0) throw ArgumentError("max_beta_isotropic: n must be positive");
  const double c = 1.0 / (4.0 * static_cast<double>(n));
  // Root of b^2 + b - c: (-1 + sqrt(1 + 4c)) / 2 == 2c / (1 + sqrt(1 + 4c)).
  return 2.0 * c / (1.0 + std::sqrt(1.0 + 4.0 * c));
}

RecurrenceReport recurrence_oracle(double a1, double a2, double f0, std::size_t steps) {
  if (!(a2 > 0.0)) throw ArgumentError("recurrence_oracle: need a2 > 0");
  if (!(a1 + a2 < 1.0)) throw ArgumentError("recurrence_oracle: need a1 + a2 < 1");
  if (!(f0 >= 0.0)) throw ArgumentError("recurrence_oracle: need F_0 >= 0");

  RecurrenceReport report;
  report.q = dominant_root(a1, a2);
  report.delta = report.q - a1;
  report.values.reserve(steps + 2);
  report.values.push_back(f0);
  report.values.push_back(f0);
  report.bounds.reserve(steps + 1);
  double q_pow = 1.0;
  for (std::size_t t = 0; t <= steps; ++t) {
    if (t >= 1) {
      const double next = a1 * report.values[t] + a2 * report.values[t - 1];
      report.values.push_back(next);
    }
    const double bound = q_pow * (1.0 + report.delta) * f0;
    report.bounds.push_back(bound);
    if (t >= 1 && report.values[t + 1] > bound) ++report.violations;
    q_pow *= report.q;
  }
  return report;
}

double theorem_bound(std::size_t t, double q, double delta, double e0_sq) {
  return std::pow(q, static_cast<double>(t)) * (1.0 + delta) * e0_sq;
}

}  // namespace ohbk::theory
