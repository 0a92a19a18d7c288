#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ohbk/linalg.hpp"

namespace ohbk::sources {

/// Project-wide pseudo-random generator.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard, so a given seed replays the same stream on every conforming
/// platform. Floating-point draws are derived here rather than through
/// <random> distributions, whose algorithms are implementation-defined:
///   - uniform(): top 53 bits of one engine word, scaled to [0, 1)
///   - gaussian(): polar Box-Muller (Marsaglia) on uniform(), caching the
///     second deviate of each accepted pair
///   - index(n): rejection sampling on engine words, unbiased in [0, n)
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  double uniform();
  double gaussian();
  std::size_t index(std::size_t n);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

Rng make_rng(std::uint64_t seed);

linalg::Vector sample_gaussian_vector(Rng& rng, std::size_t n);
/// i.i.d. entries on [lo, hi); throws ArgumentError unless lo < hi.
linalg::Vector sample_uniform_vector(Rng& rng, std::size_t n, double lo, double hi);
/// Gaussian direction normalized to unit length; zero draws are resampled.
linalg::Vector sample_sphere_vector(Rng& rng, std::size_t n);

/// One streamed pair (phi_t, y_t).
struct Measurement {
  linalg::Vector phi;
  double y;
};

/// Hidden signal x*. Only used to produce responses and to measure error.
struct GroundTruth {
  linalg::Vector x_star;
};

GroundTruth synthesize_ground_truth(Rng& rng, std::size_t n);

/// Numeric table of dataset rows, row-major.
class DataMatrix {
 public:
  DataMatrix(std::size_t rows, std::size_t cols, std::vector<double> values,
             std::size_t dropped_rows = 0);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t dropped_rows() const noexcept { return dropped_; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {values_.data() + i * cols_, cols_};
  }
  double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * cols_ + j]; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;
  std::size_t dropped_;
};

enum class SourceKind { gaussian, uniform, sphere, dataset };
enum class RowOrder { cyclic, uniform_random, once };

std::string to_string(SourceKind kind);
std::string to_string(RowOrder order);
SourceKind parse_source_kind(const std::string& name);
RowOrder parse_row_order(const std::string& name);

struct SourceSpec {
  SourceKind kind = SourceKind::gaussian;
  std::size_t dimension = 1;
  double lo = 0.0;  // uniform only
  double hi = 1.0;  // uniform only
  std::shared_ptr<const DataMatrix> data;  // dataset only
  RowOrder order = RowOrder::cyclic;       // dataset only
  std::uint64_t seed = 0;

  static SourceSpec gaussian(std::size_t n, std::uint64_t seed);
  static SourceSpec uniform(std::size_t n, double lo, double hi, std::uint64_t seed);
  static SourceSpec sphere(std::size_t n, std::uint64_t seed);
  static SourceSpec dataset(std::shared_ptr<const DataMatrix> data, RowOrder order,
                            std::uint64_t seed);

  /// Same source with a different seed.
  SourceSpec reseeded(std::uint64_t new_seed) const;
  /// Throws ArgumentError / DimensionError if the fields are inconsistent.
  void validate() const;
  std::string describe() const;
};

/// Position of a source within its stream. Holds no randomness and no
/// ground truth; those are passed to next_measurement.
struct SourceCursor {
  const SourceSpec* spec;
  std::size_t emitted = 0;
};

/// Draws the next measurement vector only. Returns nullopt once a
/// stream-once dataset is exhausted.
std::optional<linalg::Vector> next_vector(SourceCursor& cursor, Rng& rng);

/// Next (phi, <phi, x*>) pair, or nullopt at end of a stream-once dataset.
std::optional<Measurement> next_measurement(SourceCursor& cursor, Rng& rng,
                                            const GroundTruth& truth);

/// A seeded, restartable measurement stream. Construction seeds the
/// generator with spec.seed, draws x* from it, then streams measurements from
/// the same generator; two sources built from equal specs emit identical
/// sequences.
class MeasurementSource {
 public:
  explicit MeasurementSource(SourceSpec spec);
  MeasurementSource(const MeasurementSource&) = delete;
  MeasurementSource& operator=(const MeasurementSource&) = delete;

  const SourceSpec& spec() const noexcept { return spec_; }
  std::size_t dimension() const noexcept { return spec_.dimension; }
  const GroundTruth& ground_truth() const noexcept { return truth_; }
  std::size_t emitted() const noexcept { return cursor_.emitted; }

  std::optional<Measurement> next();
  void restart();

 private:
  SourceSpec spec_;
  Rng rng_;
  GroundTruth truth_;
  SourceCursor cursor_;
};

}  // namespace ohbk::sources
