#include "ohbk/sources.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "ohbk/errors.hpp"

namespace ohbk::sources {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  if (spare_) {
    const double z = *spare_;
    spare_.reset();
    return z;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  return u * factor;
}

std::size_t Rng::index(std::size_t n) {
  if (n == 0) throw ArgumentError("Rng::index: empty range");
  const std::uint64_t range = static_cast<std::uint64_t>(n);
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return static_cast<std::size_t>(x % range);
}

Rng make_rng(std::uint64_t seed) { return Rng(seed); }

linalg::Vector sample_gaussian_vector(Rng& rng, std::size_t n) {
  linalg::Vector v(n);
  for (double& x : v) x = rng.gaussian();
  return v;
}

linalg::Vector sample_uniform_vector(Rng& rng, std::size_t n, double lo, double hi) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw ArgumentError("sample_uniform_vector: need finite lo < hi");
  }
  linalg::Vector v(n);
  const double width = hi - lo;
  for (double& x : v) x = lo + width * rng.uniform();
  return v;
}

linalg::Vector sample_sphere_vector(Rng& rng, std::size_t n) {
  for (;;) {
    linalg::Vector v = sample_gaussian_vector(rng, n);
    const double len = linalg::norm(v);
    if (len == 0.0) continue;
    for (double& x : v) x /= len;
    return v;
  }
}

GroundTruth synthesize_ground_truth(Rng& rng, std::size_t n) {
  return {sample_gaussian_vector(rng, n)};
}

DataMatrix::DataMatrix(std::size_t rows, std::size_t cols, std::vector<double> values,
                       std::size_t dropped_rows)
    : rows_(rows), cols_(cols), values_(std::move(values)), dropped_(dropped_rows) {
  if (values_.size() != rows_ * cols_) throw DimensionError("DataMatrix: size mismatch");
}

std::string to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::gaussian: return "gaussian";
    case SourceKind::uniform: return "uniform";
    case SourceKind::sphere: return "sphere";
    case SourceKind::dataset: return "csv";
  }
  return "?";
}

std::string to_string(RowOrder order) {
  switch (order) {
    case RowOrder::cyclic: return "cyclic";
    case RowOrder::uniform_random: return "random";
    case RowOrder::once: return "once";
  }
  return "?";
}

SourceKind parse_source_kind(const std::string& name) {
  if (name == "gaussian") return SourceKind::gaussian;
  if (name == "uniform") return SourceKind::uniform;
  if (name == "sphere") return SourceKind::sphere;
  if (name == "csv" || name == "dataset") return SourceKind::dataset;
  throw ArgumentError("unknown source kind: " + name);
}

RowOrder parse_row_order(const std::string& name) {
  if (name == "cyclic") return RowOrder::cyclic;
  if (name == "random" || name == "uniform-random") return RowOrder::uniform_random;
  if (name == "once" || name == "stream-once") return RowOrder::once;
  throw ArgumentError("unknown row order: " + name);
}

SourceSpec SourceSpec::gaussian(std::size_t n, std::uint64_t seed) {
  SourceSpec s;
  s.kind = SourceKind::gaussian;
  s.dimension = n;
  s.seed = seed;
  return s;
}

SourceSpec SourceSpec::uniform(std::size_t n, double lo, double hi, std::uint64_t seed) {
  SourceSpec s;
  s.kind = SourceKind::uniform;
  s.dimension = n;
  s.lo = lo;
  s.hi = hi;
  s.seed = seed;
  return s;
}

SourceSpec SourceSpec::sphere(std::size_t n, std::uint64_t seed) {
  SourceSpec s;
  s.kind = SourceKind::sphere;
  s.dimension = n;
  s.seed = seed;
  return s;
}

SourceSpec SourceSpec::dataset(std::shared_ptr<const DataMatrix> data, RowOrder order,
                               std::uint64_t seed) {
  SourceSpec s;
  s.kind = SourceKind::dataset;
  s.dimension = data ? data->cols() : 0;
  s.data = std::move(data);
  s.order = order;
  s.seed = seed;
  return s;
}

SourceSpec SourceSpec::reseeded(std::uint64_t new_seed) const {
  SourceSpec s = *this;
  s.seed = new_seed;
  return s;
}

void SourceSpec::validate() const {
  if (kind == SourceKind::dataset && !data) throw ArgumentError("dataset source needs a loaded matrix");
  if (dimension == 0) throw DimensionError("source dimension must be positive");
  if (kind == SourceKind::uniform && !(lo < hi)) {
    throw ArgumentError("uniform source needs lo < hi");
  }
  if (kind == SourceKind::dataset) {
    if (data->rows() == 0) throw ArgumentError("dataset source has no rows");
    if (data->cols() != dimension) throw DimensionError("dataset width differs from dimension");
  }
}

std::string SourceSpec::describe() const {
  std::ostringstream out;
  out << to_string(kind);
  if (kind == SourceKind::uniform) out << "[" << lo << "," << hi << "]";
  if (kind == SourceKind::dataset) {
    out << "(" << data->rows() << "x" << data->cols() << "," << to_string(order) << ")";
  }
  out << " n=" << dimension << " seed=" << seed;
  return out.str();
}

std::optional<linalg::Vector> next_vector(SourceCursor& cursor, Rng& rng) {
  const SourceSpec& spec = *cursor.spec;
  const std::size_t n = spec.dimension;
  switch (spec.kind) {
    case SourceKind::gaussian:
      ++cursor.emitted;
      return sample_gaussian_vector(rng, n);
    case SourceKind::uniform:
      ++cursor.emitted;
      return sample_uniform_vector(rng, n, spec.lo, spec.hi);
    case SourceKind::sphere:
      ++cursor.emitted;
      return sample_sphere_vector(rng, n);
    case SourceKind::dataset: {
      const DataMatrix& data = *spec.data;
      std::size_t row = 0;
      switch (spec.order) {
        case RowOrder::cyclic:
          row = cursor.emitted % data.rows();
          break;
        case RowOrder::uniform_random:
          row = rng.index(data.rows());
          break;
        case RowOrder::once:
          if (cursor.emitted >= data.rows()) return std::nullopt;
          row = cursor.emitted;
          break;
      }
      ++cursor.emitted;
      const auto values = data.row(row);
      return linalg::Vector(std::vector<double>(values.begin(), values.end()));
    }
  }
  return std::nullopt;
}

std::optional<Measurement> next_measurement(SourceCursor& cursor, Rng& rng,
                                            const GroundTruth& truth) {
  auto phi = next_vector(cursor, rng);
  if (!phi) return std::nullopt;
  const double y = linalg::dot(*phi, truth.x_star);
  return Measurement{std::move(*phi), y};
}

MeasurementSource::MeasurementSource(SourceSpec spec)
    : spec_((spec.validate(), std::move(spec))),
      rng_(spec_.seed),
      truth_(synthesize_ground_truth(rng_, spec_.dimension)),
      cursor_{&spec_, 0} {}

std::optional<Measurement> MeasurementSource::next() {
  return next_measurement(cursor_, rng_, truth_);
}

void MeasurementSource::restart() {
  rng_ = Rng(spec_.seed);
  truth_ = synthesize_ground_truth(rng_, spec_.dimension);
  cursor_ = SourceCursor{&spec_, 0};
}

}  // namespace ohbk::sources
