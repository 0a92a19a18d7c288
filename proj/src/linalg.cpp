#include "ohbk/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "ohbk/errors.hpp"

namespace ohbk::linalg {

namespace {

void require_same_length(const Vector& u, const Vector& v, const char* op) {
  if (u.size() != v.size()) {
    throw DimensionError(std::string(op) + ": length mismatch (" + std::to_string(u.size()) +
                         " vs " + std::to_string(v.size()) + ")");
  }
}

void require_nonempty(std::size_t n) {
  if (n == 0) throw DimensionError("vector length must be positive");
}

}  // namespace

Vector::Vector(std::size_t n, double fill) : data_(n, fill) { require_nonempty(n); }

Vector::Vector(std::initializer_list<double> values) : data_(values) {
  require_nonempty(data_.size());
}

Vector::Vector(std::vector<double> values) : data_(std::move(values)) {
  require_nonempty(data_.size());
}

bool Vector::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

Vector unit_vector(std::size_t n, std::size_t i) {
  if (i >= n) throw DimensionError("unit_vector: index out of range");
  Vector e(n);
  e[i] = 1.0;
  return e;
}

double dot(const Vector& u, const Vector& v) {
  require_same_length(u, v, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

double norm_sq(const Vector& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

double norm(const Vector& v) { return std::sqrt(norm_sq(v)); }

Vector axpy(double alpha, const Vector& x, const Vector& y) {
  require_same_length(x, y, "axpy");
  Vector out = y;
  for (std::size_t i = 0; i < x.size(); ++i) out[i] += alpha * x[i];
  return out;
}

double distance(const Vector& u, const Vector& v) {
  require_same_length(u, v, "distance");
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = u[i] - v[i];
    s += d * d;
  }
  return std::sqrt(s);
}

SymMatrix::SymMatrix(std::size_t order) : order_(order), data_(order * order, 0.0) {
  if (order == 0) throw DimensionError("matrix order must be positive");
}

SymMatrix SymMatrix::identity(std::size_t order, double scale) {
  SymMatrix m(order);
  for (std::size_t i = 0; i < order; ++i) m.set(i, i, scale);
  return m;
}

SymMatrix SymMatrix::diagonal(std::span<const double> diag) {
  SymMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m.set(i, i, diag[i]);
  return m;
}

SymMatrix SymMatrix::from_rows(std::size_t order, std::span<const double> row_major) {
  if (row_major.size() != order * order) {
    throw DimensionError("from_rows: expected " + std::to_string(order * order) + " entries");
  }
  SymMatrix m(order);
  for (std::size_t i = 0; i < order; ++i) {
    for (std::size_t j = i; j < order; ++j) {
      if (row_major[i * order + j] != row_major[j * order + i]) {
        throw ArgumentError("from_rows: input is not symmetric");
      }
      m.set(i, j, row_major[i * order + j]);
    }
  }
  return m;
}

double SymMatrix::trace() const noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < order_; ++i) s += data_[i * order_ + i];
  return s;
}

void SymMatrix::scale(double factor) noexcept {
  for (double& x : data_) x *= factor;
}

void rank1_accumulate(SymMatrix& m, const Vector& v, double weight) {
  const std::size_t n = m.order();
  if (v.size() != n) throw DimensionError("rank1_accumulate: order/length mismatch");
  if (weight == 0.0) return;
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = weight * v[i];
    for (std::size_t j = i; j < n; ++j) m.set(i, j, m(i, j) + wi * v[j]);
  }
}

double frobenius_norm(const SymMatrix& m) {
  double s = 0.0;
  for (double x : m.row_major()) s += x * x;
  return std::sqrt(s);
}

double frobenius_distance(const SymMatrix& a, const SymMatrix& b) {
  if (a.order() != b.order()) throw DimensionError("frobenius_distance: order mismatch");
  const auto ra = a.row_major();
  const auto rb = b.row_major();
  double s = 0.0;
  for (std::size_t k = 0; k < ra.size(); ++k) {
    const double d = ra[k] - rb[k];
    s += d * d;
  }
  return std::sqrt(s);
}

std::vector<double> sym_eigenvalues(const SymMatrix& m, const JacobiOptions& options) {
  const std::size_t n = m.order();
  std::vector<double> a(m.row_major().begin(), m.row_major().end());
  for (double x : a) {
    if (!std::isfinite(x)) throw NumericalError("sym_eigenvalues: non-finite matrix entry");
  }
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };

  auto off_diagonal_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += at(i, j) * at(i, j);
    return std::sqrt(2.0 * s);
  };

  const double threshold = options.tolerance * std::max(1.0, frobenius_norm(m));
  double off = off_diagonal_norm();
  int sweep = 0;
  while (off > threshold) {
    if (sweep == options.max_sweeps) {
      std::ostringstream msg;
      msg << "sym_eigenvalues: no convergence after " << sweep << " sweeps (order " << n
          << ", off-diagonal norm " << off << ", threshold " << threshold << ")";
      throw NumericalError(msg.str());
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        at(p, p) -= t * apq;
        at(q, q) += t * apq;
        at(p, q) = 0.0;
        at(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double g = at(r, p);
          const double h = at(r, q);
          const double rp = g - s * (h + g * tau);
          const double rq = h + s * (g - h * tau);
          at(r, p) = at(p, r) = rp;
          at(r, q) = at(q, r) = rq;
        }
      }
    }
    ++sweep;
    off = off_diagonal_norm();
  }

  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = at(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

}  // namespace ohbk::linalg
