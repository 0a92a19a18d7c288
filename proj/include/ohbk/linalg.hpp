#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace ohbk::linalg {

/// Dense real vector of fixed, nonzero length.
class Vector {
 public:
  explicit Vector(std::size_t n, double fill = 0.0);
  Vector(std::initializer_list<double> values);
  explicit Vector(std::vector<double> values);

  std::size_t size() const noexcept { return data_.size(); }

  double& operator[](std::size_t i) noexcept { return data_[i]; }
  double operator[](std::size_t i) const noexcept { return data_[i]; }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  bool all_finite() const noexcept;

  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  std::vector<double> data_;
};

/// Canonical basis vector e_i of length n (0-based index).
Vector unit_vector(std::size_t n, std::size_t i);

double dot(const Vector& u, const Vector& v);
double norm_sq(const Vector& v);
double norm(const Vector& v);
/// alpha * x + y
Vector axpy(double alpha, const Vector& x, const Vector& y);
/// ||u - v||
double distance(const Vector& u, const Vector& v);

/// Symmetric matrix in full square storage. Every write goes to both
/// (i, j) and (j, i), so the two entries always hold the same value.
class SymMatrix {
 public:
  explicit SymMatrix(std::size_t order);

  static SymMatrix identity(std::size_t order, double scale = 1.0);
  static SymMatrix diagonal(std::span<const double> diag);
  /// Builds from a row-major square array; throws unless it is exactly symmetric.
  static SymMatrix from_rows(std::size_t order, std::span<const double> row_major);

  std::size_t order() const noexcept { return order_; }

  double operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * order_ + j];
  }
  void set(std::size_t i, std::size_t j, double value) noexcept {
    data_[i * order_ + j] = value;
    data_[j * order_ + i] = value;
  }

  std::span<const double> row_major() const noexcept { return data_; }

  double trace() const noexcept;
  void scale(double factor) noexcept;

 private:
  std::size_t order_;
  std::vector<double> data_;
};

/// M += weight * v v^T.
void rank1_accumulate(SymMatrix& m, const Vector& v, double weight);

double frobenius_norm(const SymMatrix& m);
double frobenius_distance(const SymMatrix& a, const SymMatrix& b);

struct JacobiOptions {
  // Stop once the off-diagonal Frobenius norm falls below
  // tolerance * max(1, ||M||_F).
  double tolerance = 1e-12;
  int max_sweeps = 50;
};

/// All eigenvalues of a symmetric matrix, ascending, by cyclic Jacobi rotations.
/// Throws NumericalError if the off-diagonal mass has not vanished after
/// max_sweeps sweeps, or if the input holds non-finite entries.
std::vector<double> sym_eigenvalues(const SymMatrix& m, const JacobiOptions& options = {});

}  // namespace ohbk::linalg
