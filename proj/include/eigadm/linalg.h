#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace eigadm {

/// Dense row-major real matrix. Sized for the small p used here.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const double> data() const noexcept { return data_; }

  Matrix transposed() const;
  double frobenius_norm() const noexcept;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);

/// Largest absolute entrywise difference; dimensions must agree.
double max_abs_diff(const Matrix& a, const Matrix& b);

/// Square matrix whose symmetry is maintained on every write.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(std::size_t p) : m_(p, p) {}

  /// Copies a square matrix. Throws invalid_input if |a_ij - a_ji| exceeds
  /// `tolerance` times the largest entry magnitude; the upper triangle wins.
  static SymmetricMatrix from_matrix(const Matrix& a, double tolerance = 0.0);

  std::size_t size() const noexcept { return m_.rows(); }
  double operator()(std::size_t i, std::size_t j) const noexcept { return m_(i, j); }
  void set(std::size_t i, std::size_t j, double value) noexcept {
    m_(i, j) = value;
    m_(j, i) = value;
  }
  const Matrix& matrix() const noexcept { return m_; }

 private:
  Matrix m_;
};

/// Element of O(p).
class OrthogonalMatrix {
 public:
  /// Wraps `q` without checking; callers guarantee orthogonality.
  explicit OrthogonalMatrix(Matrix q) : q_(std::move(q)) {}

  std::size_t size() const noexcept { return q_.rows(); }
  double operator()(std::size_t i, std::size_t j) const noexcept { return q_(i, j); }
  const Matrix& matrix() const noexcept { return q_; }

  /// max |H^T H - I|.
  double orthogonality_error() const;

 private:
  Matrix q_;
};

struct HouseholderQr {
  Matrix q;
  Matrix r;
};

/// Householder QR of a square matrix: a = q r, q orthogonal, r upper triangular.
HouseholderQr householder_qr(const Matrix& a);

struct SymmetricEigen {
  std::vector<double> values;  // descending
  Matrix vectors;              // columns are eigenvectors, same order as values
  int sweeps = 0;
};

/// Cyclic Jacobi eigensolver. Stops once the off-diagonal Frobenius norm
/// drops below 1e-12 of the full Frobenius norm, or after 100 sweeps.
/// Throws invalid_input on non-finite entries.
SymmetricEigen symmetric_eigen(const SymmetricMatrix& m);

}  // namespace eigadm
