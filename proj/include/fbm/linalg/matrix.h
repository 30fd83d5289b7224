#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fbm::linalg {

/// Dense row-major matrix of doubles.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  bool operator==(const Matrix&) const = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double trace(const Matrix& a);

/// Replace a by (a + aᵀ)/2.
void symmetrize(Matrix& a);

/// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const Matrix& a);

struct CholeskyFactor {
  Matrix lower;
  double jitter = 0.0; // diagonal shift that was needed, 0 if none
};

/// Cholesky factorisation with escalating diagonal jitter: first unshifted,
/// then shifts of 1e-14, 1e-13, ..., 1e-8 times trace/n. Rows and columns that
/// are identically zero are treated as deterministic components and get a zero
/// row in the factor. Throws DegeneracyError when every shift fails.
CholeskyFactor cholesky_jittered(const Matrix& a);

/// Solve L x = b in place (L lower triangular, b overwritten by x).
/// Zero diagonal entries (deterministic components) give x = 0.
void forward_solve(const Matrix& lower, std::span<double> b);

/// Solve Lᵀ x = b in place, same conventions as forward_solve.
void back_solve(const Matrix& lower, std::span<double> b);

/// out = L z for lower-triangular L.
void lower_multiply(const Matrix& lower, std::span<const double> z, std::span<double> out);

} // namespace fbm::linalg
