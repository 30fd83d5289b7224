#include "fbm/linalg/matrix.h"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <optional>

#include "fbm/errors.h"
#include "fbm/simd/kernels.h"

namespace fbm::linalg {

double trace(const Matrix& a) {
  double t = 0.0;
  for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) {
    t += a(i, i);
  }
  return t;
}

void symmetrize(Matrix& a) {
  if (a.rows() != a.cols()) {
    throw DomainError("symmetrize: matrix must be square");
  }
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      const double m = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = m;
      a(j, i) = m;
    }
  }
}

double min_eigenvalue(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw DomainError("min_eigenvalue: matrix must be square");
  }
  if (a.rows() == 0) {
    return 0.0;
  }
  const auto n = static_cast<Eigen::Index>(a.rows());
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
      a.data().data(), n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw DegeneracyError("min_eigenvalue: eigen-decomposition failed");
  }
  return solver.eigenvalues().minCoeff();
}

namespace {

bool is_zero_row(const Matrix& a, std::size_t i) {
  for (std::size_t j = 0; j < a.cols(); ++j) {
    if (a(i, j) != 0.0 || a(j, i) != 0.0) {
      return false;
    }
  }
  return true;
}

std::optional<Matrix> try_cholesky(const Matrix& a, const std::vector<bool>& fixed, double shift) {
  const std::size_t n = a.rows();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    if (fixed[j]) {
      continue;
    }
    const auto lj = l.row(j).first(j);
    const double d = a(j, j) + shift - simd::dot(lj, lj);
    if (!(d > 0.0) || !std::isfinite(d)) {
      return std::nullopt;
    }
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      if (fixed[i]) {
        continue;
      }
      l(i, j) = (a(i, j) - simd::dot(l.row(i).first(j), lj)) / ljj;
    }
  }
  return l;
}

} // namespace

CholeskyFactor cholesky_jittered(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw DomainError("cholesky_jittered: matrix must be square");
  }
  const std::size_t n = a.rows();
  std::vector<bool> fixed(n);
  std::size_t active = 0;
  double tr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    fixed[i] = is_zero_row(a, i);
    if (!fixed[i]) {
      ++active;
      tr += a(i, i);
    }
  }
  if (active == 0) {
    return {Matrix(n, n), 0.0};
  }
  if (auto l = try_cholesky(a, fixed, 0.0)) {
    return {std::move(*l), 0.0};
  }
  const double scale = std::abs(tr) / static_cast<double>(active);
  for (double eps = 1e-14; eps <= 1.0000001e-8; eps *= 10.0) {
    if (auto l = try_cholesky(a, fixed, eps * scale)) {
      return {std::move(*l), eps * scale};
    }
  }
  throw DegeneracyError("cholesky_jittered: matrix is not positive definite even with jitter 1e-8*trace/n");
}

void forward_solve(const Matrix& lower, std::span<double> b) {
  const std::size_t n = lower.rows();
  if (b.size() != n) {
    throw DomainError("forward_solve: size mismatch");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double lii = lower(i, i);
    if (lii == 0.0) {
      b[i] = 0.0;
      continue;
    }
    b[i] = (b[i] - simd::dot(lower.row(i).first(i), b.first(i))) / lii;
  }
}

void back_solve(const Matrix& lower, std::span<double> b) {
  const std::size_t n = lower.rows();
  if (b.size() != n) {
    throw DomainError("back_solve: size mismatch");
  }
  for (std::size_t i = n; i-- > 0;) {
    const double lii = lower(i, i);
    b[i] = lii == 0.0 ? 0.0 : b[i] / lii;
    simd::axpy(-b[i], lower.row(i).first(i), b.first(i));
  }
}

void lower_multiply(const Matrix& lower, std::span<const double> z, std::span<double> out) {
  const std::size_t n = lower.rows();
  if (z.size() != n || out.size() != n) {
    throw DomainError("lower_multiply: size mismatch");
  }
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = simd::dot(lower.row(i).first(i + 1), z.first(i + 1));
  }
}

} // namespace fbm::linalg
