#include "fbm/numerics/gauss_rules.h"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "fbm/errors.h"
#include "fbm/numerics/special.h"

namespace fbm::numerics {

GaussRule gauss_jacobi_unit(int n, double alpha, double beta) {
  if (n < 1) {
    throw DomainError("gauss_jacobi_unit: need at least one node");
  }
  if (!(alpha > -1.0) || !(beta > -1.0)) {
    throw DomainError("gauss_jacobi_unit: exponents must exceed -1");
  }

  // Classical Jacobi weight (1-x)^a (1+x)^b on [-1,1]; y = (1+x)/2 puts
  // the left exponent of the unit weight on b.
  const double a = beta;
  const double b = alpha;
  const double ab = a + b;

  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  diag(0) = (b - a) / (ab + 2.0);
  for (int k = 1; k < n; ++k) {
    const double kk = static_cast<double>(k);
    const double s = 2.0 * kk + ab;
    diag(k) = (b * b - a * a) / (s * (s + 2.0));
    double bk;
    if (k == 1) {
      bk = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      bk = 4.0 * kk * (kk + a) * (kk + b) * (kk + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    sub(k - 1) = std::sqrt(bk);
  }

  GaussRule rule;
  rule.nodes.resize(n);
  rule.complements.resize(n);
  rule.weights.resize(n);
  const double mu0 = beta_fn(alpha + 1.0, beta + 1.0);

  if (n == 1) {
    const double x = diag(0);
    rule.nodes[0] = 0.5 * (1.0 + x);
    rule.complements[0] = 0.5 * (1.0 - x);
    rule.weights[0] = mu0;
    return rule;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw DegeneracyError("gauss_jacobi_unit: eigen-decomposition failed");
  }
  const Eigen::VectorXd& x = solver.eigenvalues();
  const Eigen::MatrixXd& v = solver.eigenvectors();
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = 0.5 * (1.0 + x(i));
    rule.complements[i] = 0.5 * (1.0 - x(i));
    rule.weights[i] = mu0 * v(0, i) * v(0, i);
  }
  return rule;
}

} // namespace fbm::numerics
