#pragma once

#include <cstdint>
#include <vector>

#include "fbm/core/kernel.h"
#include "fbm/linalg/matrix.h"

namespace fbm::prediction {

/// Discretely observed trajectory on [0,u]: times[0] = 0, values[0] = 0,
/// times strictly increasing, u = times.back().
class ObservedPath {
public:
  /// Throws DomainError if the invariants above do not hold.
  ObservedPath(std::vector<double> times, std::vector<double> values);

  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double u() const noexcept { return times_.back(); }
  double last_value() const noexcept { return values_.back(); }
  std::size_t size() const noexcept { return times_.size(); }

private:
  std::vector<double> times_;
  std::vector<double> values_;
};

/// Quadrature used for the z-integral inside Ψ.
numerics::QuadratureSpec default_psi_quadrature();

/// Prediction weight
///   Ψ(t,s|u) = -(sin(π(H-1/2))/π) s^{1/2-H} (u-s)^{1/2-H} ∫_u^t z^{H-1/2}(z-u)^{H-1/2}/(z-s) dz
/// for 0 < s < u ≤ t.
double psi(double t, double s, double u, core::Hurst h,
           const numerics::QuadratureSpec& quad = default_psi_quadrature());

/// Same, with u - s supplied by the caller (exact when s is formed as an
/// offset from u).
double psi_at_gap(double t, double s, double u, double u_minus_s, core::Hurst h,
                  const numerics::QuadratureSpec& quad = default_psi_quadrature());

/// Grading applied to the first and last observation cells when
/// |H - 1/2| exceeds kGradingThreshold.
inline constexpr double kGradingThreshold = 0.05;
inline constexpr int kGradedCells = 16;
inline constexpr double kGradingFactor = 0.5;

/// Cell weights w_i with  m̂_t(u) = B_u - Σ w_i (values[i+1] - values[i]).
/// Interior cells use Ψ at the cell midpoint. The first and last cells are
/// split geometrically towards 0 and u, the path being linear inside them,
/// so their weight is the length-weighted mean of Ψ over the subcells.
std::vector<double> prediction_weights(const std::vector<double>& times, double t, core::Hurst h,
                                       const numerics::QuadratureSpec& quad = default_psi_quadrature());

/// Conditional mean m̂_t(u) for t ≥ u. Exactly B_u when H is near 1/2 or t = u.
double cond_mean(const ObservedPath& path, double t, core::Hurst h,
                 const numerics::QuadratureSpec& quad = default_psi_quadrature());

/// Conditional covariance in both forms.
struct CovarianceForms {
  double value;      // ∫_u^{t∧s} k(t,v) k(s,v) dv
  double diagnostic; // r(t,s) - ∫₀^u k(t,v) k(s,v) dv
  bool consistent;   // |value - diagnostic| ≤ 1e-4 max(1, r(t,s))
};

inline constexpr double kTwoFormTolerance = 1e-4;

CovarianceForms cond_cov_forms(double t, double s, double u, const core::VolterraKernel& kernel);

/// r̂(t,s|u) = ∫_u^{t∧s} k(t,v) k(s,v) dv for 0 < u ≤ min(t,s).
double cond_cov(double t, double s, double u, core::Hurst h);
double cond_cov(double t, double s, double u, const core::VolterraKernel& kernel);

/// Gaussian law of the future values on a grid of times ≥ u.
struct ConditionalLaw {
  double u = 0.0;
  std::vector<double> grid;
  std::vector<double> mean;
  linalg::Matrix cov;
};

/// Assemble mean and covariance on grid; the covariance is symmetrised and
/// checked for positive semidefiniteness (eigenvalues ≥ -1e-10 trace).
/// Throws DegeneracyError on failure.
/// quad sets rule and tolerance for both the kernel products and Ψ.
ConditionalLaw build_conditional_law(const ObservedPath& path, const std::vector<double>& grid, core::Hurst h,
                                     const numerics::QuadratureSpec& quad = core::default_kernel_quadrature());

/// n_paths draws from the law, one per row: mean + L z with L the jittered
/// Cholesky factor. Path i uses its own generator seeded from (seed, i), so
/// the output depends only on (law, seed) and not on evaluation order.
linalg::Matrix sample_conditional_paths(const ConditionalLaw& law, std::size_t n_paths, std::uint64_t seed);

/// d⟨m̂_t⟩_u / du = k(t,u)² for 0 < u < t.
double bracket_density(double t, double u, core::Hurst h);

} // namespace fbm::prediction
