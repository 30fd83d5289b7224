#pragma once

#include "fbm/core/hurst.h"
#include "fbm/numerics/gauss_rules.h"
#include "fbm/numerics/quadrature.h"

namespace fbm::core {

/// Quadrature settings used for integrals of kernel products unless a caller
/// overrides them. The exponents are always replaced per call site.
numerics::QuadratureSpec default_kernel_quadrature();

/// β_H(τ) = ∫₁^τ w^{H-3/2} (w-1)^{H-1/2} dw for τ ≥ 1; τ = +∞ is allowed
/// and is finite only for H < 1/2.
double beta_h(double tau, Hurst h);

/// The Volterra kernel k_H(t,s) that maps Brownian motion to fBm,
///
///   k_H(t,s) = d_H [ (t/s)^{H-1/2} (t-s)^{H-1/2} - (H-1/2) s^{H-1/2} β_H(t/s) ],
///
/// together with the integrals of kernel products that every conditional
/// quantity reduces to. Construction precomputes the Gauss-Jacobi rules for
/// β_H; the object is immutable afterwards and safe to share across threads.
class VolterraKernel {
public:
  explicit VolterraKernel(Hurst h, const numerics::QuadratureSpec& quad = default_kernel_quadrature());
  /// Kernel with explicitly supplied constants (used to inject faults in
  /// verification runs).
  VolterraKernel(Hurst h, KernelConstants constants,
                 const numerics::QuadratureSpec& quad = default_kernel_quadrature());

  Hurst hurst() const noexcept { return h_; }
  const KernelConstants& constants() const noexcept { return c_; }
  const numerics::QuadratureSpec& quadrature() const noexcept { return quad_; }

  /// k_H(t,s) for 0 < s < t; throws DomainError otherwise.
  double operator()(double t, double s) const;

  /// k_H(t,s) with the gap t - s supplied by the caller, who can often form
  /// it without cancellation. No domain checks.
  double at_gap(double t, double s, double gap) const;

  /// β_H(τ) in split form: ratio = 1/τ and excess = 1 - 1/τ, both supplied.
  double beta_split(double ratio, double excess) const;

  /// ∫_a^b k(t1,v) k(t2,v) dv, 0 ≤ a < b ≤ min(t1,t2).
  double product_integral(double t1, double t2, double a, double b) const;

  /// ∫_a^b [k(t1,v) - k(t2,v)]² dv, 0 ≤ a < b ≤ min(t1,t2).
  double difference_square_integral(double t1, double t2, double a, double b) const;

private:
  double integrate(const numerics::WeightedIntegrand& f, double a, double b, double left_exp,
                   double right_exp) const;
  double gap_to(double t, double b, const numerics::Abscissa& p) const;

  Hurst h_;
  KernelConstants c_;
  numerics::QuadratureSpec quad_;
  numerics::GaussRule near_rule_; // weight y^{H-1/2}, for τ < 2
  numerics::GaussRule far_rule_;  // weight x^{1-2H}, for τ ≥ 2
  double far_constant_ = 0.0;     // Β(1-2H, H+1/2) - 1/(1-2H)
};

/// k_H(t,s), 0 < s < t.
double kernel_k(double t, double s, Hurst h);

/// Jost's hypergeometric form (t-s)^{H-1/2} F(1/2-H, H-1/2, H+1/2; (s-t)/s),
/// normalised to a unit prefactor. Requires H > 1/2 and 0 < s < t. Equals
/// k_H(t,s) up to a factor that does not depend on s.
double kernel_k_hypergeom(double t, double s, Hurst h);

/// ∫₀ᵗ [k(t,v) - k(s,v)]² dv - (t-s)^{2H} for 0 < s ≤ t, which vanishes when
/// the kernel represents fBm. Only rule, nodes and rel_tol of quad are used.
double isometry_gap(double t, double s, Hurst h,
                    const numerics::QuadratureSpec& quad = default_kernel_quadrature());
double isometry_gap(double t, double s, const VolterraKernel& kernel);

} // namespace fbm::core
