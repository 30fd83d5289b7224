#pragma once

#include <string_view>
#include <vector>

#include "fbm/core/kernel.h"

namespace fbm::asymptotics {

enum class Regime {
  NoInfoSmallH,   // u → 0, H < 1/2: r - r̂ ~ C_H u^{2H}
  NoInfoLargeH,   // u → 0, H > 1/2: r - r̂ ~ d²(ts)^{2H-1}/(8-8H) u^{2-2H}
  FullInfoDiag,   // u → s, r̂(s,s|u) ~ d²/(2H) (s-u)^{2H}
  FullInfoOffDiag // u → s < t, r̂(t,s|u) ~ C_{H,t,s} (s-u)^{H+1/2}
};

std::string_view to_string(Regime regime);
Regime regime_from_string(std::string_view name);

/// (d²/2H)(H-1/2)² β_H(∞)². H < 1/2, else RegimeError.
double c_no_info_small(core::Hurst h);

/// d²(ts)^{2H-1}/(8-8H). H > 1/2, else RegimeError.
double c_no_info_large(core::Hurst h, double t, double s);

/// d²/(H+1/2) [(t/s)^{H-1/2}(t-s)^{H-1/2} + (1/2-H) s^{H-1/2} β_H(t/s)] for
/// 0 < s < t; RegimeError if t ≤ s.
double c_full_info(core::Hurst h, double t, double s);

/// d²/(2H).
double full_info_diag_constant(core::Hurst h);

/// Normalised no-information diagnostic at t = s = 1, tending to 1 as u → 0:
/// H > 1/2: (8-8H)/d² (1 - r̂(1,1|u)) / u^{2-2H};
/// H < 1/2: (1 - r̂(1,1|u)) / (C_H u^{2H}).
/// Exactly 1 near H = 1/2 (where 1 - r̂ = u).
double g_diagnostic(double u, core::Hurst h);

/// (2H/d²) r̂(1,1|u) / (1-u)^{2H}, tending to 1 as u → 1.
double f_diagnostic(double u, core::Hurst h);

struct PowerLawFit {
  double exponent;
  double constant;
  double r_squared;
};

inline constexpr double kMinRSquared = 0.99;

/// Least squares of log y against log x. Needs ≥ 4 points, all positive;
/// throws FitError if the fit is degenerate or R² < kMinRSquared.
PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

/// Principal exponent and constant of a regime.
struct Target {
  double exponent;
  double constant;
};
Target regime_target(Regime regime, core::Hurst h, double t, double s);

struct AsymptoticReport {
  Regime regime;
  double t;
  double s;
  std::vector<double> u_grid;     // conditioning horizons, moving towards 0 or s
  std::vector<double> distance;   // u (no-info) or s - u (full-info)
  std::vector<double> residual;   // r - r̂ (no-info) or r̂ (full-info)
  std::vector<double> diagnostic; // residual / (target constant · distance^exponent)
  double fitted_exponent;
  double fitted_constant;         // exp(intercept) of the log-log fit
  double r_squared;
  double extrapolated_constant;   // limit of residual/distance^target_exponent
  double target_exponent;
  double target_constant;
};

/// Geometric distances d_k = d0 · ratio^k, k = 0..count-1.
std::vector<double> geometric_distances(double d0, double ratio, std::size_t count);

/// Evaluates the regime's residual on the given distances and fits it.
/// The extrapolated constant applies Aitken's Δ² to the last three ratios
/// residual/distance^target_exponent, which on a geometric grid removes a
/// correction term of the form c·distance^q for any q > 0.
AsymptoticReport asymptotic_sweep(Regime regime, core::Hurst h, double t, double s,
                                  const std::vector<double>& distances,
                                  const numerics::QuadratureSpec& quad = core::default_kernel_quadrature());

/// The four terms whose integral over [0,u] gives the covariance reduction:
/// r̂(t,s|u) - r(t,s) = -d² ∫₀^u (I₁+I₂+I₃+I₄) dv.
struct DecompositionTerms {
  double i1, i2, i3, i4; // ∫₀^u I_j(t,s,v) dv
  double total;          // -d² (i1+i2+i3+i4)
};

/// Requires 0 < u < min(t,s).
DecompositionTerms decomposition(double t, double s, double u, const core::VolterraKernel& kernel);

} // namespace fbm::asymptotics
