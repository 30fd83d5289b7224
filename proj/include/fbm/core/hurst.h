#pragma once

namespace fbm::core {

/// Width of the band around H = 1/2 inside which every kernel quantity is
/// replaced by its exact Brownian value.
inline constexpr double kNearHalfBand = 1e-6;

/// Validated Hurst index H ∈ (0,1).
class Hurst {
public:
  /// Throws DomainError unless 0 < h < 1.
  explicit Hurst(double h);

  double value() const noexcept { return h_; }
  /// H - 1/2, the exponent that recurs throughout the kernel.
  double excess() const noexcept { return h_ - 0.5; }
  bool near_half() const noexcept { return near_half_; }

private:
  double h_;
  bool near_half_;
};

struct KernelConstants {
  double d = 1.0;     // d_H, normalisation of the Volterra kernel
  double sigma = 1.0; // σ_H, normalisation of the fractional operator
};

/// d_H = sqrt(2H Γ(3/2-H) / (Γ(H+1/2) Γ(2-2H)))
/// σ_H = sqrt(π(H-1/2) 2H / (Γ(2-2H) sin(π(H-1/2))))
/// Both are exactly 1 inside the near-half band.
KernelConstants kernel_constants(Hurst h);

/// fBm covariance ½[t^{2H} + s^{2H} - |t-s|^{2H}], t, s ≥ 0.
double fbm_cov(double t, double s, Hurst h);

} // namespace fbm::core
