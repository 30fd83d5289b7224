#include "fbm/core/hurst.h"

#include <cmath>
#include <numbers>
#include <string>

#include "fbm/errors.h"
#include "fbm/numerics/special.h"

namespace fbm::core {

Hurst::Hurst(double h) : h_(h), near_half_(std::abs(h - 0.5) < kNearHalfBand) {
  if (!(h > 0.0 && h < 1.0)) {
    throw DomainError("Hurst index must lie in (0,1), got " + std::to_string(h));
  }
}

KernelConstants kernel_constants(Hurst h) {
  if (h.near_half()) {
    return {1.0, 1.0};
  }
  using numerics::ln_gamma;
  const double H = h.value();
  const double x = h.excess();
  const double ln_d2 = std::log(2.0 * H) + ln_gamma(1.5 - H) - ln_gamma(H + 0.5) - ln_gamma(2.0 - 2.0 * H);
  const double px = std::numbers::pi * x;
  // π x / sin(π x) is positive on (-π/2, π/2)
  const double sigma2 = (px / std::sin(px)) * 2.0 * H * std::exp(-ln_gamma(2.0 - 2.0 * H));
  return {std::exp(0.5 * ln_d2), std::sqrt(sigma2)};
}

double fbm_cov(double t, double s, Hurst h) {
  if (!(t >= 0.0) || !(s >= 0.0)) {
    throw DomainError("fbm_cov: times must be non-negative");
  }
  if (h.near_half()) {
    return std::min(t, s);
  }
  const double p = 2.0 * h.value();
  return 0.5 * (std::pow(t, p) + std::pow(s, p) - std::pow(std::abs(t - s), p));
}

} // namespace fbm::core
