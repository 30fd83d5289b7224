#include "fbm/numerics/special.h"

#include <cmath>
#include <string>

#include "fbm/errors.h"
#include "fbm/numerics/quadrature.h"

namespace fbm::numerics {

double ln_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("ln_gamma: argument must be positive and finite, got " + std::to_string(x));
  }
  // lgamma_r leaves the global signgam alone, so concurrent callers do not race.
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

double beta_fn(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw DomainError("beta_fn: arguments must be positive");
  }
  return std::exp(ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b));
}

double gauss_2f1(double a, double b, double c, double x) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(x)) {
    throw UnsupportedDomainError("gauss_2f1: non-finite parameter");
  }
  if (!(b > 0.0) || !(c > b) || !(x < 1.0)) {
    throw UnsupportedDomainError("gauss_2f1: only the Euler domain c > b > 0, x < 1 is supported");
  }
  if (x == 0.0 || a == 0.0) {
    return 1.0;
  }

  QuadratureSpec spec;
  spec.rule = Rule::AdaptiveSubdivision;
  spec.alpha = b - 1.0;
  spec.beta = c - b - 1.0;
  spec.rel_tol = 1e-12;

  // 1 - x t written as a sum of non-negative terms near the end where it can vanish.
  auto integrand = [a, x](const Abscissa& p) {
    const double base = x <= 0.0 ? 1.0 - x * p.from_left : (1.0 - x) + x * p.from_right;
    return std::pow(base, -a);
  };
  const QuadratureResult r = integrate_weighted(WeightedIntegrand(integrand), 0.0, 1.0, spec);
  return r.value / beta_fn(b, c - b);
}

} // namespace fbm::numerics
