#include "fbm/core/kernel.h"

#include <cmath>
#include <limits>

#include "fbm/errors.h"
#include "fbm/numerics/special.h"

namespace fbm::core {

namespace {

constexpr int kBetaNodes = 16;

double two_h(Hurst h) { return h.near_half() ? 1.0 : 2.0 * h.value(); }

} // namespace

numerics::QuadratureSpec default_kernel_quadrature() {
  numerics::QuadratureSpec spec;
  spec.rule = numerics::Rule::AdaptiveSubdivision;
  spec.nodes = 16;
  spec.rel_tol = numerics::kSmoothRelTol;
  return spec;
}

VolterraKernel::VolterraKernel(Hurst h, const numerics::QuadratureSpec& quad)
    : VolterraKernel(h, kernel_constants(h), quad) {}

VolterraKernel::VolterraKernel(Hurst h, KernelConstants constants, const numerics::QuadratureSpec& quad)
    : h_(h), c_(constants), quad_(quad) {
  quad_.alpha = 0.0;
  quad_.beta = 0.0;
  quad_.validate();
  if (h_.near_half()) {
    return;
  }
  const double x = h_.excess();
  const double a = 1.0 - 2.0 * h_.value();
  near_rule_ = numerics::gauss_jacobi_unit(kBetaNodes, x, 0.0);
  far_rule_ = numerics::gauss_jacobi_unit(kBetaNodes, a, 0.0);
  // Β(a,b) - 1/a with a = 1-2H, b = H+1/2, continued to a ∈ (-1,0) through
  // Β(a,b) = Γ(a+1)Γ(b) / (a Γ(a+b)).
  using numerics::ln_gamma;
  const double b = h_.value() + 0.5;
  far_constant_ = std::expm1(ln_gamma(a + 1.0) + ln_gamma(b) - ln_gamma(a + b)) / a;
}

double VolterraKernel::beta_split(double ratio, double excess) const {
  if (excess == 0.0) {
    return 0.0;
  }
  if (h_.near_half()) {
    return ratio >= 0.5 ? -std::log1p(-excess) : -std::log(ratio);
  }
  const double x = h_.excess();
  const double H = h_.value();
  if (ratio == 0.0) {
    return H < 0.5 ? far_constant_ + 1.0 / (1.0 - 2.0 * H) : std::numeric_limits<double>::infinity();
  }
  if (excess <= 0.5) {
    // ∫₀^ℓ y^{H-1/2} (1-y)^{-2H} dy, with 1 - y = ratio + (ℓ - y).
    double s = 0.0;
    for (std::size_t i = 0; i < near_rule_.size(); ++i) {
      s += near_rule_.weights[i] * std::pow(ratio + excess * near_rule_.complements[i], -2.0 * H);
    }
    return std::pow(excess, x + 1.0) * s;
  }
  // In x = 1/w: ∫_m^1 x^{a-1}(1-x)^{H-1/2} dx with a = 1-2H, split as
  // ∫_m^1 x^{a-1} dx + [Β(a,b) - 1/a] - ∫₀^m x^{a-1}[(1-x)^{H-1/2} - 1] dx.
  const double a = 1.0 - 2.0 * H;
  const double power_part = -std::expm1(a * std::log(ratio)) / a;
  double s = 0.0;
  for (std::size_t i = 0; i < far_rule_.size(); ++i) {
    const double y = ratio * far_rule_.nodes[i];
    s += far_rule_.weights[i] * std::expm1(x * std::log1p(-y)) / y;
  }
  const double remainder = std::pow(ratio, a + 1.0) * s;
  return power_part + far_constant_ - remainder;
}

double VolterraKernel::at_gap(double t, double s, double gap) const {
  if (h_.near_half()) {
    return 1.0;
  }
  const double x = h_.excess();
  const double ratio = s / t;
  const double excess = gap / t;
  const double first = std::pow(gap / ratio, x);
  const double second = x * std::pow(s, x) * beta_split(ratio, excess);
  return c_.d * (first - second);
}

double VolterraKernel::operator()(double t, double s) const {
  if (!(s > 0.0) || !(s < t) || !std::isfinite(t)) {
    throw DomainError("kernel_k: need 0 < s < t");
  }
  return at_gap(t, s, t - s);
}

double VolterraKernel::gap_to(double t, double b, const numerics::Abscissa& p) const {
  return t == b ? p.from_right : (t - b) + p.from_right;
}

double VolterraKernel::integrate(const numerics::WeightedIntegrand& f, double a, double b, double left_exp,
                                 double right_exp) const {
  return numerics::integrate_weighted(f, a, b, quad_.with_exponents(left_exp, right_exp)).value;
}

double VolterraKernel::product_integral(double t1, double t2, double a, double b) const {
  if (!(a >= 0.0) || !(a < b) || !(b <= t1) || !(b <= t2)) {
    throw DomainError("product_integral: need 0 <= a < b <= min(t1,t2)");
  }
  if (h_.near_half()) {
    return b - a;
  }
  const double x = h_.excess();
  const double left = a == 0.0 ? -std::abs(2.0 * x) : 0.0;
  const double right = x * ((t1 == b ? 1.0 : 0.0) + (t2 == b ? 1.0 : 0.0));
  auto f = [&](const numerics::Abscissa& p) {
    const double v = a == 0.0 ? p.from_left : p.x;
    const double k1 = at_gap(t1, v, gap_to(t1, b, p));
    const double k2 = t2 == t1 ? k1 : at_gap(t2, v, gap_to(t2, b, p));
    double w = 1.0;
    if (left != 0.0) w *= std::pow(p.from_left, left);
    if (right != 0.0) w *= std::pow(p.from_right, right);
    return k1 * k2 / w;
  };
  return integrate(numerics::WeightedIntegrand(f), a, b, left, right);
}

double VolterraKernel::difference_square_integral(double t1, double t2, double a, double b) const {
  if (!(a >= 0.0) || !(a < b) || !(b <= t1) || !(b <= t2)) {
    throw DomainError("difference_square_integral: need 0 <= a < b <= min(t1,t2)");
  }
  if (t1 == t2 || h_.near_half()) {
    return 0.0;
  }
  const double x = h_.excess();
  const double left = a == 0.0 ? -2.0 * x : 0.0;
  const double right = (t1 == b || t2 == b) ? std::min(0.0, 2.0 * x) : 0.0;
  auto f = [&](const numerics::Abscissa& p) {
    const double v = a == 0.0 ? p.from_left : p.x;
    const double diff = at_gap(t1, v, gap_to(t1, b, p)) - at_gap(t2, v, gap_to(t2, b, p));
    double w = 1.0;
    if (left != 0.0) w *= std::pow(p.from_left, left);
    if (right != 0.0) w *= std::pow(p.from_right, right);
    return diff * diff / w;
  };
  return integrate(numerics::WeightedIntegrand(f), a, b, left, right);
}

double beta_h(double tau, Hurst h) {
  if (!(tau >= 1.0)) {
    throw DomainError("beta_h: tau must be >= 1");
  }
  const VolterraKernel kernel(h);
  if (std::isinf(tau)) {
    return kernel.beta_split(0.0, 1.0);
  }
  return kernel.beta_split(1.0 / tau, (tau - 1.0) / tau);
}

double kernel_k(double t, double s, Hurst h) { return VolterraKernel(h)(t, s); }

double kernel_k_hypergeom(double t, double s, Hurst h) {
  if (!(h.value() > 0.5)) {
    throw DomainError("kernel_k_hypergeom: requires H > 1/2");
  }
  if (!(s > 0.0) || !(s < t) || !std::isfinite(t)) {
    throw DomainError("kernel_k_hypergeom: need 0 < s < t");
  }
  const double x = h.excess();
  return std::pow(t - s, x) * numerics::gauss_2f1(-x, x, h.value() + 0.5, (s - t) / s);
}

double isometry_gap(double t, double s, const VolterraKernel& kernel) {
  if (!(s > 0.0) || !(s <= t) || !std::isfinite(t)) {
    throw DomainError("isometry_gap: need 0 < s <= t");
  }
  if (s == t) {
    return 0.0;
  }
  const double inside = kernel.difference_square_integral(t, s, 0.0, s);
  const double tail = kernel.product_integral(t, t, s, t);
  return inside + tail - std::pow(t - s, two_h(kernel.hurst()));
}

double isometry_gap(double t, double s, Hurst h, const numerics::QuadratureSpec& quad) {
  return isometry_gap(t, s, VolterraKernel(h, quad));
}

} // namespace fbm::core
