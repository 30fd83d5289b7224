#include "fbm/asymptotics/asymptotics.h"

#include <cmath>
#include <limits>
#include <string>

#include "fbm/errors.h"
#include "fbm/prediction/prediction.h"

namespace fbm::asymptotics {

std::string_view to_string(Regime regime) {
  switch (regime) {
  case Regime::NoInfoSmallH: return "no-info-smallH";
  case Regime::NoInfoLargeH: return "no-info-largeH";
  case Regime::FullInfoDiag: return "full-info-diag";
  case Regime::FullInfoOffDiag: return "full-info-offdiag";
  }
  return "unknown";
}

Regime regime_from_string(std::string_view name) {
  for (Regime r : {Regime::NoInfoSmallH, Regime::NoInfoLargeH, Regime::FullInfoDiag, Regime::FullInfoOffDiag}) {
    if (to_string(r) == name) return r;
  }
  throw DomainError("unknown regime: " + std::string(name));
}

double c_no_info_small(core::Hurst h) {
  if (!(h.value() < 0.5)) {
    throw RegimeError("c_no_info_small: requires H < 1/2");
  }
  if (h.near_half()) {
    return 0.0;
  }
  const double d = core::kernel_constants(h).d;
  const double x = h.excess();
  const double b = core::beta_h(std::numeric_limits<double>::infinity(), h);
  return d * d / (2.0 * h.value()) * x * x * b * b;
}

double c_no_info_large(core::Hurst h, double t, double s) {
  if (!(h.value() > 0.5)) {
    throw RegimeError("c_no_info_large: requires H > 1/2");
  }
  if (!(t > 0.0) || !(s > 0.0)) {
    throw DomainError("c_no_info_large: need t, s > 0");
  }
  const double d = core::kernel_constants(h).d;
  return d * d * std::pow(t * s, 2.0 * h.value() - 1.0) / (8.0 - 8.0 * h.value());
}

double c_full_info(core::Hurst h, double t, double s) {
  if (!(s > 0.0)) {
    throw DomainError("c_full_info: need s > 0");
  }
  if (!(t > s)) {
    throw RegimeError("c_full_info: requires t > s (use full_info_diag_constant on the diagonal)");
  }
  if (h.near_half()) {
    return 1.0;
  }
  const core::VolterraKernel kernel(h);
  const double d = kernel.constants().d;
  // The bracket is k(t,s)/d.
  return d * kernel(t, s) / (h.value() + 0.5);
}

double full_info_diag_constant(core::Hurst h) {
  if (h.near_half()) {
    return 1.0;
  }
  const double d = core::kernel_constants(h).d;
  return d * d / (2.0 * h.value());
}

namespace {

double two_h(core::Hurst h) { return h.near_half() ? 1.0 : 2.0 * h.value(); }

} // namespace

double g_diagnostic(double u, core::Hurst h) {
  if (!(u > 0.0) || !(u < 1.0)) {
    throw DomainError("g_diagnostic: need 0 < u < 1");
  }
  if (h.near_half()) {
    return 1.0;
  }
  const core::VolterraKernel kernel(h);
  const double reduction = 1.0 - prediction::cond_cov(1.0, 1.0, u, kernel);
  if (h.value() > 0.5) {
    const double d = kernel.constants().d;
    return (8.0 - 8.0 * h.value()) / (d * d) * reduction / std::pow(u, 2.0 - 2.0 * h.value());
  }
  return reduction / (c_no_info_small(h) * std::pow(u, 2.0 * h.value()));
}

double f_diagnostic(double u, core::Hurst h) {
  if (!(u > 0.0) || !(u < 1.0)) {
    throw DomainError("f_diagnostic: need 0 < u < 1");
  }
  const double r = prediction::cond_cov(1.0, 1.0, u, h);
  return r / (full_info_diag_constant(h) * std::pow(1.0 - u, two_h(h)));
}

PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 4) {
    throw FitError("fit_power_law: need at least 4 paired points");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw FitError("fit_power_law: values must be positive and finite");
    }
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    const double dy = std::log(y[i]) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) {
    throw FitError("fit_power_law: abscissae are all equal");
  }
  const double slope = sxy / sxx;
  const double r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  if (r2 < kMinRSquared) {
    throw FitError("fit_power_law: R² = " + std::to_string(r2) + " below threshold");
  }
  return {slope, std::exp(my - slope * mx), r2};
}

Target regime_target(Regime regime, core::Hurst h, double t, double s) {
  const double H = h.value();
  switch (regime) {
  case Regime::NoInfoSmallH:
    if (t != 1.0 || s != 1.0) {
      throw DomainError("no-info-smallH target is stated for t = s = 1");
    }
    return {2.0 * H, c_no_info_small(h)};
  case Regime::NoInfoLargeH: return {2.0 - 2.0 * H, c_no_info_large(h, t, s)};
  case Regime::FullInfoDiag:
    if (t != s) {
      throw RegimeError("full-info-diag needs t = s");
    }
    return {two_h(h), full_info_diag_constant(h)};
  case Regime::FullInfoOffDiag: return {H + 0.5, c_full_info(h, t, s)};
  }
  throw DomainError("unknown regime");
}

std::vector<double> geometric_distances(double d0, double ratio, std::size_t count) {
  if (!(d0 > 0.0) || !(ratio > 0.0) || !(ratio < 1.0)) {
    throw DomainError("geometric_distances: need d0 > 0 and 0 < ratio < 1");
  }
  std::vector<double> d(count);
  for (std::size_t k = 0; k < count; ++k) {
    d[k] = d0 * std::pow(ratio, static_cast<double>(k));
  }
  return d;
}

namespace {

double aitken(double a, double b, double c) {
  const double d1 = b - a;
  const double d2 = c - b;
  const double denom = d2 - d1;
  if (denom == 0.0 || !std::isfinite(denom)) {
    return c;
  }
  return c - d2 * d2 / denom;
}

} // namespace

AsymptoticReport asymptotic_sweep(Regime regime, core::Hurst h, double t, double s,
                                  const std::vector<double>& distances, const numerics::QuadratureSpec& quad) {
  const bool no_info = regime == Regime::NoInfoSmallH || regime == Regime::NoInfoLargeH;
  if (!(t > 0.0) || !(s > 0.0) || (!no_info && s > t)) {
    throw DomainError("asymptotic_sweep: invalid (t, s)");
  }
  if (distances.size() < 4) {
    throw DomainError("asymptotic_sweep: need at least 4 distances");
  }
  const Target target = regime_target(regime, h, t, s);
  const core::VolterraKernel kernel(h, quad);
  const double limit = std::min(t, s);

  AsymptoticReport rep{};
  rep.regime = regime;
  rep.t = t;
  rep.s = s;
  rep.target_exponent = target.exponent;
  rep.target_constant = target.constant;
  for (std::size_t k = 0; k < distances.size(); ++k) {
    const double dist = distances[k];
    if (!(dist > 0.0) || !(dist < limit) || (k > 0 && !(dist < distances[k - 1]))) {
      throw DomainError("asymptotic_sweep: distances must decrease inside (0, min(t,s))");
    }
    double u;
    double residual;
    if (no_info) {
      u = dist;
      residual = core::fbm_cov(t, s, h) - prediction::cond_cov(t, s, u, kernel);
    } else {
      u = s - dist;
      residual = prediction::cond_cov(t, s, u, kernel);
    }
    rep.u_grid.push_back(u);
    rep.distance.push_back(dist);
    rep.residual.push_back(residual);
    rep.diagnostic.push_back(residual / (target.constant * std::pow(dist, target.exponent)));
  }
  const auto fit = fit_power_law(rep.distance, rep.residual);
  rep.fitted_exponent = fit.exponent;
  rep.fitted_constant = fit.constant;
  rep.r_squared = fit.r_squared;
  const std::size_t n = rep.residual.size();
  auto scaled = [&](std::size_t i) { return rep.residual[i] / std::pow(rep.distance[i], target.exponent); };
  rep.extrapolated_constant = aitken(scaled(n - 3), scaled(n - 2), scaled(n - 1));
  return rep;
}

DecompositionTerms decomposition(double t, double s, double u, const core::VolterraKernel& kernel) {
  if (!(u > 0.0) || !(u < t) || !(u < s)) {
    throw DomainError("decomposition: need 0 < u < min(t,s)");
  }
  const core::Hurst h = kernel.hurst();
  const double d = kernel.constants().d;
  if (h.near_half()) {
    // Only I₁ survives and it is identically 1.
    return {u, 0.0, 0.0, 0.0, -u};
  }
  const double x = h.excess();
  auto beta_at = [&](double tau_num, double v) { return kernel.beta_split(v / tau_num, (tau_num - v) / tau_num); };
  auto integrate = [&](auto f, double left) {
    auto g = [&, left](const numerics::Abscissa& p) { return f(p.from_left) / std::pow(p.from_left, left); };
    return numerics::integrate_weighted(numerics::WeightedIntegrand(g), 0.0, u,
                                        kernel.quadrature().with_exponents(left, 0.0))
        .value;
  };
  const double mixed = x > 0.0 ? -2.0 * x : 0.0;
  DecompositionTerms out{};
  out.i1 = integrate(
      [&](double v) { return std::pow(t / v, x) * std::pow(s / v, x) * std::pow(t - v, x) * std::pow(s - v, x); },
      -2.0 * x);
  out.i2 = integrate([&](double v) { return -x * std::pow(t, x) * std::pow(t - v, x) * beta_at(s, v); }, mixed);
  out.i3 = integrate([&](double v) { return -x * std::pow(s, x) * std::pow(s - v, x) * beta_at(t, v); }, mixed);
  out.i4 = integrate([&](double v) { return x * x * std::pow(v, 2.0 * x) * beta_at(s, v) * beta_at(t, v); },
                     -std::abs(2.0 * x));
  out.total = -d * d * (out.i1 + out.i2 + out.i3 + out.i4);
  return out;
}

} // namespace fbm::asymptotics
