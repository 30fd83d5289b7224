#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fbm/asymptotics/asymptotics.h"
#include "fbm/errors.h"
#include "fbm/prediction/prediction.h"

using namespace fbm;
using namespace fbm::asymptotics;

// Reference constants evaluated with mpmath at 30 digits (β_H by adaptive
// quadrature, d_H from the Gamma-function expression).
TEST(Constants, AgainstHighPrecision) {
  EXPECT_NEAR(c_no_info_small(core::Hurst(0.25)), 0.29953505868389805186, 1e-12);
  EXPECT_NEAR(c_no_info_large(core::Hurst(0.75), 1, 1), 0.57206982262635989105, 1e-13);
  EXPECT_NEAR(c_no_info_large(core::Hurst(0.75), 2, 1), 0.80902890178256903500, 1e-13);
  EXPECT_NEAR(c_full_info(core::Hurst(0.75), 2, 1), 0.95411534227187245434, 1e-10);
  EXPECT_NEAR(c_full_info(core::Hurst(0.25), 2, 1), 0.59415136992257648794, 1e-10);
  EXPECT_NEAR(full_info_diag_constant(core::Hurst(0.75)), 0.76275976350181318806, 1e-13);
  EXPECT_NEAR(full_info_diag_constant(core::Hurst(0.25)), 0.83462684167407318628, 1e-13);
}

TEST(Constants, RegimeErrors) {
  EXPECT_THROW(c_no_info_small(core::Hurst(0.75)), RegimeError);
  EXPECT_THROW(c_no_info_large(core::Hurst(0.25), 1, 1), RegimeError);
  EXPECT_THROW(c_full_info(core::Hurst(0.25), 1, 1), RegimeError);
  EXPECT_THROW(regime_target(Regime::FullInfoDiag, core::Hurst(0.3), 2, 1), RegimeError);
  EXPECT_THROW(regime_target(Regime::NoInfoSmallH, core::Hurst(0.3), 2, 1), DomainError);
  EXPECT_THROW(regime_from_string("sideways"), DomainError);
  for (Regime r : {Regime::NoInfoSmallH, Regime::NoInfoLargeH, Regime::FullInfoDiag, Regime::FullInfoOffDiag})
    EXPECT_EQ(regime_from_string(to_string(r)), r);
}

TEST(ConstantsProperty, LargeHScaling) {
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> hd(0.51, 0.99), td(0.1, 5.0);
  for (int i = 0; i < 50; ++i) {
    const core::Hurst h(hd(gen));
    const double t = td(gen), s = td(gen);
    EXPECT_NEAR(c_no_info_large(h, 2 * t, 2 * s) / c_no_info_large(h, t, s), std::pow(4.0, 2 * h.value() - 1), 1e-12);
  }
}

TEST(Constants, BrownianValues) {
  EXPECT_EQ(c_full_info(core::Hurst(0.5), 2, 1), 1.0);
  EXPECT_DOUBLE_EQ(full_info_diag_constant(core::Hurst(0.5)), 1.0);
  EXPECT_EQ(g_diagnostic(0.01, core::Hurst(0.5)), 1.0);
  EXPECT_EQ(f_diagnostic(0.5, core::Hurst(0.5)), 1.0);
}

TEST(Diagnostics, NoInfoSmallH) {
  EXPECT_NEAR(g_diagnostic(0.01, core::Hurst(0.25)), 1.0, 0.1);
}

// At H = 3/4 the first correction to g is of relative order u^{1/2}, so g(0.01)
// is still about 13% high; the sequence decreases monotonically towards 1.
TEST(Diagnostics, NoInfoLargeHConverges) {
  const core::Hurst h(0.75);
  const auto u = geometric_distances(1e-2, std::sqrt(0.5), 7);
  std::vector<double> g;
  for (double x : u) g.push_back(g_diagnostic(x, h));
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_LT(g[i], g[i - 1]);
  EXPECT_LT(g.back(), 1.05);
  EXPECT_GT(g.back(), 1.0);
  const std::size_t n = g.size();
  const double d1 = g[n - 1] - g[n - 2], d0 = g[n - 2] - g[n - 3];
  const double aitken = g[n - 1] - d1 * d1 / (d1 - d0);
  EXPECT_NEAR(aitken, 1.0, 1e-3);
}

TEST(Diagnostics, FullInfoNearOne) {
  for (double h : {0.25, 0.75}) EXPECT_NEAR(f_diagnostic(0.99, core::Hurst(h)), 1.0, 0.1) << h;
}

TEST(Fit, ExactPowerLaw) {
  std::vector<double> x, y;
  for (int k = 0; k < 8; ++k) {
    x.push_back(std::pow(0.5, k));
    y.push_back(3.7 * std::pow(x.back(), 1.35));
  }
  const auto f = fit_power_law(x, y);
  EXPECT_NEAR(f.exponent, 1.35, 1e-10);
  EXPECT_NEAR(f.constant, 3.7, 1e-10);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
}

TEST(Fit, Failures) {
  EXPECT_THROW(fit_power_law({1, 2, 3}, {1, 2, 3}), FitError);
  EXPECT_THROW(fit_power_law({1, 2, 3, 4}, {1, 2, -3, 4}), FitError);
  EXPECT_THROW(fit_power_law({1, 1, 1, 1}, {1, 2, 3, 4}), FitError);
  EXPECT_THROW(fit_power_law({1, 2, 3, 4}, {1, 2, 3}), FitError);
  // Scattered data: R² far below the threshold.
  EXPECT_THROW(fit_power_law({1, 2, 3, 4, 5, 6}, {1, 50, 0.1, 20, 0.5, 3}), FitError);
}

TEST(Sweep, ExponentsAndConstants) {
  struct Case {
    Regime regime;
    double h, t, s, exp_tol, const_tol;
  };
  const auto dist = geometric_distances(1e-2, std::sqrt(0.5), 7);
  for (const Case& c : {Case{Regime::NoInfoSmallH, 0.25, 1, 1, 0.05, 0.05},
                        Case{Regime::NoInfoLargeH, 0.75, 1, 1, 0.05, 0.05},
                        Case{Regime::FullInfoDiag, 0.25, 1, 1, 0.05, 0.05},
                        Case{Regime::FullInfoDiag, 0.75, 1, 1, 0.05, 0.05},
                        Case{Regime::FullInfoOffDiag, 0.25, 2, 1, 0.05, 0.05},
                        Case{Regime::FullInfoOffDiag, 0.75, 2, 1, 0.05, 0.05}}) {
    const auto rep = asymptotic_sweep(c.regime, core::Hurst(c.h), c.t, c.s, dist);
    EXPECT_NEAR(rep.fitted_exponent, rep.target_exponent, c.exp_tol) << to_string(c.regime) << ' ' << c.h;
    EXPECT_LE(std::abs(rep.extrapolated_constant / rep.target_constant - 1), c.const_tol)
        << to_string(c.regime) << ' ' << c.h;
    EXPECT_GE(rep.r_squared, kMinRSquared);
    ASSERT_EQ(rep.residual.size(), dist.size());
    for (std::size_t i = 0; i < dist.size(); ++i) EXPECT_GT(rep.residual[i], 0.0);
  }
}

TEST(Sweep, RegimeMismatch) {
  const auto dist = geometric_distances(1e-2, 0.5, 5);
  EXPECT_THROW(asymptotic_sweep(Regime::NoInfoSmallH, core::Hurst(0.7), 1, 1, dist), RegimeError);
  EXPECT_THROW(asymptotic_sweep(Regime::NoInfoLargeH, core::Hurst(0.3), 1, 1, dist), RegimeError);
  EXPECT_THROW(asymptotic_sweep(Regime::FullInfoDiag, core::Hurst(0.3), 1, 1, {0.1, 0.05}), DomainError);
  EXPECT_THROW(geometric_distances(1e-2, 1.5, 4), DomainError);
}

TEST(Decomposition, MatchesCovarianceReduction) {
  for (double h : {0.3, 0.7}) {
    const core::VolterraKernel k{core::Hurst(h)};
    for (auto [t, s, u] : {std::tuple{1.0, 1.0, 0.5}, std::tuple{2.0, 1.0, 0.3}, std::tuple{1.5, 2.5, 1.0}}) {
      const auto d = decomposition(t, s, u, k);
      const double direct = prediction::cond_cov(t, s, u, k) - core::fbm_cov(t, s, k.hurst());
      EXPECT_NEAR(d.total, direct, 1e-9) << h << ' ' << t << ' ' << s << ' ' << u;
      EXPECT_NEAR(d.total, -k.constants().d * k.constants().d * (d.i1 + d.i2 + d.i3 + d.i4), 1e-15);
    }
  }
  const core::VolterraKernel k{core::Hurst(0.3)};
  EXPECT_THROW(decomposition(1.0, 1.0, 1.0, k), DomainError);
}
