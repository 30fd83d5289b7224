#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fbm/errors.h"
#include "fbm/numerics/gauss_rules.h"
#include "fbm/numerics/quadrature.h"
#include "fbm/numerics/special.h"

using namespace fbm;
using namespace fbm::numerics;

namespace {

QuadratureSpec spec_for(Rule rule, double alpha, double beta, int nodes = 16, double tol = 1e-12) {
  QuadratureSpec s;
  s.rule = rule;
  s.nodes = nodes;
  s.alpha = alpha;
  s.beta = beta;
  s.rel_tol = tol;
  return s;
}

constexpr Rule kRules[] = {Rule::JacobiWeighted, Rule::DoubleExponential, Rule::AdaptiveSubdivision};

} // namespace

TEST(LnGamma, ClosedForms) {
  EXPECT_DOUBLE_EQ(ln_gamma(1.0), 0.0);
  EXPECT_NEAR(ln_gamma(0.5), std::log(std::sqrt(std::numbers::pi)), 1e-15);
  EXPECT_NEAR(ln_gamma(4.0), std::log(6.0), 1e-15);
}

// Reference values from a 40-digit evaluation (mpmath.loggamma).
TEST(LnGamma, AgainstHighPrecisionTable) {
  const std::pair<double, double> table[] = {
      {0.001, 6.9071788853838536825}, {0.1, 2.2527126517342059599}, {0.75, 0.20328095143129537148},
      {2.5, 0.28468287047291915963},  {10, 12.801827480081469611},  {37.3, 96.800127038023301482},
      {50, 144.56574394634488601},
  };
  for (auto [x, ref] : table) {
    // relative error of exp(lnΓ) is the absolute error of lnΓ
    EXPECT_NEAR(ln_gamma(x), ref, 1e-12) << "x=" << x;
  }
}

TEST(LnGamma, RejectsNonPositive) {
  EXPECT_THROW(ln_gamma(0.0), DomainError);
  EXPECT_THROW(ln_gamma(-2.5), DomainError);
  EXPECT_THROW(ln_gamma(std::nan("")), DomainError);
}

TEST(BetaFn, ClosedForms) {
  EXPECT_NEAR(beta_fn(1, 1), 1.0, 1e-15);
  for (double b : {0.3, 1.0, 2.5, 7.0}) EXPECT_NEAR(beta_fn(1, b), 1.0 / b, 1e-14);
  EXPECT_NEAR(beta_fn(0.5, 0.5), std::numbers::pi, 1e-14);
  EXPECT_THROW(beta_fn(0.0, 1.0), DomainError);
  EXPECT_THROW(beta_fn(1.0, -1.0), DomainError);
}

TEST(Gauss2F1, ZeroArgumentAndLogForm) {
  EXPECT_EQ(gauss_2f1(0.3, 0.4, 1.7, 0.0), 1.0);
  EXPECT_NEAR(gauss_2f1(1, 1, 2, 0.5), 2.0 * std::log(2.0), 1e-12);
  for (double x : {-0.9, -0.2, 0.3, 0.99}) {
    EXPECT_NEAR(gauss_2f1(1, 1, 2, x), -std::log1p(-x) / x, 1e-9 * std::abs(std::log1p(-x) / x));
  }
}

// Composite midpoint oracle for the Euler integral at (1/4, 1/4, 5/4; -1).
// With t = y⁴ the integrand 4(1+y⁴)^{-1/4} is smooth on [0,1].
TEST(Gauss2F1, MidpointOracle) {
  const int n = 1000000;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double y = (i + 0.5) / n;
    acc += 4.0 * std::pow(1.0 + y * y * y * y, -0.25);
  }
  const double oracle = acc / n / beta_fn(0.25, 1.0);
  EXPECT_NEAR(oracle, 0.96170569419003083576, 1e-11); // frozen
  EXPECT_NEAR(gauss_2f1(0.25, 0.25, 1.25, -1.0), oracle, 1e-9 * oracle);
}

TEST(Gauss2F1, OutsideEulerDomain) {
  EXPECT_THROW(gauss_2f1(0.5, 1.0, 1.0, 0.3), UnsupportedDomainError);
  EXPECT_THROW(gauss_2f1(0.5, -0.2, 1.0, 0.3), UnsupportedDomainError);
  EXPECT_THROW(gauss_2f1(0.5, 0.5, 1.5, 1.0), UnsupportedDomainError);
}

TEST(Gauss2F1, SymmetricInFirstTwoParameters) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> p(0.05, 2.0), xs(-0.99, 0.99);
  for (int k = 0; k < 40; ++k) {
    const double a = p(gen), b = p(gen);
    const double c = std::max(a, b) + p(gen);
    const double x = xs(gen);
    const double f1 = gauss_2f1(a, b, c, x), f2 = gauss_2f1(b, a, c, x);
    EXPECT_NEAR(f1, f2, 1e-9 * std::abs(f1)) << a << ' ' << b << ' ' << c << ' ' << x;
  }
}

TEST(IntegrateWeighted, SpecExamples) {
  for (Rule r : kRules) {
    EXPECT_NEAR(integrate_weighted(ScalarIntegrand([](double) { return 1.0; }), 0, 1, spec_for(r, -0.5, 0)).value,
                2.0, 1e-11)
        << to_string(r);
    EXPECT_NEAR(integrate_weighted(ScalarIntegrand([](double x) { return x; }), 0, 2, spec_for(r, 0, 0)).value, 2.0,
                1e-12)
        << to_string(r);
  }
}

TEST(IntegrateWeighted, BetaIdentity) {
  for (Rule r : kRules) {
    for (double p : {-0.9, -0.5, 0.0, 0.3, 2.0}) {
      for (double q : {-0.75, 0.0, 0.25, 1.5}) {
        const double exact = beta_fn(p + 1, q + 1);
        const auto res = integrate_weighted(ScalarIntegrand([](double) { return 1.0; }), 0, 1, spec_for(r, p, q));
        EXPECT_NEAR(res.value, exact, 1e-10 * exact) << to_string(r) << " p=" << p << " q=" << q;
      }
    }
  }
}

TEST(IntegrateWeighted, ReportsErrorEstimate) {
  const auto res = integrate_weighted(ScalarIntegrand([](double x) { return std::exp(x); }), 0, 1,
                                      spec_for(Rule::AdaptiveSubdivision, -0.3, 0.4, 16, 1e-10));
  EXPECT_GE(res.error, 0.0);
  EXPECT_LE(res.error, 1e-10 * std::abs(res.value));
  EXPECT_GT(res.evaluations, 0u);
}

TEST(IntegrateWeighted, FailureCarriesEstimate) {
  // 1/sqrt|x - 1/3| is integrable but not smooth; the Jacobi rule alone
  // cannot resolve the interior singularity to 1e-14.
  auto f = ScalarIntegrand([](double x) { return 1.0 / std::sqrt(std::abs(x - 1.0 / 3.0)); });
  try {
    integrate_weighted(f, 0, 1, spec_for(Rule::JacobiWeighted, 0, 0, 16, 1e-14));
    FAIL() << "expected QuadratureError";
  } catch (const QuadratureError& e) {
    EXPECT_TRUE(std::isfinite(e.estimate()));
    EXPECT_GT(e.error_bound(), 0.0);
  }
}

TEST(QuadratureSpec, Validation) {
  EXPECT_THROW(spec_for(Rule::JacobiWeighted, -1.0, 0).validate(), DomainError);
  EXPECT_THROW(spec_for(Rule::JacobiWeighted, 0, -1.5).validate(), DomainError);
  EXPECT_THROW(spec_for(Rule::JacobiWeighted, 0, 0, 1).validate(), DomainError);
  EXPECT_THROW(spec_for(Rule::JacobiWeighted, 0, 0, 16, 0.0).validate(), DomainError);
  EXPECT_THROW(spec_for(Rule::JacobiWeighted, 0, 0, 16, 1.0).validate(), DomainError);
  EXPECT_NO_THROW(spec_for(Rule::JacobiWeighted, -0.99, 3.0).validate());
}

TEST(QuadratureSpec, RuleNames) {
  for (Rule r : kRules) EXPECT_EQ(rule_from_string(to_string(r)), r);
  EXPECT_EQ(to_string(Rule::JacobiWeighted), "jacobi-weighted");
  EXPECT_THROW(rule_from_string("simpson"), DomainError);
}

TEST(GaussJacobi, ComplementsAndWeights) {
  const auto rule = gauss_jacobi_unit(12, -0.4, 0.7);
  double total = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    EXPECT_GT(rule.nodes[i], 0.0);
    EXPECT_LT(rule.nodes[i], 1.0);
    EXPECT_NEAR(rule.nodes[i] + rule.complements[i], 1.0, 1e-15);
    total += rule.weights[i];
  }
  EXPECT_NEAR(total, beta_fn(0.6, 1.7), 1e-13);
}

// Property: a degree ≤ n-1 polynomial is integrated exactly against the
// Jacobi weight. Moments ∫ x^k x^α (1-x)^β = Β(α+k+1, β+1).
TEST(IntegrateWeightedProperty, PolynomialExactness) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> expo(-0.95, 2.0), coef(-1.0, 1.0);
  std::uniform_int_distribution<int> nodes(2, 24);
  for (int trial = 0; trial < 60; ++trial) {
    const double a = expo(gen), b = expo(gen);
    const int n = nodes(gen);
    std::vector<double> c(static_cast<std::size_t>(n));
    for (double& ci : c) ci = coef(gen);
    double exact = 0.0;
    for (int k = 0; k < n; ++k) exact += c[k] * beta_fn(a + k + 1, b + 1);
    auto poly = [&](double x) {
      double v = 0.0;
      for (int k = n - 1; k >= 0; --k) v = v * x + c[k];
      return v;
    };
    const auto res = integrate_weighted(ScalarIntegrand(poly), 0, 1, spec_for(Rule::JacobiWeighted, a, b, n, 1e-10));
    double scale = 0.0;
    for (int k = 0; k < n; ++k) scale += std::abs(c[k]) * beta_fn(a + k + 1, b + 1);
    EXPECT_NEAR(res.value, exact, 1e-10 * scale) << "trial " << trial << " n=" << n;
  }
}

// Property: doubling the node count never more than doubles the error bound.
TEST(IntegrateWeightedProperty, RefinementDoesNotInflateError) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> expo(-0.9, 1.0), freq(0.5, 6.0);
  for (int trial = 0; trial < 40; ++trial) {
    const double a = expo(gen), b = expo(gen), w = freq(gen);
    auto f = ScalarIntegrand([w](double x) { return std::cos(w * x) + x * x; });
    const double ref = integrate_weighted(f, 0, 1, spec_for(Rule::JacobiWeighted, a, b, 64, 1e-10)).value;
    for (Rule r : {Rule::JacobiWeighted, Rule::AdaptiveSubdivision}) {
      for (int n : {4, 8, 16, 32}) {
        const auto coarse = integrate_weighted(f, 0, 1, spec_for(r, a, b, n, 1e-10));
        const auto fine = integrate_weighted(f, 0, 1, spec_for(r, a, b, 2 * n, 1e-10));
        EXPECT_LE(std::abs(fine.value - ref), 2.0 * std::abs(coarse.value - ref) + 1e-10 * std::abs(ref))
            << to_string(r) << " n=" << n;
      }
    }
  }
}

TEST(IntegrateWeighted, ShortPanelsFarFromOrigin) {
  // ∫ (x-a)^{-1/2} over [a, a+1e-9] with a = 1e3: the offsets keep the
  // endpoint distance exact, so the result is 2·sqrt(1e-9).
  const double a = 1e3, b = a + 1e-9;
  const auto res = integrate_weighted(ScalarIntegrand([](double) { return 1.0; }), a, b,
                                      spec_for(Rule::AdaptiveSubdivision, -0.5, 0));
  EXPECT_NEAR(res.value, 2.0 * std::sqrt(b - a), 1e-10 * res.value);
}
