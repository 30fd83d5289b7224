#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fbm/errors.h"
#include "fbm/oracle/oracle.h"
#include "fbm/prediction/prediction.h"

using namespace fbm;
using namespace fbm::oracle;

namespace {

std::vector<double> uniform_grid(std::size_t n, double end) {
  std::vector<double> g;
  for (std::size_t k = 1; k <= n; ++k) g.push_back(end * static_cast<double>(k) / static_cast<double>(n));
  return g;
}

std::vector<std::size_t> first_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  for (std::size_t k = 0; k < n; ++k) idx[k] = k;
  return idx;
}

} // namespace

TEST(GridGaussian, Examples) {
  const auto one = build_grid_gaussian({1.0}, core::Hurst(0.3));
  EXPECT_EQ(one.cov(0, 0), 1.0);
  const auto bm = build_grid_gaussian({1.0, 2.0}, core::Hurst(0.5));
  EXPECT_EQ(bm.cov(0, 0), 1.0);
  EXPECT_EQ(bm.cov(0, 1), 1.0);
  EXPECT_EQ(bm.cov(1, 1), 2.0);
  const auto big = build_grid_gaussian(uniform_grid(256, 1.0), core::Hurst(0.3));
  EXPECT_GE(linalg::min_eigenvalue(big.cov), -1e-12);
  EXPECT_THROW(build_grid_gaussian({}, core::Hurst(0.3)), DomainError);
  EXPECT_THROW(build_grid_gaussian({0.0, 1.0}, core::Hurst(0.3)), DomainError);
  EXPECT_THROW(build_grid_gaussian({1.0, 0.5}, core::Hurst(0.3)), DomainError);
}

TEST(SampleFbm, EmpiricalCovariance) {
  const std::vector<double> grid{0.25, 0.5, 1.0};
  const core::Hurst h(0.7);
  const auto gg = build_grid_gaussian(grid, h);
  const std::size_t n = 20000;
  const auto x = sample_fbm(gg, MCConfig{n, 11, false});
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      double acc = 0.0;
      for (std::size_t p = 0; p < n; ++p) acc += x(p, i) * x(p, j);
      const double c = core::fbm_cov(grid[i], grid[j], h);
      const double sd = std::sqrt((gg.cov(i, i) * gg.cov(j, j) + c * c) / n);
      EXPECT_NEAR(acc / n, c, 4 * sd);
    }
  }
}

TEST(SampleFbm, AntitheticAndDeterministic) {
  const auto gg = build_grid_gaussian(uniform_grid(8, 1.0), core::Hurst(0.4));
  const auto x = sample_fbm(gg, MCConfig{10, 3, true});
  for (std::size_t k = 0; k < 5; ++k)
    for (std::size_t j = 0; j < 8; ++j) EXPECT_EQ(x(2 * k + 1, j), -x(2 * k, j));
  EXPECT_EQ(sample_fbm(gg, MCConfig{10, 3, false}), sample_fbm(gg, MCConfig{10, 3, false}));
  EXPECT_THROW(sample_fbm(gg, MCConfig{1, 3, false}), DomainError);
}

// Brownian increments are iid N(0, Δ); the Jarque-Bera statistic of the
// standardised increments stays below the 99.9% χ²₂ quantile.
TEST(SampleFbm, BrownianIncrementsAreGaussian) {
  const std::size_t m = 64, n = 500;
  const auto gg = build_grid_gaussian(uniform_grid(m, 1.0), core::Hurst(0.5));
  const auto x = sample_fbm(gg, MCConfig{n, 9, false});
  std::vector<double> z;
  for (std::size_t p = 0; p < n; ++p) {
    double prev = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      z.push_back((x(p, j) - prev) * std::sqrt(static_cast<double>(m)));
      prev = x(p, j);
    }
  }
  double m2 = 0, m3 = 0, m4 = 0, mean = 0;
  for (double v : z) mean += v;
  mean /= z.size();
  for (double v : z) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= z.size();
  m3 /= z.size();
  m4 /= z.size();
  const double skew = m3 / std::pow(m2, 1.5), kurt = m4 / (m2 * m2);
  const double jb = z.size() / 6.0 * (skew * skew + (kurt - 3) * (kurt - 3) / 4);
  EXPECT_LT(jb, 13.8);
  EXPECT_NEAR(m2, 1.0, 0.05);
}

TEST(SampleVolterra, BrownianIsPartialSums) {
  const auto grid = uniform_grid(4, 1.0);
  const auto x = sample_fbm_volterra(grid, core::Hurst(0.5), MCConfig{4, 5, false}, 16);
  const auto y = sample_fbm_volterra(grid, core::Hurst(0.5), MCConfig{4, 5, false}, 16);
  EXPECT_EQ(x, y);
  // Var(B_1) from many paths.
  const auto many = sample_fbm_volterra({1.0}, core::Hurst(0.5), MCConfig{20000, 6, false}, 16);
  double v = 0;
  for (std::size_t p = 0; p < 20000; ++p) v += many(p, 0) * many(p, 0);
  EXPECT_NEAR(v / 20000, 1.0, 4 * std::sqrt(2.0 / 20000));
}

TEST(SampleVolterra, VarianceAtLargeH) {
  const std::size_t n = 20000;
  const auto x = sample_fbm_volterra({1.0}, core::Hurst(0.75), MCConfig{n, 8, false}, 1024);
  double v = 0;
  for (std::size_t p = 0; p < n; ++p) v += x(p, 0) * x(p, 0);
  EXPECT_NEAR(v / n, 1.0, 0.05);
}

// Deterministic part of the discretisation error: the variance of the
// midpoint sum, Σ k(1, s_i*)² Δ, approaches 1 as the internal grid refines.
TEST(SampleVolterra, MidpointVarianceConverges) {
  const core::VolterraKernel k{core::Hurst(0.75)};
  double prev_err = 1.0;
  for (std::size_t m : {64u, 256u, 1024u}) {
    double v = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const double s = (i + 0.5) / m;
      v += std::pow(k.at_gap(1.0, s, 1.0 - s), 2) / m;
    }
    const double err = std::abs(v - 1.0);
    EXPECT_LT(err, prev_err);
    prev_err = err;
  }
  EXPECT_LT(prev_err, 0.02);
}

TEST(Schur, Examples) {
  // All points observed: the mean is the data and the covariance vanishes.
  const auto gg = build_grid_gaussian({0.5, 1.0}, core::Hurst(0.3));
  const auto all = schur_condition(gg, {0, 1}, {0.2, -0.1});
  EXPECT_TRUE(all.future_indices.empty());
  EXPECT_EQ(all.mean[0], 0.2);
  EXPECT_EQ(all.mean[1], -0.1);
  EXPECT_EQ(all.cov(1, 1), 0.0);

  const auto bm = build_grid_gaussian({1.0, 2.0, 3.0}, core::Hurst(0.5));
  const auto r = schur_condition(bm, {0}, {0.7});
  EXPECT_NEAR(r.mean[1], 0.7, 1e-14);
  EXPECT_NEAR(r.mean[2], 0.7, 1e-14);
  EXPECT_NEAR(r.cov(1, 1), 1.0, 1e-14);
  EXPECT_NEAR(r.cov(1, 2), 1.0, 1e-14);
  EXPECT_NEAR(r.cov(2, 2), 2.0, 1e-14);
  EXPECT_THROW(schur_condition(bm, {0}, {}), DomainError);
}

TEST(Schur, MatchesAnalyticOn512Grid) {
  const core::Hurst h(0.3);
  auto grid = uniform_grid(512, 1.0);
  grid.push_back(1.5);
  const auto gg = build_grid_gaussian(grid, h);
  const auto r = schur_condition(gg, first_indices(512), std::vector<double>(512, 0.0));
  const double analytic = prediction::cond_cov(1.5, 1.5, 1.0, h);
  EXPECT_LT(std::abs(r.cov(512, 512) - analytic) / analytic, 5e-3);
}

TEST(SchurProperty, CovarianceIgnoresValuesAndMeanIsLinear) {
  std::mt19937_64 gen(21);
  std::normal_distribution<double> nd;
  auto grid = uniform_grid(16, 1.0);
  grid.push_back(1.3);
  grid.push_back(2.0);
  const auto gg = build_grid_gaussian(grid, core::Hurst(0.65));
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> y1(16), y2(16), y3(16);
    const double a = nd(gen), b = nd(gen);
    for (int i = 0; i < 16; ++i) {
      y1[i] = nd(gen);
      y2[i] = nd(gen);
      y3[i] = a * y1[i] + b * y2[i];
    }
    const auto r1 = schur_condition(gg, first_indices(16), y1);
    const auto r2 = schur_condition(gg, first_indices(16), y2);
    const auto r3 = schur_condition(gg, first_indices(16), y3);
    EXPECT_EQ(r1.cov, r2.cov);
    for (std::size_t j : {16u, 17u}) EXPECT_NEAR(r3.mean[j], a * r1.mean[j] + b * r2.mean[j], 1e-10);
  }
}

// Observing more points can only shrink the conditional covariance.
TEST(SchurProperty, LoewnerMonotone) {
  std::mt19937_64 gen(4);
  auto grid = uniform_grid(24, 1.0);
  grid.push_back(1.5);
  grid.push_back(2.0);
  for (double h : {0.2, 0.8}) {
    const auto gg = build_grid_gaussian(grid, core::Hurst(h));
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<std::size_t> small, large;
      for (std::size_t i = 0; i < 24; ++i) {
        const bool in_small = (gen() % 3 == 0);
        if (in_small) small.push_back(i);
        if (in_small || gen() % 2 == 0) large.push_back(i);
      }
      if (small.empty()) small.push_back(0), large.insert(large.begin(), 0);
      const auto rs = schur_condition(gg, small, std::vector<double>(small.size(), 0.0));
      const auto rl = schur_condition(gg, large, std::vector<double>(large.size(), 0.0));
      linalg::Matrix diff(2, 2);
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) diff(i, j) = rs.cov(24 + i, 24 + j) - rl.cov(24 + i, 24 + j);
      EXPECT_GE(linalg::min_eigenvalue(diff), -1e-10) << h;
    }
  }
}

TEST(Refinement, BrownianIsExact) {
  const auto t = refinement_study(core::Hurst(0.5), 1.0, {1.5, 2.0}, {8, 32, 128});
  for (const auto& row : t.rows) {
    EXPECT_LE(row.mean_error, 1e-12);
    EXPECT_LE(row.cov_error, 1e-12);
  }
  EXPECT_TRUE(t.decreasing());
}

TEST(Refinement, ConvergesAwayFromHalf) {
  for (double h : {0.25, 0.75}) {
    const auto t = refinement_study(core::Hurst(h), 1.0, {1.25, 1.5, 2.0}, {32, 64, 128, 256, 512});
    EXPECT_TRUE(t.decreasing()) << h;
    EXPECT_LE(t.path_sup, 2.0);
    EXPECT_LE(t.rows.back().cov_error, 5e-3) << h;
    EXPECT_LE(t.rows.back().mean_error, 5e-3) << h;
    EXPECT_LT(t.rows.back().mean_rms, t.rows.front().mean_rms) << h;
  }
}

TEST(Refinement, RejectsBadMeshes) {
  EXPECT_THROW(refinement_study(core::Hurst(0.3), 1.0, {1.5}, {}), DomainError);
  EXPECT_THROW(refinement_study(core::Hurst(0.3), 1.0, {1.5}, {64, 32}), DomainError);
  EXPECT_THROW(refinement_study(core::Hurst(0.3), 1.0, {1.5}, {24, 64}), DomainError);
  EXPECT_THROW(refinement_study(core::Hurst(0.3), 1.0, {0.5}, {8}), DomainError);
}
