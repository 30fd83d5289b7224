#include "fbm/prediction/prediction.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fbm/errors.h"
#include "fbm/numerics/rng.h"

namespace fbm::prediction {

ObservedPath::ObservedPath(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
  if (times_.size() < 2) {
    throw DomainError("ObservedPath: need at least 2 points");
  }
  if (times_.size() != values_.size()) {
    throw DomainError("ObservedPath: times and values differ in length");
  }
  if (times_[0] != 0.0 || values_[0] != 0.0) {
    throw DomainError("ObservedPath: path must start at (0, 0)");
  }
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1]) || !std::isfinite(times_[i])) {
      throw DomainError("ObservedPath: times must be strictly increasing");
    }
    if (!std::isfinite(values_[i])) {
      throw DomainError("ObservedPath: non-finite value");
    }
  }
}

numerics::QuadratureSpec default_psi_quadrature() {
  numerics::QuadratureSpec spec;
  spec.rule = numerics::Rule::AdaptiveSubdivision;
  spec.rel_tol = numerics::kSmoothRelTol;
  return spec;
}

double psi_at_gap(double t, double s, double u, double u_minus_s, core::Hurst h,
                  const numerics::QuadratureSpec& quad) {
  if (h.near_half() || t == u) {
    return 0.0;
  }
  const double x = h.excess();
  auto f = [&](const numerics::Abscissa& p) {
    const double z = u + p.from_left;
    return std::pow(z, x) / (u_minus_s + p.from_left);
  };
  const double integral =
      numerics::integrate_weighted(numerics::WeightedIntegrand(f), u, t, quad.with_exponents(x, 0.0)).value;
  const double prefactor = -std::sin(std::numbers::pi * x) / std::numbers::pi;
  return prefactor * std::pow(s * u_minus_s, -x) * integral;
}

double psi(double t, double s, double u, core::Hurst h, const numerics::QuadratureSpec& quad) {
  if (!(s > 0.0) || !(s < u) || !(t >= u) || !std::isfinite(t)) {
    throw DomainError("psi: need 0 < s < u <= t");
  }
  return psi_at_gap(t, s, u, u - s, h, quad);
}

namespace {

// Offsets o_0 = h > o_1 > ... > o_{n-1} > 0 measured from the singular end;
// subcell j spans [o_{j+1}, o_j] with o_n = 0.
std::vector<double> graded_offsets(double width) {
  std::vector<double> o(kGradedCells);
  double w = width;
  for (int j = 0; j < kGradedCells; ++j) {
    o[j] = w;
    w *= kGradingFactor;
  }
  return o;
}

// Mean of Ψ over [lo, hi] ⊂ [0,u] on geometric subcells graded towards the
// ends flagged in grade_left / grade_right.
double graded_weight(double t, double lo, double hi, double u, bool grade_left, bool grade_right,
                     core::Hurst h, const numerics::QuadratureSpec& quad) {
  const double width = hi - lo;
  if (grade_left && grade_right) {
    const double mid = lo + 0.5 * width;
    return 0.5 * (graded_weight(t, lo, mid, u, true, false, h, quad) +
                  graded_weight(t, mid, hi, u, false, true, h, quad));
  }
  const auto o = graded_offsets(width);
  double acc = 0.0;
  for (int j = 0; j < kGradedCells; ++j) {
    const double outer = o[j];
    const double inner = j + 1 < kGradedCells ? o[j + 1] : 0.0;
    const double centre = 0.5 * (outer + inner);
    double value;
    if (grade_left) {
      const double s = lo + centre;
      value = psi_at_gap(t, s, u, (u - hi) + (width - centre), h, quad);
    } else {
      const double gap = (u - hi) + centre;
      value = psi_at_gap(t, u - gap, u, gap, h, quad);
    }
    acc += value * (outer - inner);
  }
  return acc / width;
}

} // namespace

std::vector<double> prediction_weights(const std::vector<double>& times, double t, core::Hurst h,
                                       const numerics::QuadratureSpec& quad) {
  const std::size_t cells = times.size() - 1;
  const double u = times.back();
  if (!(t >= u)) {
    throw DomainError("prediction_weights: need t >= u");
  }
  std::vector<double> w(cells, 0.0);
  if (h.near_half() || t == u) {
    return w;
  }
  const bool graded = std::abs(h.excess()) > kGradingThreshold;
  for (std::size_t i = 0; i < cells; ++i) {
    const double lo = times[i];
    const double hi = times[i + 1];
    const bool first = i == 0;
    const bool last = i + 1 == cells;
    if (graded && (first || last)) {
      w[i] = graded_weight(t, lo, hi, u, first, last, h, quad);
    } else {
      const double half = 0.5 * (hi - lo);
      w[i] = psi_at_gap(t, lo + half, u, (u - hi) + half, h, quad);
    }
  }
  return w;
}

double cond_mean(const ObservedPath& path, double t, core::Hurst h, const numerics::QuadratureSpec& quad) {
  if (!(t >= path.u()) || !std::isfinite(t)) {
    throw DomainError("cond_mean: need t >= u");
  }
  if (h.near_half() || t == path.u()) {
    return path.last_value();
  }
  const auto w = prediction_weights(path.times(), t, h, quad);
  const auto& y = path.values();
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += w[i] * (y[i + 1] - y[i]);
  }
  return path.last_value() - acc;
}

CovarianceForms cond_cov_forms(double t, double s, double u, const core::VolterraKernel& kernel) {
  if (!(u > 0.0) || !(u <= t) || !(u <= s) || !std::isfinite(t) || !std::isfinite(s)) {
    throw DomainError("cond_cov: need 0 < u <= min(t,s)");
  }
  const double lo = std::min(t, s);
  const double r = core::fbm_cov(t, s, kernel.hurst());
  const double value = lo == u ? 0.0 : kernel.product_integral(t, s, u, lo);
  const double diagnostic = r - kernel.product_integral(t, s, 0.0, u);
  const bool consistent = std::abs(value - diagnostic) <= kTwoFormTolerance * std::max(1.0, r);
  return {value, diagnostic, consistent};
}

double cond_cov(double t, double s, double u, const core::VolterraKernel& kernel) {
  if (!(u > 0.0) || !(u <= t) || !(u <= s) || !std::isfinite(t) || !std::isfinite(s)) {
    throw DomainError("cond_cov: need 0 < u <= min(t,s)");
  }
  const double lo = std::min(t, s);
  return lo == u ? 0.0 : kernel.product_integral(t, s, u, lo);
}

double cond_cov(double t, double s, double u, core::Hurst h) {
  return cond_cov(t, s, u, core::VolterraKernel(h));
}

ConditionalLaw build_conditional_law(const ObservedPath& path, const std::vector<double>& grid, core::Hurst h,
                                     const numerics::QuadratureSpec& quad) {
  const double u = path.u();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= u) || !std::isfinite(grid[i]) || (i > 0 && !(grid[i] > grid[i - 1]))) {
      throw DomainError("build_conditional_law: grid must be strictly increasing and >= u");
    }
  }
  const core::VolterraKernel kernel(h, quad);
  ConditionalLaw law;
  law.u = u;
  law.grid = grid;
  law.mean.resize(grid.size());
  law.cov = linalg::Matrix(grid.size(), grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    law.mean[i] = cond_mean(path, grid[i], h, quad);
    for (std::size_t j = 0; j <= i; ++j) {
      const double c = (grid[i] == u || grid[j] == u) ? 0.0 : cond_cov(grid[i], grid[j], u, kernel);
      law.cov(i, j) = c;
      law.cov(j, i) = c;
    }
  }
  linalg::symmetrize(law.cov);
  if (!grid.empty()) {
    const double tr = linalg::trace(law.cov);
    if (linalg::min_eigenvalue(law.cov) < -1e-10 * tr) {
      throw DegeneracyError("build_conditional_law: covariance is not positive semidefinite");
    }
  }
  return law;
}

linalg::Matrix sample_conditional_paths(const ConditionalLaw& law, std::size_t n_paths, std::uint64_t seed) {
  const std::size_t m = law.grid.size();
  if (law.mean.size() != m || law.cov.rows() != m || law.cov.cols() != m) {
    throw DomainError("sample_conditional_paths: inconsistent law");
  }
  const auto factor = linalg::cholesky_jittered(law.cov);
  linalg::Matrix out(n_paths, m);
  std::vector<double> z(m);
  for (std::size_t p = 0; p < n_paths; ++p) {
    auto gen = numerics::stream(seed, p);
    numerics::fill_normal(gen, z);
    auto row = out.row(p);
    linalg::lower_multiply(factor.lower, z, row);
    for (std::size_t i = 0; i < m; ++i) {
      row[i] += law.mean[i];
    }
  }
  return out;
}

double bracket_density(double t, double u, core::Hurst h) {
  const double k = core::kernel_k(t, u, h);
  return k * k;
}

} // namespace fbm::prediction
