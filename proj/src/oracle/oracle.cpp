#include "fbm/oracle/oracle.h"

#include <algorithm>
#include <cmath>

#include "fbm/core/kernel.h"
#include "fbm/errors.h"
#include "fbm/numerics/rng.h"
#include "fbm/prediction/prediction.h"
#include "fbm/simd/kernels.h"

namespace fbm::oracle {

void MCConfig::validate() const {
  if (n_paths < 2) {
    throw DomainError("MCConfig: n_paths must be at least 2");
  }
}

namespace {

void check_grid(const std::vector<double>& grid, const char* who) {
  if (grid.empty()) {
    throw DomainError(std::string(who) + ": empty grid");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i]) || (i > 0 && !(grid[i] > grid[i - 1]))) {
      throw DomainError(std::string(who) + ": grid must be positive and strictly increasing");
    }
  }
}

} // namespace

GridGaussian build_grid_gaussian(const std::vector<double>& grid, core::Hurst h) {
  check_grid(grid, "build_grid_gaussian");
  GridGaussian gg;
  gg.grid = grid;
  gg.hurst = h.value();
  const std::size_t n = grid.size();
  gg.cov = linalg::Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double c = core::fbm_cov(grid[i], grid[j], h);
      gg.cov(i, j) = c;
      gg.cov(j, i) = c;
    }
  }
  gg.chol = linalg::cholesky_jittered(gg.cov);
  return gg;
}

linalg::Matrix sample_fbm(const GridGaussian& gg, const MCConfig& cfg) {
  cfg.validate();
  const std::size_t n = gg.grid.size();
  linalg::Matrix out(cfg.n_paths, n);
  std::vector<double> z(n);
  for (std::size_t p = 0; p < cfg.n_paths; ++p) {
    if (cfg.antithetic && p % 2 == 1) {
      auto prev = out.row(p - 1);
      auto row = out.row(p);
      for (std::size_t i = 0; i < n; ++i) {
        row[i] = -prev[i];
      }
      continue;
    }
    auto gen = numerics::stream(cfg.seed, cfg.antithetic ? p / 2 : p);
    numerics::fill_normal(gen, z);
    linalg::lower_multiply(gg.chol.lower, z, out.row(p));
  }
  return out;
}

linalg::Matrix sample_fbm_volterra(const std::vector<double>& grid, core::Hurst h, const MCConfig& cfg,
                                   std::size_t internal_steps) {
  cfg.validate();
  check_grid(grid, "sample_fbm_volterra");
  if (internal_steps < 1) {
    throw DomainError("sample_fbm_volterra: need at least one internal step");
  }
  const double horizon = grid.back();
  std::vector<double> nodes{0.0};
  for (std::size_t i = 1; i <= internal_steps; ++i) {
    nodes.push_back(horizon * static_cast<double>(i) / static_cast<double>(internal_steps));
  }
  nodes.insert(nodes.end(), grid.begin(), grid.end());
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  const std::size_t cells = nodes.size() - 1;

  // weights(i, c) = k(grid[i], midpoint of cell c) for cells left of grid[i].
  const core::VolterraKernel kernel(h);
  const std::size_t m = grid.size();
  linalg::Matrix weights(m, cells);
  for (std::size_t i = 0; i < m; ++i) {
    const double t = grid[i];
    for (std::size_t c = 0; c < cells && nodes[c + 1] <= t; ++c) {
      const double half = 0.5 * (nodes[c + 1] - nodes[c]);
      const double s = nodes[c] + half;
      weights(i, c) = kernel.at_gap(t, s, (t - nodes[c + 1]) + half);
    }
  }

  linalg::Matrix out(cfg.n_paths, m);
  std::vector<double> dw(cells);
  for (std::size_t p = 0; p < cfg.n_paths; ++p) {
    if (cfg.antithetic && p % 2 == 1) {
      auto prev = out.row(p - 1);
      auto row = out.row(p);
      for (std::size_t i = 0; i < m; ++i) {
        row[i] = -prev[i];
      }
      continue;
    }
    auto gen = numerics::stream(cfg.seed, cfg.antithetic ? p / 2 : p);
    numerics::fill_normal(gen, dw);
    for (std::size_t c = 0; c < cells; ++c) {
      dw[c] *= std::sqrt(nodes[c + 1] - nodes[c]);
    }
    auto row = out.row(p);
    for (std::size_t i = 0; i < m; ++i) {
      row[i] = simd::dot(weights.row(i), dw);
    }
  }
  return out;
}

SchurResult schur_condition(const GridGaussian& gg, const std::vector<std::size_t>& past_indices,
                            const std::vector<double>& past_values) {
  const std::size_t n = gg.grid.size();
  if (past_indices.empty() || past_indices.size() != past_values.size()) {
    throw DomainError("schur_condition: need matching, non-empty past indices and values");
  }
  std::vector<bool> is_past(n, false);
  for (std::size_t idx : past_indices) {
    if (idx >= n || is_past[idx]) {
      throw DomainError("schur_condition: past index out of range or repeated");
    }
    is_past[idx] = true;
  }
  SchurResult res;
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_past[i]) {
      res.future_indices.push_back(i);
    }
  }
  const std::size_t np = past_indices.size();
  const std::size_t nf = res.future_indices.size();

  linalg::Matrix spp(np, np);
  for (std::size_t i = 0; i < np; ++i) {
    for (std::size_t j = 0; j < np; ++j) {
      spp(i, j) = gg.cov(past_indices[i], past_indices[j]);
    }
  }
  const auto factor = linalg::cholesky_jittered(spp);

  // Row f of a holds L⁻¹ Σ_pf for future point f.
  linalg::Matrix a(nf, np);
  for (std::size_t f = 0; f < nf; ++f) {
    auto col = a.row(f);
    for (std::size_t i = 0; i < np; ++i) {
      col[i] = gg.cov(past_indices[i], res.future_indices[f]);
    }
    linalg::forward_solve(factor.lower, col);
  }
  std::vector<double> white(past_values);
  linalg::forward_solve(factor.lower, white);

  res.mean.assign(n, 0.0);
  res.cov = linalg::Matrix(n, n);
  for (std::size_t i = 0; i < np; ++i) {
    res.mean[past_indices[i]] = past_values[i];
  }
  for (std::size_t f = 0; f < nf; ++f) {
    const std::size_t gf = res.future_indices[f];
    res.mean[gf] = simd::dot(a.row(f), white);
    for (std::size_t g = 0; g <= f; ++g) {
      const std::size_t gg_idx = res.future_indices[g];
      const double c = gg.cov(gf, gg_idx) - simd::dot(a.row(f), a.row(g));
      res.cov(gf, gg_idx) = c;
      res.cov(gg_idx, gf) = c;
    }
  }
  return res;
}

namespace {

bool not_above(double next, double prev, double allowance, double floor) {
  return next <= std::max(prev * (1.0 + allowance), floor);
}

} // namespace

bool RefinementTable::decreasing(double allowance, double floor) const {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (!not_above(rows[i].mean_rms, rows[i - 1].mean_rms, allowance, floor)) return false;
    if (!not_above(rows[i].cov_error, rows[i - 1].cov_error, allowance, floor)) return false;
  }
  return true;
}

bool RefinementTable::path_error_decreasing(double allowance, double floor) const {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (!not_above(rows[i].mean_error, rows[i - 1].mean_error, allowance, floor)) return false;
  }
  return true;
}

RefinementTable refinement_study(core::Hurst h, double u, const std::vector<double>& future,
                                 const std::vector<std::size_t>& meshes, std::uint64_t seed, double max_sup) {
  if (meshes.empty() || !(u > 0.0)) {
    throw DomainError("refinement_study: need u > 0 and at least one mesh");
  }
  for (std::size_t i = 0; i < meshes.size(); ++i) {
    if (meshes[i] == 0 || (i > 0 && meshes[i] <= meshes[i - 1]) || meshes.back() % meshes[i] != 0) {
      throw DomainError("refinement_study: meshes must increase and divide the finest mesh");
    }
  }
  for (double t : future) {
    if (!(t > u)) {
      throw DomainError("refinement_study: future times must exceed u");
    }
  }
  const std::size_t finest = meshes.back();
  auto mesh_times = [u](std::size_t m) {
    std::vector<double> t(m);
    for (std::size_t k = 1; k <= m; ++k) {
      t[k - 1] = u * static_cast<double>(k) / static_cast<double>(m);
    }
    return t;
  };

  // Conditioning path: exact sample on the finest mesh.
  const auto fine = build_grid_gaussian(mesh_times(finest), h);
  std::vector<double> path;
  double sup = 0.0;
  for (std::uint64_t attempt = 0;; ++attempt) {
    if (attempt == 1000) {
      throw DegeneracyError("refinement_study: no sample path within the sup-norm bound");
    }
    const auto sample = sample_fbm(fine, MCConfig{2, seed + attempt, false});
    auto row = sample.row(0);
    sup = 0.0;
    for (double v : row) sup = std::max(sup, std::abs(v));
    if (sup <= max_sup) {
      path.assign(row.begin(), row.end());
      break;
    }
  }

  const core::VolterraKernel kernel(h);
  const std::size_t nf = future.size();
  linalg::Matrix analytic_cov(nf, nf);
  for (std::size_t i = 0; i < nf; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      analytic_cov(i, j) = analytic_cov(j, i) = prediction::cond_cov(future[i], future[j], u, kernel);
    }
  }

  RefinementTable table;
  table.path_sup = sup;
  for (std::size_t m : meshes) {
    const std::size_t stride = finest / m;
    auto times = mesh_times(m);
    std::vector<double> values(m);
    for (std::size_t k = 0; k < m; ++k) {
      values[k] = path[(k + 1) * stride - 1];
    }
    std::vector<double> all(times);
    all.insert(all.end(), future.begin(), future.end());
    const auto gg = build_grid_gaussian(all, h);
    std::vector<std::size_t> past(m);
    for (std::size_t k = 0; k < m; ++k) past[k] = k;
    const auto schur = schur_condition(gg, past, values);

    std::vector<double> obs_t{0.0};
    obs_t.insert(obs_t.end(), times.begin(), times.end());

    linalg::Matrix spp(m, m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) spp(i, j) = gg.cov(i, j);
    }
    const auto factor = linalg::cholesky_jittered(spp);

    RefinementRow row{m, 0.0, 0.0, 0.0};
    std::vector<double> diff(m), spp_diff(m);
    for (std::size_t i = 0; i < nf; ++i) {
      // Both predictors are linear in the observed values; diff holds the
      // difference of their coefficient vectors.
      const auto w = prediction::prediction_weights(obs_t, future[i], h);
      for (std::size_t k = 0; k < m; ++k) {
        diff[k] = gg.cov(k, m + i);
      }
      linalg::forward_solve(factor.lower, diff);
      linalg::back_solve(factor.lower, diff);
      double analytic_mean = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        const double coef = -w[k] + (k + 1 < m ? w[k + 1] : 1.0);
        analytic_mean += coef * values[k];
        diff[k] -= coef;
      }
      row.mean_error = std::max(row.mean_error, std::abs(schur.mean[m + i] - analytic_mean));
      for (std::size_t k = 0; k < m; ++k) {
        spp_diff[k] = simd::dot(spp.row(k), diff);
      }
      row.mean_rms = std::max(row.mean_rms, std::sqrt(std::max(0.0, simd::dot(diff, spp_diff))));
      for (std::size_t j = 0; j < nf; ++j) {
        const double d = std::abs(schur.cov(m + i, m + j) - analytic_cov(i, j));
        const double scale = std::abs(analytic_cov(i, j));
        row.cov_error = std::max(row.cov_error, scale > 0.0 ? d / scale : d);
      }
    }
    table.rows.push_back(row);
  }
  return table;
}

} // namespace fbm::oracle
