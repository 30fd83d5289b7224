#pragma once

#include <cstdint>
#include <vector>

#include "fbm/core/hurst.h"
#include "fbm/linalg/matrix.h"

namespace fbm::oracle {

/// fBm restricted to a finite grid of positive times.
struct GridGaussian {
  std::vector<double> grid;
  double hurst = 0.5;
  linalg::Matrix cov;
  linalg::CholeskyFactor chol;
};

struct MCConfig {
  std::size_t n_paths = 2;
  std::uint64_t seed = 0;
  bool antithetic = false;

  /// Throws DomainError if n_paths < 2.
  void validate() const;
};

/// Throws DomainError for an empty, unsorted or non-positive grid and
/// DegeneracyError when the jittered Cholesky factorisation fails.
GridGaussian build_grid_gaussian(const std::vector<double>& grid, core::Hurst h);

/// Exact samples chol·z, one path per row. With antithetic set, rows 2k and
/// 2k+1 share the normals of stream k with opposite signs.
linalg::Matrix sample_fbm(const GridGaussian& gg, const MCConfig& cfg);

/// Samples built as Σ k(t, s_i*) ΔW_i over a uniform internal grid of
/// internal_steps cells on [0, grid.back()], merged with the output grid;
/// s_i* is the cell midpoint.
linalg::Matrix sample_fbm_volterra(const std::vector<double>& grid, core::Hurst h, const MCConfig& cfg,
                                   std::size_t internal_steps = 1024);

/// Discrete Gaussian conditioning on the values at past_indices. mean and cov
/// cover the whole grid; past entries are the observations and zero rows.
struct SchurResult {
  std::vector<std::size_t> future_indices;
  std::vector<double> mean;
  linalg::Matrix cov;
};

SchurResult schur_condition(const GridGaussian& gg, const std::vector<std::size_t>& past_indices,
                            const std::vector<double>& past_values);

/// One row per mesh: sup over the future grid of the mean and covariance
/// discrepancies between discrete conditioning and the analytic law.
struct RefinementRow {
  std::size_t mesh;   // number of observation cells on [0,u]
  double mean_error;  // max_i |schur mean - cond_mean| on the sampled path
  double mean_rms;    // max_i of the same discrepancy's RMS over the fBm law
  double cov_error;   // max_ij |schur cov - cond_cov| / |cond_cov|
};

struct RefinementTable {
  std::vector<RefinementRow> rows;
  double path_sup = 0.0; // sup-norm of the conditioning path

  /// mean_rms and cov_error non-increasing up to a relative allowance. The
  /// single-path mean_error is a Gaussian draw whose scale is mean_rms, so it
  /// is not monotone in the mesh even when the discretisation is.
  /// Values below `floor` count as zero (rounding noise of the Schur route).
  bool decreasing(double allowance = 0.1, double floor = 1e-12) const;
  /// Same test applied to the single-path column.
  bool path_error_decreasing(double allowance = 0.1, double floor = 1e-12) const;
};

/// The conditioning path is an exact fBm sample on the finest mesh (first
/// sample from `seed` upwards with sup-norm ≤ max_sup), subsampled for the
/// coarser ones. meshes must be increasing, each dividing the last.
RefinementTable refinement_study(core::Hurst h, double u, const std::vector<double>& future,
                                 const std::vector<std::size_t>& meshes, std::uint64_t seed = 1,
                                 double max_sup = 2.0);

} // namespace fbm::oracle
