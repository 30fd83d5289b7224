#pragma once

#include <vector>

namespace fbm::numerics {

/// Gauss rule on [0,1] for the weight y^alpha (1-y)^beta.
/// complements[i] == 1 - nodes[i], computed without cancellation.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> complements;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// Golub-Welsch construction from the Jacobi recurrence. alpha, beta > -1.
GaussRule gauss_jacobi_unit(int n, double alpha, double beta);

} // namespace fbm::numerics
