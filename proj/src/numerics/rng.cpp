#include "fbm/numerics/rng.h"

namespace fbm::numerics {

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

void fill_normal(std::mt19937_64& gen, std::span<double> out) {
  std::normal_distribution<double> normal;
  for (double& z : out) {
    z = normal(gen);
  }
}

} // namespace fbm::numerics
