#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace fbm::numerics {

/// Generator for stream `index` under `seed`. Streams for different indices
/// are seeded independently, so draws for path i never depend on how many
/// other paths were generated before it.
std::mt19937_64 stream(std::uint64_t seed, std::uint64_t index);

/// Fill out with independent standard normals from gen.
void fill_normal(std::mt19937_64& gen, std::span<double> out);

} // namespace fbm::numerics
