#pragma once

#include <cstdint>
#include <vector>

namespace hermite {

// Standard normal draws keyed by (seed, item, draw). Each key seeds its own
// generator, so the numbers do not depend on evaluation order or thread count.
std::vector<double> keyed_normals(std::uint64_t seed, std::uint64_t item, std::uint64_t draw, std::size_t count);

// Uniform [0, 1) draws under the same keying.
std::vector<double> keyed_uniforms(std::uint64_t seed, std::uint64_t item, std::uint64_t draw, std::size_t count);

}  // namespace hermite
