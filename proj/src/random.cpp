#include "hermite/random.hpp"

#include <random>

namespace hermite {

namespace {

std::mt19937_64 keyed_engine(std::uint64_t seed, std::uint64_t item, std::uint64_t draw) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(seed), hi(seed), lo(item), hi(item), lo(draw), hi(draw)};
  return std::mt19937_64(seq);
}

}  // namespace

std::vector<double> keyed_normals(std::uint64_t seed, std::uint64_t item, std::uint64_t draw, std::size_t count) {
  auto engine = keyed_engine(seed, item, draw);
  std::normal_distribution<double> normal;
  std::vector<double> out(count);
  for (auto& v : out) v = normal(engine);
  return out;
}

std::vector<double> keyed_uniforms(std::uint64_t seed, std::uint64_t item, std::uint64_t draw, std::size_t count) {
  auto engine = keyed_engine(seed, item, draw);
  std::uniform_real_distribution<double> unif;
  std::vector<double> out(count);
  for (auto& v : out) v = unif(engine);
  return out;
}

}  // namespace hermite
