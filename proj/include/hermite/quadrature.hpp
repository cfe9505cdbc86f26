#pragma once

#include <vector>

namespace hermite::quad {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
  double weight_sum() const;
};

// 16-point Gauss-Legendre rule on [-1, 1].
const Rule& gauss_legendre_16();

// `panels` equal panels of the 16-point rule on [a, b].
Rule composite_gauss_legendre(double a, double b, int panels);

// Panels [a + (b-a) 2^{-k-1}, a + (b-a) 2^{-k}] for k < levels, graded towards a.
// The leftover [a, a + (b-a) 2^{-levels}] is not covered.
Rule geometric_gauss_legendre(double a, double b, int levels);

// Trapezoid rule with `nodes` equispaced nodes on [a, b] (end weights halved).
Rule trapezoid(double a, double b, int nodes);

}  // namespace hermite::quad
