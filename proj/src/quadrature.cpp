#include "hermite/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numeric>

#include "hermite/error.hpp"

namespace hermite::quad {

double Rule::weight_sum() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

const Rule& gauss_legendre_16() {
  static const Rule rule = [] {
    using gauss = boost::math::quadrature::gauss<double, 16>;
    const auto& x = gauss::abscissa();
    const auto& w = gauss::weights();
    Rule r;
    // Even order: the tabulated abscissas are the 8 positive nodes.
    for (std::size_t i = x.size(); i-- > 0;) {
      r.nodes.push_back(-x[i]);
      r.weights.push_back(w[i]);
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
      r.nodes.push_back(x[i]);
      r.weights.push_back(w[i]);
    }
    return r;
  }();
  return rule;
}

namespace {

void append_panel(Rule& out, double lo, double hi) {
  const Rule& base = gauss_legendre_16();
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  for (std::size_t i = 0; i < base.size(); ++i) {
    out.nodes.push_back(mid + half * base.nodes[i]);
    out.weights.push_back(half * base.weights[i]);
  }
}

}  // namespace

Rule composite_gauss_legendre(double a, double b, int panels) {
  if (panels < 1 || !(b > a)) throw ValidationError("composite_gauss_legendre: bad interval/panels");
  Rule r;
  r.nodes.reserve(static_cast<std::size_t>(panels) * 16);
  r.weights.reserve(static_cast<std::size_t>(panels) * 16);
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) append_panel(r, a + p * h, (p + 1 == panels) ? b : a + (p + 1) * h);
  return r;
}

Rule geometric_gauss_legendre(double a, double b, int levels) {
  if (levels < 1 || !(b > a)) throw ValidationError("geometric_gauss_legendre: bad interval/levels");
  Rule r;
  double hi = b;
  for (int k = 0; k < levels; ++k) {
    const double lo = a + 0.5 * (hi - a);
    append_panel(r, lo, hi);
    hi = lo;
  }
  return r;
}

Rule trapezoid(double a, double b, int nodes) {
  if (nodes < 2 || !(b > a)) throw ValidationError("trapezoid: need >= 2 nodes on a proper interval");
  Rule r;
  r.nodes.resize(static_cast<std::size_t>(nodes));
  r.weights.assign(static_cast<std::size_t>(nodes), (b - a) / (nodes - 1));
  for (int i = 0; i < nodes; ++i) r.nodes[static_cast<std::size_t>(i)] = a + (b - a) * i / (nodes - 1);
  r.nodes.back() = b;
  r.weights.front() *= 0.5;
  r.weights.back() *= 0.5;
  return r;
}

}  // namespace hermite::quad
