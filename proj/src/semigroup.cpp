#include "hermite/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace hermite {

namespace {

constexpr double kPi = std::numbers::pi;

void check_dims(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.empty() || x.size() > static_cast<std::size_t>(kMaxDim))
    throw ValidationError("kernel: point dimensions differ or are out of range");
}

double log_mehler(double t, std::span<const double> x, std::span<const double> y) {
  double diff2 = 0.0;
  double sum2 = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    diff2 += (x[j] - y[j]) * (x[j] - y[j]);
    sum2 += (x[j] + y[j]) * (x[j] + y[j]);
  }
  const double n = static_cast<double>(x.size());
  // e^{-2t} / (1 - e^{-4t}) = 1 / (2 sinh 2t)
  const double log_2sinh = 2.0 * t + std::log(-std::expm1(-4.0 * t));
  const double th = std::tanh(t);
  return -0.5 * n * std::log(kPi) - 0.5 * n * log_2sinh - 0.25 * (diff2 / th + sum2 * th);
}

}  // namespace

double mehler_kernel(double t, std::span<const double> x, std::span<const double> y) {
  if (!(t > 0.0)) throw ValidationError("mehler_kernel: t must be positive");
  check_dims(x, y);
  return std::exp(log_mehler(t, x, y));
}

HermiteExpansion heat_apply(const HermiteExpansion& e, double t) {
  if (!(t >= 0.0)) throw ValidationError("heat_apply: t must be non-negative");
  return e.map_diagonal([t](const MultiIndex& k) { return cplx(std::exp(-k.eigenvalue() * t)); }, false);
}

HermiteExpansion poisson_apply(const HermiteExpansion& e, double t) {
  if (!(t >= 0.0)) throw ValidationError("poisson_apply: t must be non-negative");
  return e.map_diagonal([t](const MultiIndex& k) { return cplx(std::exp(-t * std::sqrt(k.eigenvalue()))); },
                        false);
}

HermiteExpansion poisson_time_derivative(const HermiteExpansion& e, int order, double t) {
  if (order < 1) throw ValidationError("poisson_time_derivative: order must be >= 1 (use poisson_apply)");
  if (!(t > 0.0)) throw ValidationError("poisson_time_derivative: t must be positive");
  return e.map_diagonal(
      [order, t](const MultiIndex& k) {
        const double mu = std::sqrt(k.eigenvalue());
        return cplx(std::pow(-mu, order) * std::exp(-t * mu));
      },
      false);
}

// ---- subordination ----------------------------------------------------------

SubordinationQuadrature::SubordinationQuadrature(int nodes, double log_min, double log_max) {
  const auto rule = quad::trapezoid(log_min, log_max, nodes);
  u_.resize(rule.size());
  du_.resize(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    u_[i] = std::exp(rule.nodes[i]);
    du_[i] = rule.weights[i] * u_[i];
  }
}

std::vector<double> SubordinationQuadrature::weights(double t) const {
  if (!(t > 0.0)) throw ValidationError("subordination: t must be positive");
  std::vector<double> w(u_.size());
  const double c = t / (2.0 * std::sqrt(kPi));
  for (std::size_t i = 0; i < u_.size(); ++i)
    w[i] = c * std::pow(u_[i], -1.5) * std::exp(-t * t / (4.0 * u_[i])) * du_[i];
  return w;
}

double SubordinationQuadrature::poisson_factor(double t, double lambda) const {
  const auto w = weights(t);
  double s = 0.0;
  for (std::size_t i = 0; i < u_.size(); ++i) s += w[i] * std::exp(-lambda * u_[i]);
  return s;
}

HermiteExpansion SubordinationQuadrature::apply(const HermiteExpansion& e, double t) const {
  if (t == 0.0) return e;
  const auto w = weights(t);
  HermiteExpansion out(e.dim(), e.cap(), e.space());
  for (std::size_t i = 0; i < u_.size(); ++i) {
    if (w[i] == 0.0) continue;
    const auto heat = heat_apply(e, u_[i]);
    for (const auto& [k, c] : heat.coeffs()) out.accumulate(k, c, w[i]);
  }
  return out;
}

double SubordinationQuadrature::kernel(double t, std::span<const double> x, std::span<const double> y) const {
  check_dims(x, y);
  const auto w = weights(t);
  double s = 0.0;
  for (std::size_t i = 0; i < u_.size(); ++i)
    if (w[i] != 0.0) s += w[i] * std::exp(log_mehler(u_[i], x, y));
  return s;
}

double faa_di_bruno_coefficient(int order, int k) {
  if (order < 0 || k < 0 || 2 * k > order) throw ValidationError("faa_di_bruno_coefficient: index out of range");
  return std::ldexp(std::tgamma(order + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(order - 2.0 * k + 1.0)),
                    order - 2 * k);
}

double SubordinationQuadrature::kernel_derivative(int l, double s, std::span<const double> x,
                                                  std::span<const double> y) const {
  if (l < 0 || l > 4) throw ValidationError("kernel_derivative: order must lie in 0..4");
  if (!(s > 0.0)) throw ValidationError("kernel_derivative: s must be positive");
  check_dims(x, y);
  // d^l/ds^l P_s = -(1/sqrt(pi)) int u^{-1/2} d^{l+1}/ds^{l+1} e^{-s^2/4u} W_u du
  const int order = l + 1;
  double total = 0.0;
  for (std::size_t i = 0; i < u_.size(); ++i) {
    const double u = u_[i];
    const double w = s / (2.0 * std::sqrt(u));
    const double gauss = std::exp(-w * w);
    if (gauss == 0.0) continue;
    double poly = 0.0;
    for (int k = 0; 2 * k <= order; ++k) {
      const double sign = ((order + k) % 2 == 0) ? 1.0 : -1.0;
      poly += sign * faa_di_bruno_coefficient(order, k) * std::pow(w, order - 2 * k);
    }
    const double deriv = std::pow(2.0 * std::sqrt(u), -order) * poly * gauss;
    total += du_[i] * std::pow(u, -0.5) * deriv * std::exp(log_mehler(u, x, y));
  }
  return -total / std::sqrt(kPi);
}

KernelDecayReport kernel_decay_check(int order, std::span<const KernelSample> samples,
                                     const SubordinationQuadrature& quad) {
  if (order < 1 || order > 4) throw ValidationError("kernel_decay_check: order must lie in 1..4");
  KernelDecayReport report;
  report.order = order;
  report.ratios.reserve(samples.size());
  for (const auto& sample : samples) {
    double dist2 = 0.0;
    if (sample.x.size() != sample.y.size()) throw ValidationError("kernel_decay_check: point dimensions differ");
    for (std::size_t j = 0; j < sample.x.size(); ++j) dist2 += (sample.x[j] - sample.y[j]) * (sample.x[j] - sample.y[j]);
    const double value = quad.kernel_derivative(order, sample.s, sample.x, sample.y);
    const double ratio = std::abs(value) * std::pow(sample.s + std::sqrt(dist2), 1.0 + order);
    report.ratios.push_back(ratio);
    report.constant = std::max(report.constant, ratio);
  }
  return report;
}

// ---- fractional derivatives -------------------------------------------------

FractionalOrder::FractionalOrder(double a) : alpha(a), m(0) {
  if (!(a > 0.0) || !std::isfinite(a)) throw ValidationError("FractionalOrder: alpha must be positive");
  m = static_cast<int>(std::floor(a)) + 1;
}

namespace {

double gamma_integral_at(double mu, double gamma, int levels, int tail_panels) {
  const double a = 1.0 / mu;
  // Near part: w = s^gamma turns s^{gamma-1} ds into dw / gamma.
  const double top = std::pow(a, gamma);
  auto near = quad::geometric_gauss_legendre(0.0, top, levels);
  const auto rest = quad::composite_gauss_legendre(0.0, std::ldexp(top, -levels), 1);
  near.nodes.insert(near.nodes.end(), rest.nodes.begin(), rest.nodes.end());
  near.weights.insert(near.weights.end(), rest.weights.begin(), rest.weights.end());
  double head = 0.0;
  for (std::size_t i = 0; i < near.size(); ++i)
    head += near.weights[i] * std::exp(-mu * std::pow(near.nodes[i], 1.0 / gamma));
  head /= gamma;
  // Tail: s = a + y / mu.
  const double ymax = 60.0 + 4.0 * gamma;
  const auto tail_rule = quad::composite_gauss_legendre(0.0, ymax, tail_panels);
  double tail = 0.0;
  for (std::size_t i = 0; i < tail_rule.size(); ++i) {
    const double y = tail_rule.nodes[i];
    tail += tail_rule.weights[i] * std::exp(-1.0 - y) * std::pow(1.0 + y, gamma - 1.0);
  }
  tail *= std::pow(mu, -gamma);
  return head + tail;
}

}  // namespace

double gamma_integral(double mu, double gamma) {
  if (!(mu > 0.0) || !(gamma > 0.0)) throw ValidationError("gamma_integral: mu and gamma must be positive");
  const double fine = gamma_integral_at(mu, gamma, 48, 16);
  const double coarse = gamma_integral_at(mu, gamma, 32, 8);
  const double residual = std::abs(fine - coarse) / std::abs(fine);
  if (!std::isfinite(fine) || residual > 1e-9)
    throw NonConvergence("gamma_integral: quadrature did not stabilize", residual);
  return fine;
}

cplx fractional_frequency_factor(double mu, const FractionalOrder& order) {
  if (!(mu > 0.0)) throw ValidationError("fractional_derivative: mu must be positive");
  const double g = order.m - order.alpha;
  const cplx phase = std::polar(1.0, -kPi * g);
  return phase / std::tgamma(g) * std::pow(-mu, order.m) * gamma_integral(mu, g);
}

cplx fractional_derivative_scalar(double mu, const FractionalOrder& order, double t) {
  if (!(t > 0.0)) throw ValidationError("fractional_derivative: t must be positive");
  return fractional_frequency_factor(mu, order) * std::exp(-t * mu);
}

cplx fractional_derivative_closed_form(double mu, const FractionalOrder& order, double t) {
  return std::polar(std::pow(mu, order.alpha) * std::exp(-t * mu), kPi * order.alpha);
}

HermiteExpansion fractional_g_operator(const HermiteExpansion& e, const FractionalOrder& order, double t) {
  if (!(t > 0.0)) throw ValidationError("fractional_g_operator: t must be positive");
  std::map<int, cplx> cache;
  const double scale = std::pow(t, order.alpha);
  return e.map_diagonal([&](const MultiIndex& k) {
    auto it = cache.find(k.order());
    if (it == cache.end())
      it = cache.emplace(k.order(), scale * fractional_derivative_scalar(std::sqrt(k.eigenvalue()), order, t)).first;
    return it->second;
  });
}

HermiteExpansion negative_power(const HermiteExpansion& e, double beta) {
  if (!(beta > 0.0)) throw ValidationError("negative_power: beta must be positive");
  return e.map_diagonal([beta](const MultiIndex& k) { return cplx(std::pow(k.eigenvalue(), -beta)); }, false);
}

HermiteExpansion power(const HermiteExpansion& e, double beta) {
  if (!std::isfinite(beta)) throw ValidationError("power: beta must be finite");
  return e.map_diagonal([beta](const MultiIndex& k) { return cplx(std::pow(k.eigenvalue(), beta)); }, false);
}

double negative_power_by_quadrature(double lambda, double beta) {
  return gamma_integral(lambda, beta) / std::tgamma(beta);
}

}  // namespace hermite
