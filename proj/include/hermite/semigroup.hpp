#pragma once

// Heat and Poisson semigroups of the Hermite operator, in kernel and spectral form.

#include <span>
#include <vector>

#include "hermite/core.hpp"
#include "hermite/quadrature.hpp"

namespace hermite {

// W_t(x, y), written with sinh/coth/tanh so it stays finite for small and large t.
double mehler_kernel(double t, std::span<const double> x, std::span<const double> y);

// c_k -> e^{-(2|k|+n) t} c_k
HermiteExpansion heat_apply(const HermiteExpansion& e, double t);
// c_k -> e^{-t sqrt(2|k|+n)} c_k
HermiteExpansion poisson_apply(const HermiteExpansion& e, double t);
// c_k -> (-sqrt(2|k|+n))^order e^{-t sqrt(2|k|+n)} c_k
HermiteExpansion poisson_time_derivative(const HermiteExpansion& e, int order, double t);

// Nodes for the subordination integral
//   P_t = t / (2 sqrt(pi)) int_0^inf u^{-3/2} e^{-t^2/4u} W_u du
// in the variable v = log u, trapezoid on [v_min, v_max].
class SubordinationQuadrature {
 public:
  static constexpr double kDefaultLogMin = -16.0;
  static constexpr double kDefaultLogMax = 8.0;
  static constexpr int kDefaultNodes = 600;

  SubordinationQuadrature(int nodes = kDefaultNodes, double log_min = kDefaultLogMin,
                          double log_max = kDefaultLogMax);

  double u_min() const noexcept { return u_.front(); }
  double u_max() const noexcept { return u_.back(); }
  const std::vector<double>& u_nodes() const noexcept { return u_; }
  // Subordinator density times du at every node, for Poisson time t.
  std::vector<double> weights(double t) const;

  // Poisson multiplier for eigenvalue `lambda` by quadrature; exact value e^{-t sqrt(lambda)}.
  double poisson_factor(double t, double lambda) const;
  // Poisson action through the heat semigroup, coefficient by coefficient.
  HermiteExpansion apply(const HermiteExpansion& e, double t) const;
  // P_t(x, y) from the Mehler kernel.
  double kernel(double t, std::span<const double> x, std::span<const double> y) const;
  // d^l/ds^l P_s(x, y), l <= 4, by differentiating the subordinator in closed form
  // (Hermite-polynomial expansion of the derivatives of e^{-s^2/4u}).
  double kernel_derivative(int l, double s, std::span<const double> x, std::span<const double> y) const;

 private:
  std::vector<double> u_;
  std::vector<double> du_;  // trapezoid weight times u (Jacobian of u = e^v)
};

// Coefficients of the Hermite-polynomial form of d^N/dw^N e^{-w^2}:
//   d^N/dw^N e^{-w^2} = sum_k (-1)^{N+k} E_{N,k} w^{N-2k} e^{-w^2},
//   E_{N,k} = 2^{N-2k} N! / (k! (N-2k)!).
double faa_di_bruno_coefficient(int order, int k);

struct KernelSample {
  double s;
  std::vector<double> x;
  std::vector<double> y;
};

struct KernelDecayReport {
  int order = 0;
  // Smallest C with |d^l P_s(x,y)| <= C / (s + |x-y|)^{1+l} on the samples.
  double constant = 0.0;
  // Per-sample ratio |d^l P_s| (s + |x-y|)^{1+l}.
  std::vector<double> ratios;
};

KernelDecayReport kernel_decay_check(int order, std::span<const KernelSample> samples,
                                     const SubordinationQuadrature& quad = SubordinationQuadrature());

// Order of a fractional derivative: m - 1 <= alpha < m.
struct FractionalOrder {
  explicit FractionalOrder(double alpha);
  double alpha;
  int m;
};

// int_0^inf e^{-mu s} s^{gamma-1} ds by quadrature (split at 1/mu, power substitution
// near 0); closed form Gamma(gamma) mu^{-gamma}. Throws NonConvergence if a
// half-resolution rerun disagrees by more than 1e-9 relative.
double gamma_integral(double mu, double gamma);

// Fractional derivative in t of e^{-t mu}:
//   e^{-i pi (m-alpha)} / Gamma(m-alpha) int_0^inf (-mu)^m e^{-(t+s) mu} s^{m-alpha-1} ds,
// evaluated by quadrature. Closed form e^{i pi alpha} mu^alpha e^{-t mu}.
cplx fractional_derivative_scalar(double mu, const FractionalOrder& order, double t);
cplx fractional_derivative_closed_form(double mu, const FractionalOrder& order, double t);
// The t-independent part: fractional_derivative_scalar(mu, order, t) = factor * e^{-t mu}.
cplx fractional_frequency_factor(double mu, const FractionalOrder& order);

// c_k -> t^alpha * (fractional derivative of e^{-t sqrt(2|k|+n)}) * c_k
HermiteExpansion fractional_g_operator(const HermiteExpansion& e, const FractionalOrder& order, double t);

// H^{-beta}: c_k -> (2|k|+n)^{-beta} c_k
HermiteExpansion negative_power(const HermiteExpansion& e, double beta);
// H^{beta}: c_k -> (2|k|+n)^{beta} c_k
HermiteExpansion power(const HermiteExpansion& e, double beta);
// (1/Gamma(beta)) int_0^inf e^{-lambda t} t^{beta-1} dt by quadrature.
double negative_power_by_quadrature(double lambda, double beta);

}  // namespace hermite
