#pragma once

// Square functions built from the Poisson semigroup, the weighted time space
// L^2((0,inf)^n, dt/t), gamma-norms over finite-dimensional l^q targets, and
// norm-ratio experiments.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hermite/core.hpp"
#include "hermite/semigroup.hpp"

namespace hermite {

// Log-uniform nodes on [t_min, t_max] per axis with trapezoid weights in log t,
// so every axis carries sum(weights) = log(t_max / t_min). Multi-dimensional
// nodes are the tensor product (row-major, last axis fastest).
class TimeGrid {
 public:
  static constexpr double kDefaultMin = 1e-4;
  static constexpr double kDefaultMax = 40.0;
  static constexpr int kDefaultNodes = 200;

  explicit TimeGrid(int dim = 1, double t_min = kDefaultMin, double t_max = kDefaultMax,
                    int nodes_per_axis = kDefaultNodes);

  int dim() const noexcept { return dim_; }
  double t_min() const noexcept { return t_min_; }
  double t_max() const noexcept { return t_max_; }
  const std::vector<double>& axis_nodes() const noexcept { return nodes_; }
  const std::vector<double>& axis_weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return size_; }

  std::array<double, kMaxDim> point(std::size_t i) const;
  double weight(std::size_t i) const;

 private:
  int dim_;
  double t_min_;
  double t_max_;
  std::size_t size_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

// (sum_t w_t |v(t)|^2)^{1/2}
double hn_norm(std::span<const cplx> v, const TimeGrid& grid);

// Time profiles of the square functions this module knows.
//   g-function of orders k:  prod_j (t_j sqrt(lambda_j))^{k_j} (-1)^{k_j} e^{-t_j sqrt(lambda_j)},
//                            lambda_j = 2 l_j + 1, one time variable per axis;
//   fractional of order a:   t^a (d/dt)^a e^{-t mu},  mu = sqrt(2|l| + n), one time variable;
//   Triebel (beta, k):       t^{k-beta} (d/dt)^k e^{-t mu}, one time variable.
class SquareFunction {
 public:
  enum class Kind { GFunction, Fractional, Triebel };

  static SquareFunction g_function(const MultiIndex& orders);
  static SquareFunction fractional(const FractionalOrder& order);
  static SquareFunction triebel(double beta, int k);

  Kind kind() const noexcept { return kind_; }
  // Number of time variables for spatial dimension n.
  int time_dim(int spatial_dim) const;
  bool per_axis() const noexcept { return kind_ == Kind::GFunction; }

  // Per-axis factor for the g-function (axis j, time t, axis degree l).
  double axis_profile(int axis, double t, int degree) const;
  // Whole profile for the single-time kinds at eigenvalue 2|l| + n; it splits as
  // radial_frequency_factor(eigenvalue) * radial_time_factor(t, eigenvalue).
  cplx radial_profile(double t, double eigenvalue) const;
  cplx radial_frequency_factor(double eigenvalue) const;
  double radial_time_factor(double t, double eigenvalue) const;
  // Profile of coefficient index l at multi-time node t.
  cplx profile(const MultiIndex& l, std::span<const double> t) const;

  const MultiIndex& orders() const noexcept { return orders_; }

 private:
  SquareFunction() = default;
  Kind kind_ = Kind::GFunction;
  MultiIndex orders_;
  double alpha_ = 0.0;  // fractional order, or k - beta for Triebel
  int k_ = 0;
  int m_ = 0;  // fractional: ceiling order of the derivative
};

// Field G(t, x) at every spatial node and every time node, materialized.
struct GFieldSample {
  std::size_t time_nodes = 0;
  std::size_t space_nodes = 0;
  ValueSpace space = ValueSpace::real();
  // values[x * time_nodes + t]
  std::vector<Value> values;

  std::span<const Value> at_node(std::size_t x) const {
    return std::span<const Value>(values).subspan(x * time_nodes, time_nodes);
  }
};

inline constexpr std::size_t kFieldValueBudget = std::size_t{1} << 22;

// G_k(f)(t, x) = sum_l c_l prod_j t_j^{k_j} d^{k_j}/dt_j^{k_j} e^{-t_j sqrt(2 l_j + 1)} h_{l_j}(x_j).
GFieldSample g_field(const HermiteExpansion& e, const MultiIndex& orders, const TimeGrid& tgrid,
                     const SpatialGrid& sgrid);
GFieldSample square_field(const HermiteExpansion& e, const SquareFunction& sf, const TimeGrid& tgrid,
                          const SpatialGrid& sgrid);

struct GammaEstimate {
  double value = 0.0;
  double std_error = 0.0;
  bool exact = false;
};

inline constexpr int kMinDraws = 100;
inline constexpr int kDefaultDraws = 2000;

// gamma-norm of the finite-rank operator with images T(phi_j) = `images[j]`:
// (E || sum_j g_j T(phi_j) ||^2)^{1/2} with independent standard normals g_j.
// Monte Carlo over `draws` keyed draws; the error is the delta-method standard error.
GammaEstimate gamma_norm_images(std::span<const Value> images, const ValueSpace& space, int draws,
                                std::uint64_t seed, std::uint64_t item = 0);
// Hilbert-Schmidt value (sum_j ||T(phi_j)||_2^2)^{1/2}; the gamma-norm for scalar and l^2 targets.
double gamma_norm_exact(std::span<const Value> images);

// gamma-norm of a time-grid field v: T(phi_j) = sqrt(w_j) v(t_j) for the normalized node indicators.
GammaEstimate gamma_norm(std::span<const Value> field, const TimeGrid& grid, const ValueSpace& space, int draws,
                         std::uint64_t seed, std::uint64_t item = 0);
double gamma_norm_exact(std::span<const Value> field, const TimeGrid& grid);

struct SquareNorm {
  double value = 0.0;
  // Conservative standard error (0 when exact).
  double std_error = 0.0;
  bool exact = true;
  // gamma-norm of G(., x) at every spatial node.
  std::vector<double> pointwise;
};

struct MonteCarloConfig {
  int draws = kDefaultDraws;
  std::optional<std::uint64_t> seed;
  std::uint64_t item = 0;
};

// || x -> ||G(., x)||_gamma ||_{L^p}. Scalar and l^2 targets are exact; other l^q
// targets use Monte Carlo on the pointwise covariance of the Gaussian sum, which
// requires a seed.
SquareNorm square_function_norm(const HermiteExpansion& e, const SquareFunction& sf, double p,
                                const TimeGrid& tgrid, const SpatialGrid& sgrid,
                                const MonteCarloConfig& mc = {});
SquareNorm g_norm_field(const HermiteExpansion& e, const MultiIndex& orders, double p, const TimeGrid& tgrid,
                        const SpatialGrid& sgrid, const MonteCarloConfig& mc = {});

struct PolarizationResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};

// Compares int int <G_a(g), G_a(f)> dt/t dx with prod_j Gamma(2 a_j) / 2^{2 a_j} int <g, f> dx,
// using the bilinear pairing. `g` lives in the dual value space of `f`. For complex
// data lhs/rhs carry real parts; the residual uses the full complex difference.
PolarizationResult polarization_check(const HermiteExpansion& f, const HermiteExpansion& g,
                                      const MultiIndex& orders, const TimeGrid& tgrid, const SpatialGrid& sgrid);

struct RatioSummary {
  std::size_t count = 0;
  double min = 0.0;
  double max = 0.0;
  double q10 = 0.0;
  double median = 0.0;
  double q90 = 0.0;
  // Empirical constants (1/min, max).
  double lower_constant = 0.0;
  double upper_constant = 0.0;
};

RatioSummary summarize_ratios(std::span<const double> ratios);

struct EquivalenceItem {
  std::size_t id = 0;
  double p = 0.0;
  double square_norm = 0.0;
  double square_std_error = 0.0;
  double lp = 0.0;
  double ratio = 0.0;
};

struct EquivalenceReport {
  std::vector<EquivalenceItem> items;
  RatioSummary summary;
};

inline constexpr double kDegenerateNorm = 1e-12;

// ratio(f) = ||square function of f||_{L^p(gamma)} / ||f||_{L^p} for every corpus member.
// Members are spread over `threads` workers; item seeds are keyed by member id.
EquivalenceReport equivalence_experiment(std::span<const HermiteExpansion> corpus, const SquareFunction& sf,
                                         double p, const TimeGrid& tgrid, const SpatialGrid& sgrid,
                                         const MonteCarloConfig& mc = {}, int threads = 1);

}  // namespace hermite
