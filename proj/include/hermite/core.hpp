#pragma once

// Hermite functions, coefficient tables and spatial quadrature.
//
// h_m(u) = (2^m m! sqrt(pi))^{-1/2} P_m(u) e^{-u^2/2}, h_k(x) = prod_j h_{k_j}(x_j).
// {h_k} is an orthonormal basis of L^2(R^n) and h_k is an eigenfunction of
// H = -Laplacian + |x|^2 with eigenvalue 2|k| + n.

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <map>
#include <span>
#include <vector>

#include "hermite/error.hpp"

namespace hermite {

using cplx = std::complex<double>;

inline constexpr int kMaxDim = 3;

class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(int dim);
  MultiIndex(std::initializer_list<int> entries);
  static MultiIndex from(std::span<const int> entries);
  // Unit vector e_axis scaled by `value`.
  static MultiIndex unit(int dim, int axis, int value = 1);

  int dim() const noexcept { return dim_; }
  int operator[](int axis) const { return k_[static_cast<std::size_t>(axis)]; }
  int& operator[](int axis) { return k_[static_cast<std::size_t>(axis)]; }

  // |k| = k_1 + ... + k_n
  int order() const noexcept;
  int max_entry() const noexcept;
  // 2|k| + n
  double eigenvalue() const noexcept { return 2.0 * order() + dim_; }

  auto operator<=>(const MultiIndex&) const = default;

 private:
  std::array<int, kMaxDim> k_{};
  int dim_ = 0;
};

// Codomain of coefficients: a scalar field or a finite-dimensional l^q_d.
// Values are stored uniformly as complex component vectors (length 1 for scalars).
class ValueSpace {
 public:
  enum class Kind { Real, Complex, Lq };

  static ValueSpace real() { return ValueSpace(Kind::Real, 2.0, 1); }
  static ValueSpace complex() { return ValueSpace(Kind::Complex, 2.0, 1); }
  static ValueSpace lq(double q, int d);

  Kind kind() const noexcept { return kind_; }
  double q() const noexcept { return q_; }
  int components() const noexcept { return d_; }
  bool is_scalar() const noexcept { return kind_ != Kind::Lq; }
  // Scalars and l^2_d: gamma-norms reduce to Hilbert-Schmidt norms.
  bool is_hilbert() const noexcept { return is_scalar() || q_ == 2.0; }

  double norm(std::span<const cplx> value) const;
  // l^{q'}_d for l^q_d; scalars are self-dual.
  ValueSpace dual() const;
  // Real scalars become complex; other kinds are unchanged.
  ValueSpace complexified() const;

  bool operator==(const ValueSpace&) const = default;

 private:
  ValueSpace(Kind kind, double q, int d) : kind_(kind), q_(q), d_(d) {}
  Kind kind_;
  double q_;
  int d_;
};

using Value = std::vector<cplx>;

// Finite table of Hermite coefficients c_k, k_j <= cap, valued in a ValueSpace.
// Absent indices are zero.
class HermiteExpansion {
 public:
  using Table = std::map<MultiIndex, Value>;

  static constexpr double kPruneTolerance = 1e-14;

  HermiteExpansion(int dim, int cap, ValueSpace space = ValueSpace::real());

  int dim() const noexcept { return dim_; }
  int cap() const noexcept { return cap_; }
  const ValueSpace& space() const noexcept { return space_; }
  const Table& coeffs() const noexcept { return coeffs_; }
  std::size_t size() const noexcept { return coeffs_.size(); }
  bool empty() const noexcept { return coeffs_.empty(); }

  Value zero_value() const { return Value(static_cast<std::size_t>(space_.components())); }
  Value at(const MultiIndex& k) const;

  // Stores c_k; throws if k is outside the cap or the value has the wrong width.
  void set(const MultiIndex& k, Value value);
  void set(const MultiIndex& k, cplx scalar);
  // c_k += scale * value, growing the cap if k exceeds it.
  void accumulate(const MultiIndex& k, const Value& value, cplx scale = 1.0);

  void grow_cap(int cap);
  void set_space(ValueSpace space);
  // Drops coefficients whose components are all below `tol` in modulus.
  void prune(double tol = kPruneTolerance);

  // c_k -> factor(k) * c_k. Complex factors promote a real space to complex.
  HermiteExpansion map_diagonal(const std::function<cplx(const MultiIndex&)>& factor,
                                bool complex_factor = true) const;

  // sqrt(sum_k sum_i |c_{k,i}|^2); the L^2 norm for scalar and l^2 values.
  double coefficient_norm() const;
  int max_order() const;

  HermiteExpansion scaled(cplx s) const;
  HermiteExpansion operator+(const HermiteExpansion& other) const;
  HermiteExpansion operator-(const HermiteExpansion& other) const;

 private:
  void check_index(const MultiIndex& k) const;

  int dim_;
  int cap_;
  ValueSpace space_;
  Table coeffs_;
};

// Largest coefficient-wise difference max_k max_i |a_{k,i} - b_{k,i}|.
double max_coefficient_difference(const HermiteExpansion& a, const HermiteExpansion& b);

// ---- Hermite function evaluation --------------------------------------------

// h_m(u) via the normalized three-term recurrence seeded at h_0 = pi^{-1/4} e^{-u^2/2}.
double eval_hermite(int m, double u);
// h_0(u), ..., h_{max_degree}(u).
std::vector<double> eval_hermite_all(int max_degree, double u);
double eval_hermite_multi(const MultiIndex& k, std::span<const double> x);

// ---- Spatial quadrature -----------------------------------------------------

// Tensor grid on [-L, L]^n with the same composite Gauss-Legendre rule on every axis.
class SpatialGrid {
 public:
  static constexpr int kPanelOrder = 16;

  SpatialGrid(int dim, double halfwidth, int nodes_per_axis, int design_cap);

  int dim() const noexcept { return dim_; }
  double halfwidth() const noexcept { return halfwidth_; }
  int design_cap() const noexcept { return design_cap_; }
  std::size_t nodes_per_axis() const noexcept { return nodes_.size(); }
  std::size_t size() const noexcept { return size_; }

  const std::vector<double>& axis_nodes() const noexcept { return nodes_; }
  const std::vector<double>& axis_weights() const noexcept { return weights_; }

  // Multi-dimensional node i (row-major, last axis fastest).
  std::array<double, kMaxDim> point(std::size_t i) const;
  std::array<std::size_t, kMaxDim> axis_indices(std::size_t i) const;
  double weight(std::size_t i) const;

 private:
  int dim_;
  double halfwidth_;
  int design_cap_;
  std::size_t size_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

// Default budget on total grid nodes.
inline constexpr std::size_t kGridNodeBudget = std::size_t{1} << 22;

// L = sqrt(2M+1) + 4; nodes_per_axis is rounded up to a multiple of the panel order.
SpatialGrid default_grid(int dim, int cap, int nodes_per_axis,
                         std::size_t node_budget = kGridNodeBudget);
// The configured defaults: 400 nodes per axis for n = 1, 128 for n = 2, 64 for n = 3.
SpatialGrid default_grid(int dim, int cap);

// Table h_m(x_i) for every axis node x_i and m <= max_degree, stored [m][i].
class HermiteTable {
 public:
  HermiteTable(const SpatialGrid& grid, int max_degree);
  int max_degree() const noexcept { return max_degree_; }
  double operator()(int m, std::size_t axis_node) const {
    return data_[static_cast<std::size_t>(m) * stride_ + axis_node];
  }
  // h_k at multi-dimensional grid node i.
  double eval(const MultiIndex& k, const SpatialGrid& grid, std::size_t i) const;

 private:
  int max_degree_;
  std::size_t stride_;
  std::vector<double> data_;
};

// Samples of a ValueSpace-valued function at every grid node.
using GridSamples = std::vector<Value>;

using PointFunction = std::function<Value(std::span<const double>)>;

GridSamples sample(const PointFunction& f, const SpatialGrid& grid);

// c_k = sum_nodes w h_k(x) f(x), k_j <= cap, componentwise; tiny coefficients pruned.
HermiteExpansion analyze(const GridSamples& samples, const SpatialGrid& grid, int cap,
                         ValueSpace space);
HermiteExpansion analyze(const PointFunction& f, int dim, int cap, const SpatialGrid& grid,
                         ValueSpace space = ValueSpace::real());

Value synthesize(const HermiteExpansion& e, std::span<const double> x);
GridSamples synthesize_on_grid(const HermiteExpansion& e, const SpatialGrid& grid);

// (sum_nodes w ||f(x)||^p)^{1/p} with the norm of `space`.
double lp_norm(const GridSamples& samples, double p, const SpatialGrid& grid,
               const ValueSpace& space);
double lp_norm(const HermiteExpansion& e, double p, const SpatialGrid& grid);

// Pointwise norms ||f(x_i)|| for a sample table.
std::vector<double> pointwise_norms(const GridSamples& samples, const ValueSpace& space);
// (sum_nodes w |g|^p)^{1/p} for non-negative scalar node data.
double lp_norm_scalar(std::span<const double> values, double p, const SpatialGrid& grid);

}  // namespace hermite
