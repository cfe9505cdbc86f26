#pragma once

// Spectral multipliers T_m, imaginary powers, the Mellin-type transform of a
// symbol, the Meda-type integrability estimate, and the representation of the
// g-function of T_m f through imaginary powers.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hermite/core.hpp"
#include "hermite/littlewood_paley.hpp"

namespace hermite {

// m : (0, inf)^n -> C, evaluated on the lattice lambda_k = (2 k_1 + 1, ..., 2 k_n + 1).
// Symbols take complex arguments so that holomorphic ones (sector metadata psi)
// can be evaluated off the positive axis.
class MultiplierSymbol {
 public:
  using Evaluator = std::function<cplx(std::span<const cplx>)>;
  using AxisFactor = std::function<cplx(cplx)>;

  MultiplierSymbol(std::string name, int dim, Evaluator f);

  // m(z) = prod_j factors[j](z_j).
  static MultiplierSymbol separable(std::string name, std::vector<AxisFactor> factors);

  const std::string& name() const noexcept { return name_; }
  int dim() const noexcept { return dim_; }

  cplx operator()(std::span<const double> lambda) const;
  cplx evaluate(std::span<const cplx> z) const;

  // Holomorphic and bounded on |arg z_j| < psi (every axis).
  std::optional<double> sector() const noexcept { return sector_; }
  MultiplierSymbol& with_sector(double psi);
  // Real on the positive axis (gives conjugate symmetry of the Mellin transform).
  bool real_on_axis() const noexcept { return real_; }
  MultiplierSymbol& with_real_on_axis(bool real);

  bool is_separable() const noexcept { return !factors_.empty(); }
  const AxisFactor& factor(int axis) const;
  // The univariate symbol of one axis as a 1-D symbol (separable symbols only).
  MultiplierSymbol axis_symbol(int axis) const;

  // sup |m| over the lattice points with k_j <= cap; throws on non-finite values.
  double lattice_bound(int cap) const;

 private:
  std::string name_;
  int dim_;
  Evaluator f_;
  std::vector<AxisFactor> factors_;
  std::optional<double> sector_;
  bool real_ = true;
};

// c_k -> m(2k_1+1, ..., 2k_n+1) c_k
HermiteExpansion apply_multiplier(const HermiteExpansion& e, const MultiplierSymbol& m);
// c_k -> prod_j (2 k_j + 1)^{i beta_j} c_k
HermiteExpansion imaginary_power(const HermiteExpansion& e, std::span<const double> beta);

// ---- catalog ----------------------------------------------------------------

MultiplierSymbol identity_symbol(int dim);
MultiplierSymbol imaginary_power_symbol(std::span<const double> beta);
// prod_j (z_j / (z_j + 1))^{1/2}
MultiplierSymbol sector_rational_symbol(int dim);
// Symbol of the Riesz factorization for orders m and split j (see sobolev.hpp).
MultiplierSymbol riesz_symbol(const MultiIndex& orders, int split);
// (sum z + 2l)^{l/2} (sum z)^{l/2} / sum_j prod_{r=1}^{l} (z_j / 2 + r - 1/2)
MultiplierSymbol tau_inverse_symbol(int dim, int ell);

// Names understood by catalog_symbol: identity, imaginary-power, sector-rational,
// riesz, tau-inverse.
struct CatalogParams {
  std::vector<double> beta;      // imaginary-power
  MultiIndex orders;             // riesz
  int split = 0;                 // riesz
  int ell = 1;                   // tau-inverse
};
MultiplierSymbol catalog_symbol(const std::string& name, int dim, const CatalogParams& params = {});
std::vector<std::string> catalog_names();

// ---- Mellin transform -------------------------------------------------------

// Quadrature for  M_a(t, u) = int prod_j lambda_j^{-i u_j - 1} (t_j lambda_j)^{a_j}
//                               e^{-t_j lambda_j / 2} m(lambda_1^2, ..., lambda_n^2) d lambda
// in s_j = t_j lambda_j / 2 on a log scale. For symbols with sector metadata psi
// the contour is the ray arg lambda = -sign(u) theta, theta = min(psi/2, pi/2) - 0.3,
// which removes the cancellation that otherwise limits relative accuracy to
// about 1e-16 e^{pi |u| / 2}.
struct MellinOptions {
  int nodes = 2400;          // per axis, on the log scale
  double log_min = -36.0;    // lower end of log s
  double tail = 40.0;        // upper end: s cos(theta) = tail
  bool rotate = true;        // use the rotated ray when the symbol allows it
  bool force_generic = false;  // skip the separable factorization (testing)
};

struct MellinValue {
  cplx value;
  // |I_h - I_{2h}|: difference against the half-resolution rule.
  double error_estimate = 0.0;
  // Rounding floor: a few ulps of the sum of |terms|. Values near it carry no digits.
  double roundoff = 0.0;
};

MellinValue mellin_value(const MultiplierSymbol& m, const MultiIndex& alpha, std::span<const double> t,
                         std::span<const double> u, const MellinOptions& options = {});

struct MellinSample {
  MultiIndex alpha;
  std::vector<std::vector<double>> t_nodes;
  std::vector<std::vector<double>> u_nodes;
  // values[ti * u_nodes.size() + ui]
  std::vector<cplx> values;
  double max_error_estimate = 0.0;

  cplx at(std::size_t ti, std::size_t ui) const { return values[ti * u_nodes.size() + ui]; }
};

MellinSample mellin_transform(const MultiplierSymbol& m, const MultiIndex& alpha,
                              const std::vector<std::vector<double>>& t_nodes,
                              const std::vector<std::vector<double>>& u_nodes, const MellinOptions& options = {});

// ---- Meda-type condition ----------------------------------------------------

// Model of ||L^{iu/2}|| as a function of u: e^{omega sum |u_j|} or prod (1 + |u_j|)^power.
struct GrowthModel {
  enum class Kind { Exponential, Polynomial };
  Kind kind = Kind::Exponential;
  double omega = 1.0;
  double power = 0.0;

  static GrowthModel exponential(double omega);
  static GrowthModel polynomial(double power);
  double operator()(double u) const;  // one axis
};

struct MedaOptions {
  double cutoff = 40.0;          // U
  int ladder_points = 60;        // sup over t on a log ladder
  double ladder_min = 1e-3;
  double ladder_max = 1e2;
  double ladder_tolerance = 0.01;
  int max_refinements = 4;
  int u_panels = 20;             // per half line of [-U, U], 16 nodes each
  int max_windows = 8;           // tail windows [2^i U, 2^{i+1} U]
  MellinOptions mellin{};
};

struct MedaAxis {
  std::vector<double> u;
  std::vector<double> sup;        // sup_t |M_gamma(t, u)|
  std::vector<double> envelope;   // (1 + |u|) |Gamma(gamma - iu)|
  double truncated = 0.0;         // int_{-U}^{U} sup * growth
  double tail = 0.0;              // tail extrapolation from the envelope
  // Cutoff actually used: options.cutoff, or less where the sup reaches the rounding floor.
  double cutoff = 0.0;
  bool finite = true;
  int refinements = 0;
};

struct MedaResult {
  bool finite = true;
  double integral = 0.0;   // truncated + tail (product over axes)
  double truncated = 0.0;  // product of the truncated axis integrals
  std::vector<MedaAxis> axes;
};

// int sup_t |M_gamma(t, u)| growth(u) du over R^n, with the sup estimated on a
// refined t ladder and the tail |u| > U extrapolated from the envelope
// (1 + |u|) |Gamma(gamma - iu)|. Dimension 2 requires a separable symbol.
MedaResult meda_condition(const MultiplierSymbol& m, const MultiIndex& gamma, const GrowthModel& growth,
                          const MedaOptions& options = {});

// ---- representation through imaginary powers --------------------------------

struct RepresentationOptions {
  double cutoff = 40.0;  // u-integral on [-U, U]
  int u_panels = 24;     // composite 16-point panels over [-U, U]
  int t_probes = 20;
  int x_probes = 20;
  double t_min = 0.05;
  double t_max = 5.0;
  double x_max = 3.0;
  // Relative residual denominator: max(|lhs|, floor * max |lhs| over probes).
  double floor = 1e-6;
  MellinOptions mellin{};
};

struct RepresentationResult {
  double max_residual = 0.0;
  double max_lhs = 0.0;
  std::size_t probes = 0;
  double tail = 0.0;  // integrand size at |u| = U relative to its maximum
};

// Checks, on (t, x) probes,
//   G_{a+1}(T_m f)(t, x) = (-1)^{|a|} (2 pi)^{-n} int M_a(t, u) [prod_j t_j d_s P_s |_{s = t_j/2}] L^{iu/2} f(x) du,
// where G_{a+1} is the g-function of orders a_j + 1. Dimension <= 2 (2 needs a
// separable symbol), degree cap <= 6.
RepresentationResult imaginary_power_representation_check(const HermiteExpansion& e, const MultiplierSymbol& m,
                                                           const MultiIndex& alpha,
                                                           const RepresentationOptions& options = {});

}  // namespace hermite
