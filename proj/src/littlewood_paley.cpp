#include "hermite/littlewood_paley.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>

#include "hermite/parallel.hpp"
#include "hermite/random.hpp"

namespace hermite {

// ---- TimeGrid ---------------------------------------------------------------

TimeGrid::TimeGrid(int dim, double t_min, double t_max, int nodes_per_axis)
    : dim_(dim), t_min_(t_min), t_max_(t_max) {
  if (dim < 1 || dim > kMaxDim) throw ValidationError("TimeGrid: dimension must be in 1..3");
  if (!(t_min > 0.0) || !(t_max > t_min)) throw ValidationError("TimeGrid: need 0 < t_min < t_max");
  if (nodes_per_axis < 2) throw ValidationError("TimeGrid: need at least two nodes");
  const auto rule = quad::trapezoid(std::log(t_min), std::log(t_max), nodes_per_axis);
  nodes_.resize(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) nodes_[i] = std::exp(rule.nodes[i]);
  nodes_.front() = t_min;
  nodes_.back() = t_max;
  weights_ = rule.weights;
  size_ = 1;
  for (int j = 0; j < dim; ++j) size_ *= nodes_.size();
}

std::array<double, kMaxDim> TimeGrid::point(std::size_t i) const {
  std::array<double, kMaxDim> t{};
  const std::size_t n = nodes_.size();
  for (int j = dim_ - 1; j >= 0; --j) {
    t[static_cast<std::size_t>(j)] = nodes_[i % n];
    i /= n;
  }
  return t;
}

double TimeGrid::weight(std::size_t i) const {
  double w = 1.0;
  const std::size_t n = nodes_.size();
  for (int j = 0; j < dim_; ++j) {
    w *= weights_[i % n];
    i /= n;
  }
  return w;
}

double hn_norm(std::span<const cplx> v, const TimeGrid& grid) {
  if (v.size() != grid.size()) throw ValidationError("hn_norm: vector length does not match the time grid");
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += grid.weight(i) * std::norm(v[i]);
  return std::sqrt(s);
}

// ---- SquareFunction ---------------------------------------------------------

SquareFunction SquareFunction::g_function(const MultiIndex& orders) {
  for (int j = 0; j < orders.dim(); ++j)
    if (orders[j] < 1) throw ValidationError("g-function: every order must be >= 1");
  SquareFunction sf;
  sf.kind_ = Kind::GFunction;
  sf.orders_ = orders;
  return sf;
}

SquareFunction SquareFunction::fractional(const FractionalOrder& order) {
  SquareFunction sf;
  sf.kind_ = Kind::Fractional;
  sf.alpha_ = order.alpha;
  sf.m_ = order.m;
  return sf;
}

SquareFunction SquareFunction::triebel(double beta, int k) {
  if (!(beta > 0.0)) throw ValidationError("Triebel square function: beta must be positive");
  if (!(k > beta)) throw ValidationError("Triebel square function: need k > beta");
  SquareFunction sf;
  sf.kind_ = Kind::Triebel;
  sf.alpha_ = k - beta;
  sf.k_ = k;
  return sf;
}

int SquareFunction::time_dim(int spatial_dim) const {
  if (per_axis()) {
    if (orders_.dim() != spatial_dim) throw ValidationError("g-function: order count differs from the dimension");
    return spatial_dim;
  }
  return 1;
}

double SquareFunction::axis_profile(int axis, double t, int degree) const {
  const double mu = std::sqrt(2.0 * degree + 1.0);
  const int k = orders_[axis];
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  return sign * std::pow(t * mu, k) * std::exp(-t * mu);
}

cplx SquareFunction::radial_frequency_factor(double eigenvalue) const {
  const double mu = std::sqrt(eigenvalue);
  if (kind_ == Kind::Fractional) return fractional_frequency_factor(mu, FractionalOrder(alpha_));
  return std::pow(-mu, k_);
}

double SquareFunction::radial_time_factor(double t, double eigenvalue) const {
  return std::pow(t, alpha_) * std::exp(-t * std::sqrt(eigenvalue));
}

cplx SquareFunction::radial_profile(double t, double eigenvalue) const {
  return radial_frequency_factor(eigenvalue) * radial_time_factor(t, eigenvalue);
}

cplx SquareFunction::profile(const MultiIndex& l, std::span<const double> t) const {
  if (per_axis()) {
    double v = 1.0;
    for (int j = 0; j < l.dim(); ++j) v *= axis_profile(j, t[static_cast<std::size_t>(j)], l[j]);
    return v;
  }
  return radial_profile(t[0], l.eigenvalue());
}

// ---- assembled square functions ---------------------------------------------

namespace {

using Matrix = Eigen::MatrixXcd;

struct CoefficientList {
  std::vector<MultiIndex> index;
  std::vector<Value> value;
};

CoefficientList list_coefficients(const HermiteExpansion& e) {
  CoefficientList out;
  for (const auto& [k, c] : e.coeffs()) {
    out.index.push_back(k);
    out.value.push_back(c);
  }
  return out;
}

void check_time_grid(const SquareFunction& sf, const TimeGrid& tgrid, int spatial_dim) {
  if (tgrid.dim() != sf.time_dim(spatial_dim))
    throw ValidationError("square function: time grid dimension does not match the square function");
}

// Time Grams G_p(a, b) = sum_t w phi_a conj(phi_b) and G_q(a, b) = sum_t w phi_a phi_b
// over the coefficient list. Per-axis profiles factor over the tensor time grid.
std::pair<Matrix, Matrix> time_grams(const std::vector<MultiIndex>& index, const SquareFunction& sf,
                                     const TimeGrid& tgrid) {
  const std::size_t count = index.size();
  Matrix gp(count, count), gq(count, count);
  if (count == 0) return {gp, gq};
  const auto& nodes = tgrid.axis_nodes();
  const auto& weights = tgrid.axis_weights();
  if (sf.per_axis()) {
    const int dim = index.front().dim();
    int cap = 0;
    for (const auto& k : index) cap = std::max(cap, k.max_entry());
    std::vector<Eigen::MatrixXd> axis_gram;
    for (int j = 0; j < dim; ++j) {
      Eigen::MatrixXd prof(cap + 1, static_cast<Eigen::Index>(nodes.size()));
      for (int l = 0; l <= cap; ++l)
        for (std::size_t i = 0; i < nodes.size(); ++i)
          prof(l, static_cast<Eigen::Index>(i)) = sf.axis_profile(j, nodes[i], l);
      Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(weights.data(), static_cast<Eigen::Index>(weights.size()));
      axis_gram.push_back(prof * w.asDiagonal() * prof.transpose());
    }
    for (std::size_t a = 0; a < count; ++a)
      for (std::size_t b = 0; b < count; ++b) {
        double v = 1.0;
        for (int j = 0; j < dim; ++j) v *= axis_gram[static_cast<std::size_t>(j)](index[a][j], index[b][j]);
        gp(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = v;
      }
    gq = gp;
    return {gp, gq};
  }
  // Radial profiles depend on |l| only.
  std::map<int, Eigen::VectorXcd> by_order;
  for (const auto& k : index) {
    if (by_order.count(k.order())) continue;
    const double lambda = k.eigenvalue();
    const cplx factor = sf.radial_frequency_factor(lambda);
    Eigen::VectorXcd prof(static_cast<Eigen::Index>(nodes.size()));
    for (std::size_t i = 0; i < nodes.size(); ++i)
      prof(static_cast<Eigen::Index>(i)) = factor * sf.radial_time_factor(nodes[i], lambda) * std::sqrt(weights[i]);
    by_order.emplace(k.order(), std::move(prof));
  }
  for (std::size_t a = 0; a < count; ++a)
    for (std::size_t b = 0; b < count; ++b) {
      const auto& pa = by_order.at(index[a].order());
      const auto& pb = by_order.at(index[b].order());
      gp(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = (pa.array() * pb.conjugate().array()).sum();
      gq(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = (pa.array() * pb.array()).sum();
    }
  return {gp, gq};
}

// `scratch` is reused across draws to keep allocation out of the inner loop.
double squared_lq_norm(const Eigen::Ref<const Eigen::VectorXd>& z, int d, const ValueSpace& space, Value& scratch) {
  scratch.resize(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) scratch[static_cast<std::size_t>(i)] = cplx(z(i), z(d + i));
  const double n = space.norm(scratch);
  return n * n;
}

struct MeanAndError {
  double value;
  double std_error;
};

// sqrt(mean X) with the delta-method standard error sd(X) / (sqrt(N) 2 sqrt(mean)).
MeanAndError root_mean(const std::vector<double>& samples) {
  const double n = static_cast<double>(samples.size());
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= n;
  double var = 0.0;
  for (double x : samples) var += (x - mean) * (x - mean);
  var /= std::max(1.0, n - 1.0);
  if (mean <= 0.0) return {0.0, 0.0};
  const double root = std::sqrt(mean);
  return {root, std::sqrt(var / n) / (2.0 * root)};
}

}  // namespace

GFieldSample square_field(const HermiteExpansion& e, const SquareFunction& sf, const TimeGrid& tgrid,
                          const SpatialGrid& sgrid) {
  if (e.dim() != sgrid.dim()) throw ValidationError("square_field: dimension mismatch with the spatial grid");
  check_time_grid(sf, tgrid, e.dim());
  if (static_cast<double>(tgrid.size()) * static_cast<double>(sgrid.size()) > static_cast<double>(kFieldValueBudget))
    throw BudgetExceeded("square_field: materialized field exceeds the value budget");
  const auto list = list_coefficients(e);
  GFieldSample out;
  out.time_nodes = tgrid.size();
  out.space_nodes = sgrid.size();
  out.space = sf.per_axis() ? e.space() : e.space().complexified();
  out.values.assign(out.time_nodes * out.space_nodes, e.zero_value());
  if (list.index.empty()) return out;

  // profiles[a][t]
  std::vector<std::vector<cplx>> profiles(list.index.size(), std::vector<cplx>(tgrid.size()));
  std::map<int, cplx> factors;
  for (std::size_t a = 0; a < list.index.size(); ++a) {
    const auto& k = list.index[a];
    for (std::size_t t = 0; t < tgrid.size(); ++t) {
      const auto tp = tgrid.point(t);
      if (sf.per_axis()) {
        profiles[a][t] = sf.profile(k, std::span<const double>(tp.data(), static_cast<std::size_t>(tgrid.dim())));
      } else {
        auto it = factors.find(k.order());
        if (it == factors.end()) it = factors.emplace(k.order(), sf.radial_frequency_factor(k.eigenvalue())).first;
        profiles[a][t] = it->second * sf.radial_time_factor(tp[0], k.eigenvalue());
      }
    }
  }
  const HermiteTable table(sgrid, e.cap());
  const std::size_t width = static_cast<std::size_t>(e.space().components());
  for (std::size_t x = 0; x < sgrid.size(); ++x)
    for (std::size_t a = 0; a < list.index.size(); ++a) {
      const double h = table.eval(list.index[a], sgrid, x);
      for (std::size_t t = 0; t < tgrid.size(); ++t) {
        Value& v = out.values[x * out.time_nodes + t];
        const cplx s = h * profiles[a][t];
        for (std::size_t i = 0; i < width; ++i) v[i] += s * list.value[a][i];
      }
    }
  return out;
}

GFieldSample g_field(const HermiteExpansion& e, const MultiIndex& orders, const TimeGrid& tgrid,
                     const SpatialGrid& sgrid) {
  return square_field(e, SquareFunction::g_function(orders), tgrid, sgrid);
}

// ---- gamma-norms ------------------------------------------------------------

GammaEstimate gamma_norm_images(std::span<const Value> images, const ValueSpace& space, int draws,
                                std::uint64_t seed, std::uint64_t item) {
  if (draws < kMinDraws) throw ValidationError("gamma_norm: at least 100 draws are required");
  const std::size_t width = static_cast<std::size_t>(space.components());
  for (const auto& v : images) {
    if (v.size() != width) throw ValidationError("gamma_norm: image width does not match the value space");
    for (const auto& z : v)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw ValidationError("gamma_norm: non-finite field");
  }
  std::vector<double> samples(static_cast<std::size_t>(draws));
  Value sum(width);
  for (int r = 0; r < draws; ++r) {
    const auto g = keyed_normals(seed, item, static_cast<std::uint64_t>(r), images.size());
    std::fill(sum.begin(), sum.end(), cplx(0.0));
    for (std::size_t j = 0; j < images.size(); ++j)
      for (std::size_t i = 0; i < width; ++i) sum[i] += g[j] * images[j][i];
    const double n = space.norm(sum);
    samples[static_cast<std::size_t>(r)] = n * n;
  }
  const auto est = root_mean(samples);
  return {est.value, est.std_error, false};
}

double gamma_norm_exact(std::span<const Value> images) {
  double s = 0.0;
  for (const auto& v : images)
    for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

namespace {

std::vector<Value> weighted_images(std::span<const Value> field, const TimeGrid& grid) {
  if (field.size() != grid.size()) throw ValidationError("gamma_norm: field length does not match the time grid");
  std::vector<Value> images(field.begin(), field.end());
  for (std::size_t j = 0; j < images.size(); ++j) {
    const double s = std::sqrt(grid.weight(j));
    for (auto& z : images[j]) z *= s;
  }
  return images;
}

}  // namespace

GammaEstimate gamma_norm(std::span<const Value> field, const TimeGrid& grid, const ValueSpace& space, int draws,
                         std::uint64_t seed, std::uint64_t item) {
  const auto images = weighted_images(field, grid);
  return gamma_norm_images(images, space, draws, seed, item);
}

double gamma_norm_exact(std::span<const Value> field, const TimeGrid& grid) {
  const auto images = weighted_images(field, grid);
  return gamma_norm_exact(std::span<const Value>(images));
}

// ---- L^p norms of square functions ------------------------------------------

SquareNorm square_function_norm(const HermiteExpansion& e, const SquareFunction& sf, double p,
                                const TimeGrid& tgrid, const SpatialGrid& sgrid, const MonteCarloConfig& mc) {
  if (e.dim() != sgrid.dim()) throw ValidationError("square function: dimension mismatch with the spatial grid");
  check_time_grid(sf, tgrid, e.dim());
  if (!(p > 1.0) || !std::isfinite(p)) throw ValidationError("square function: p must lie in (1, inf)");
  const ValueSpace& space = e.space();
  const bool exact = space.is_hilbert();
  if (!exact) {
    if (!mc.seed) throw ValidationError("square function: a seed is required for Monte Carlo value spaces");
    if (mc.draws < kMinDraws) throw ValidationError("square function: at least 100 draws are required");
  }
  SquareNorm out;
  out.exact = exact;
  out.pointwise.assign(sgrid.size(), 0.0);
  const auto list = list_coefficients(e);
  if (list.index.empty()) return out;

  const auto [gp, gq] = time_grams(list.index, sf, tgrid);
  const int d = space.components();
  const auto count = static_cast<Eigen::Index>(list.index.size());
  Matrix coeffs(count, d);
  for (Eigen::Index a = 0; a < count; ++a)
    for (int i = 0; i < d; ++i) coeffs(a, i) = list.value[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)];

  Eigen::MatrixXd normals;
  if (!exact) {
    normals.resize(2 * d, mc.draws);
    for (int r = 0; r < mc.draws; ++r) {
      const auto g = keyed_normals(*mc.seed, mc.item, static_cast<std::uint64_t>(r), static_cast<std::size_t>(2 * d));
      for (int i = 0; i < 2 * d; ++i) normals(i, r) = g[static_cast<std::size_t>(i)];
    }
  }

  const HermiteTable table(sgrid, e.cap());
  std::vector<double> node_error(sgrid.size(), 0.0);
  Eigen::VectorXd h(count);
  std::vector<double> samples(exact ? 0 : static_cast<std::size_t>(mc.draws));
  Value scratch;
  for (std::size_t x = 0; x < sgrid.size(); ++x) {
    for (Eigen::Index a = 0; a < count; ++a) h(a) = table.eval(list.index[static_cast<std::size_t>(a)], sgrid, x);
    const Matrix v = h.asDiagonal() * coeffs;  // rows: coefficients, columns: components
    // P = E[Z conj(Z)^T], Q = E[Z Z^T] for the Gaussian sum Z at this node.
    const Matrix pmat = v.transpose() * gp * v.conjugate();
    if (exact) {
      out.pointwise[x] = std::sqrt(std::max(0.0, pmat.trace().real()));
      continue;
    }
    const Matrix qmat = v.transpose() * gq * v;
    Eigen::MatrixXd cov(2 * d, 2 * d);
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k) {
        const cplx pp = pmat(i, k), qq = qmat(i, k);
        cov(i, k) = 0.5 * (pp + qq).real();
        cov(d + i, d + k) = 0.5 * (pp - qq).real();
        cov(i, d + k) = 0.5 * (qq - pp).imag();
        cov(d + i, k) = 0.5 * (pp + qq).imag();
      }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (cov + cov.transpose()));
    const Eigen::VectorXd root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Eigen::MatrixXd factor = eig.eigenvectors() * root.asDiagonal();
    const Eigen::MatrixXd z = factor * normals;
    for (int r = 0; r < mc.draws; ++r) samples[static_cast<std::size_t>(r)] = squared_lq_norm(z.col(r), d, space, scratch);
    const auto est = root_mean(samples);
    out.pointwise[x] = est.value;
    node_error[x] = est.std_error;
  }
  out.value = lp_norm_scalar(out.pointwise, p, sgrid);
  if (!exact && out.value > 0.0) {
    // d||g||_p / d g(x) = w g(x)^{p-1} / ||g||_p^{p-1}; errors added in absolute value.
    double err = 0.0;
    for (std::size_t x = 0; x < sgrid.size(); ++x)
      err += sgrid.weight(x) * std::pow(out.pointwise[x] / out.value, p - 1.0) * node_error[x];
    out.std_error = err;
  }
  return out;
}

SquareNorm g_norm_field(const HermiteExpansion& e, const MultiIndex& orders, double p, const TimeGrid& tgrid,
                        const SpatialGrid& sgrid, const MonteCarloConfig& mc) {
  return square_function_norm(e, SquareFunction::g_function(orders), p, tgrid, sgrid, mc);
}

// ---- polarization -----------------------------------------------------------

PolarizationResult polarization_check(const HermiteExpansion& f, const HermiteExpansion& g,
                                      const MultiIndex& orders, const TimeGrid& tgrid, const SpatialGrid& sgrid) {
  if (f.dim() != g.dim() || f.dim() != sgrid.dim() || orders.dim() != f.dim())
    throw ValidationError("polarization: dimension mismatch");
  if (f.space().components() != g.space().components())
    throw ValidationError("polarization: value spaces have different widths");
  if (!f.space().is_scalar() && !(g.space() == f.space().dual()))
    throw ValidationError("polarization: g must take values in the dual of f's value space");
  const auto sf = SquareFunction::g_function(orders);
  check_time_grid(sf, tgrid, f.dim());

  const auto lf = list_coefficients(f);
  const auto lg = list_coefficients(g);
  std::vector<MultiIndex> all = lg.index;
  all.insert(all.end(), lf.index.begin(), lf.index.end());
  const auto [gp, gq] = time_grams(all, sf, tgrid);

  // Spatial Gram S(a, b) = sum_x w h_a(x) h_b(x), factored per axis.
  const int cap = std::max(f.cap(), g.cap());
  const HermiteTable table(sgrid, cap);
  const auto& w = sgrid.axis_weights();
  std::vector<std::vector<double>> s1(static_cast<std::size_t>(cap + 1), std::vector<double>(static_cast<std::size_t>(cap + 1)));
  for (int a = 0; a <= cap; ++a)
    for (int b = 0; b <= cap; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * table(a, i) * table(b, i);
      s1[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = s;
    }

  cplx lhs = 0.0, pairing = 0.0;
  const std::size_t ng = lg.index.size();
  for (std::size_t b = 0; b < ng; ++b)
    for (std::size_t a = 0; a < lf.index.size(); ++a) {
      double spatial = 1.0;
      for (int j = 0; j < f.dim(); ++j)
        spatial *= s1[static_cast<std::size_t>(lg.index[b][j])][static_cast<std::size_t>(lf.index[a][j])];
      cplx dot = 0.0;
      for (std::size_t i = 0; i < lf.value[a].size(); ++i) dot += lg.value[b][i] * lf.value[a][i];
      lhs += dot * spatial * gq(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(ng + a));
      pairing += dot * spatial;
    }
  double constant = 1.0;
  for (int j = 0; j < orders.dim(); ++j) constant *= std::tgamma(2.0 * orders[j]) / std::ldexp(1.0, 2 * orders[j]);
  const cplx rhs = constant * pairing;
  PolarizationResult r;
  r.lhs = lhs.real();
  r.rhs = rhs.real();
  r.residual = std::abs(lhs - rhs) / (std::abs(rhs) + 1e-30);
  return r;
}

// ---- experiments ------------------------------------------------------------

RatioSummary summarize_ratios(std::span<const double> ratios) {
  RatioSummary s;
  s.count = ratios.size();
  if (ratios.empty()) return s;
  std::vector<double> sorted(ratios.begin(), ratios.end());
  std::sort(sorted.begin(), sorted.end());
  auto quantile = [&sorted](double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
  };
  s.min = sorted.front();
  s.max = sorted.back();
  s.q10 = quantile(0.1);
  s.median = quantile(0.5);
  s.q90 = quantile(0.9);
  s.lower_constant = s.min > 0.0 ? 1.0 / s.min : INFINITY;
  s.upper_constant = s.max;
  return s;
}

EquivalenceReport equivalence_experiment(std::span<const HermiteExpansion> corpus, const SquareFunction& sf,
                                         double p, const TimeGrid& tgrid, const SpatialGrid& sgrid,
                                         const MonteCarloConfig& mc, int threads) {
  if (corpus.empty()) throw ValidationError("equivalence_experiment: empty corpus");
  EquivalenceReport report;
  report.items.resize(corpus.size());
  parallel_for(corpus.size(), threads, [&](std::size_t id) {
    const auto& f = corpus[id];
    const double lp = lp_norm(f, p, sgrid);
    if (!(lp >= kDegenerateNorm))
      throw ValidationError("equivalence_experiment: corpus member " + std::to_string(id) + " has zero norm");
    MonteCarloConfig item_mc = mc;
    item_mc.item = mc.item + id;
    const auto sq = square_function_norm(f, sf, p, tgrid, sgrid, item_mc);
    report.items[id] = EquivalenceItem{id, p, sq.value, sq.std_error, lp, sq.value / lp};
  });
  std::vector<double> ratios;
  for (const auto& item : report.items) ratios.push_back(item.ratio);
  report.summary = summarize_ratios(ratios);
  return report;
}

}  // namespace hermite
