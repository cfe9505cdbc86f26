#include "hermite/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hermite/quadrature.hpp"

namespace hermite {

// ---- MultiIndex -------------------------------------------------------------

MultiIndex::MultiIndex(int dim) : dim_(dim) {
  if (dim < 1 || dim > kMaxDim) throw ValidationError("MultiIndex: dimension must be in 1..3");
}

MultiIndex::MultiIndex(std::initializer_list<int> entries)
    : MultiIndex(static_cast<int>(entries.size())) {
  int j = 0;
  for (int v : entries) {
    if (v < 0) throw ValidationError("MultiIndex: negative entry");
    k_[static_cast<std::size_t>(j++)] = v;
  }
}

MultiIndex MultiIndex::from(std::span<const int> entries) {
  MultiIndex k(static_cast<int>(entries.size()));
  for (std::size_t j = 0; j < entries.size(); ++j) {
    if (entries[j] < 0) throw ValidationError("MultiIndex: negative entry");
    k.k_[j] = entries[j];
  }
  return k;
}

MultiIndex MultiIndex::unit(int dim, int axis, int value) {
  MultiIndex k(dim);
  if (axis < 0 || axis >= dim) throw ValidationError("MultiIndex::unit: axis out of range");
  k[axis] = value;
  return k;
}

int MultiIndex::order() const noexcept {
  int s = 0;
  for (int j = 0; j < dim_; ++j) s += k_[static_cast<std::size_t>(j)];
  return s;
}

int MultiIndex::max_entry() const noexcept {
  int s = 0;
  for (int j = 0; j < dim_; ++j) s = std::max(s, k_[static_cast<std::size_t>(j)]);
  return s;
}

// ---- ValueSpace -------------------------------------------------------------

ValueSpace ValueSpace::lq(double q, int d) {
  if (!(q >= 1.0) || !std::isfinite(q)) throw ValidationError("ValueSpace: q must be >= 1");
  if (d < 1) throw ValidationError("ValueSpace: d must be positive");
  return ValueSpace(Kind::Lq, q, d);
}

double ValueSpace::norm(std::span<const cplx> value) const {
  if (static_cast<int>(value.size()) != d_) throw ValidationError("ValueSpace::norm: width mismatch");
  if (is_scalar()) return std::abs(value[0]);
  if (q_ == 2.0) {
    double s = 0.0;
    for (const auto& z : value) s += std::norm(z);
    return std::sqrt(s);
  }
  // Scale by the largest modulus to keep |z|^q representable.
  double big = 0.0;
  for (const auto& z : value) big = std::max(big, std::abs(z));
  if (big == 0.0) return 0.0;
  double s = 0.0;
  for (const auto& z : value) s += std::pow(std::abs(z) / big, q_);
  return big * std::pow(s, 1.0 / q_);
}

ValueSpace ValueSpace::dual() const {
  if (is_scalar()) return *this;
  if (q_ == 1.0) throw ValidationError("ValueSpace::dual: l^1 dual (l^inf) not representable");
  return lq(q_ / (q_ - 1.0), d_);
}

ValueSpace ValueSpace::complexified() const { return kind_ == Kind::Real ? complex() : *this; }

// ---- HermiteExpansion -------------------------------------------------------

HermiteExpansion::HermiteExpansion(int dim, int cap, ValueSpace space)
    : dim_(dim), cap_(cap), space_(space) {
  if (dim < 1 || dim > kMaxDim) throw ValidationError("HermiteExpansion: dimension must be in 1..3");
  if (cap < 0) throw ValidationError("HermiteExpansion: negative degree cap");
}

void HermiteExpansion::check_index(const MultiIndex& k) const {
  if (k.dim() != dim_) throw ValidationError("HermiteExpansion: index dimension mismatch");
  if (k.max_entry() > cap_) throw ValidationError("HermiteExpansion: index exceeds degree cap");
}

Value HermiteExpansion::at(const MultiIndex& k) const {
  if (k.dim() != dim_) throw ValidationError("HermiteExpansion: index dimension mismatch");
  auto it = coeffs_.find(k);
  return it == coeffs_.end() ? zero_value() : it->second;
}

void HermiteExpansion::set(const MultiIndex& k, Value value) {
  check_index(k);
  if (static_cast<int>(value.size()) != space_.components())
    throw ValidationError("HermiteExpansion: value width does not match the value space");
  for (const auto& z : value)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw ValidationError("HermiteExpansion: non-finite coefficient");
  coeffs_[k] = std::move(value);
}

void HermiteExpansion::set(const MultiIndex& k, cplx scalar) {
  if (space_.components() != 1) throw ValidationError("HermiteExpansion: scalar set on vector space");
  set(k, Value{scalar});
}

void HermiteExpansion::accumulate(const MultiIndex& k, const Value& value, cplx scale) {
  if (k.dim() != dim_) throw ValidationError("HermiteExpansion: index dimension mismatch");
  if (static_cast<int>(value.size()) != space_.components())
    throw ValidationError("HermiteExpansion: value width does not match the value space");
  if (k.max_entry() > cap_) cap_ = k.max_entry();
  auto [it, inserted] = coeffs_.try_emplace(k, zero_value());
  for (std::size_t i = 0; i < value.size(); ++i) it->second[i] += scale * value[i];
}

void HermiteExpansion::grow_cap(int cap) { cap_ = std::max(cap_, cap); }

void HermiteExpansion::set_space(ValueSpace space) {
  if (space.components() != space_.components())
    throw ValidationError("HermiteExpansion: value space width change");
  space_ = space;
}

void HermiteExpansion::prune(double tol) {
  std::erase_if(coeffs_, [tol](const auto& entry) {
    return std::all_of(entry.second.begin(), entry.second.end(),
                       [tol](const cplx& z) { return std::abs(z) < tol; });
  });
}

HermiteExpansion HermiteExpansion::map_diagonal(const std::function<cplx(const MultiIndex&)>& factor,
                                                bool complex_factor) const {
  HermiteExpansion out(dim_, cap_, complex_factor ? space_.complexified() : space_);
  for (const auto& [k, c] : coeffs_) {
    const cplx f = factor(k);
    if (!std::isfinite(f.real()) || !std::isfinite(f.imag()))
      throw ValidationError("diagonal multiplier is not finite at a lattice point");
    Value v(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) v[i] = f * c[i];
    out.coeffs_.emplace(k, std::move(v));
  }
  return out;
}

double HermiteExpansion::coefficient_norm() const {
  double s = 0.0;
  for (const auto& [k, c] : coeffs_)
    for (const auto& z : c) s += std::norm(z);
  return std::sqrt(s);
}

int HermiteExpansion::max_order() const {
  int m = 0;
  for (const auto& [k, c] : coeffs_) m = std::max(m, k.order());
  return m;
}

HermiteExpansion HermiteExpansion::scaled(cplx s) const {
  return map_diagonal([s](const MultiIndex&) { return s; }, s.imag() != 0.0);
}

HermiteExpansion HermiteExpansion::operator+(const HermiteExpansion& other) const {
  if (other.dim_ != dim_ || other.space_.components() != space_.components())
    throw ValidationError("HermiteExpansion: incompatible operands");
  HermiteExpansion out = *this;
  if (other.space_.kind() == ValueSpace::Kind::Complex) out.space_ = space_.complexified();
  for (const auto& [k, c] : other.coeffs_) out.accumulate(k, c);
  return out;
}

HermiteExpansion HermiteExpansion::operator-(const HermiteExpansion& other) const {
  return *this + other.scaled(-1.0);
}

double max_coefficient_difference(const HermiteExpansion& a, const HermiteExpansion& b) {
  double worst = 0.0;
  auto scan = [&worst](const HermiteExpansion& x, const HermiteExpansion& y) {
    for (const auto& [k, c] : x.coeffs()) {
      const Value other = y.at(k);
      for (std::size_t i = 0; i < c.size(); ++i) worst = std::max(worst, std::abs(c[i] - other[i]));
    }
  };
  scan(a, b);
  scan(b, a);
  return worst;
}

// ---- Hermite functions ------------------------------------------------------

namespace {

// Runs the normalized recurrence on pi^{-1/4} without the Gaussian factor and
// rescales to avoid overflow; out[m] receives h_m(u).
void hermite_recurrence(int max_degree, double u, std::vector<double>& out) {
  out.assign(static_cast<std::size_t>(max_degree) + 1, 0.0);
  const double gauss_log = -0.5 * u * u;
  double log_scale = 0.0;
  double prev = 0.0;
  double cur = std::pow(std::numbers::pi, -0.25);
  out[0] = cur * std::exp(gauss_log);
  for (int m = 0; m < max_degree; ++m) {
    const double next = u * std::sqrt(2.0 / (m + 1)) * cur - std::sqrt(static_cast<double>(m) / (m + 1)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > 1e100) {
      prev *= 1e-100;
      cur *= 1e-100;
      log_scale += 100.0 * std::numbers::ln10;
    }
    out[static_cast<std::size_t>(m) + 1] = cur * std::exp(log_scale + gauss_log);
  }
}

}  // namespace

double eval_hermite(int m, double u) {
  if (m < 0) throw ValidationError("eval_hermite: negative degree");
  std::vector<double> values;
  hermite_recurrence(m, u, values);
  return values.back();
}

std::vector<double> eval_hermite_all(int max_degree, double u) {
  if (max_degree < 0) throw ValidationError("eval_hermite_all: negative degree");
  std::vector<double> values;
  hermite_recurrence(max_degree, u, values);
  return values;
}

double eval_hermite_multi(const MultiIndex& k, std::span<const double> x) {
  if (static_cast<int>(x.size()) != k.dim()) throw ValidationError("eval_hermite_multi: dimension mismatch");
  double v = 1.0;
  for (int j = 0; j < k.dim(); ++j) v *= eval_hermite(k[j], x[static_cast<std::size_t>(j)]);
  return v;
}

// ---- SpatialGrid ------------------------------------------------------------

SpatialGrid::SpatialGrid(int dim, double halfwidth, int nodes_per_axis, int design_cap)
    : dim_(dim), halfwidth_(halfwidth), design_cap_(design_cap) {
  if (dim < 1 || dim > kMaxDim) throw ValidationError("SpatialGrid: dimension must be in 1..3");
  if (!(halfwidth > 0.0)) throw ValidationError("SpatialGrid: halfwidth must be positive");
  if (nodes_per_axis < kPanelOrder) throw ValidationError("SpatialGrid: too few nodes");
  const int panels = (nodes_per_axis + kPanelOrder - 1) / kPanelOrder;
  auto rule = quad::composite_gauss_legendre(-halfwidth, halfwidth, panels);
  nodes_ = std::move(rule.nodes);
  weights_ = std::move(rule.weights);
  size_ = 1;
  for (int j = 0; j < dim; ++j) size_ *= nodes_.size();
}

std::array<std::size_t, kMaxDim> SpatialGrid::axis_indices(std::size_t i) const {
  std::array<std::size_t, kMaxDim> idx{};
  const std::size_t n = nodes_.size();
  for (int j = dim_ - 1; j >= 0; --j) {
    idx[static_cast<std::size_t>(j)] = i % n;
    i /= n;
  }
  return idx;
}

std::array<double, kMaxDim> SpatialGrid::point(std::size_t i) const {
  std::array<double, kMaxDim> x{};
  const auto idx = axis_indices(i);
  for (int j = 0; j < dim_; ++j) x[static_cast<std::size_t>(j)] = nodes_[idx[static_cast<std::size_t>(j)]];
  return x;
}

double SpatialGrid::weight(std::size_t i) const {
  const auto idx = axis_indices(i);
  double w = 1.0;
  for (int j = 0; j < dim_; ++j) w *= weights_[idx[static_cast<std::size_t>(j)]];
  return w;
}

SpatialGrid default_grid(int dim, int cap, int nodes_per_axis, std::size_t node_budget) {
  if (dim < 1 || dim > kMaxDim) throw ValidationError("default_grid: dimension must be in 1..3");
  if (cap < 0) throw ValidationError("default_grid: negative cap");
  if (nodes_per_axis < 64) throw ValidationError("default_grid: nodes_per_axis must be >= 64");
  double total = 1.0;
  for (int j = 0; j < dim; ++j) total *= nodes_per_axis;
  if (total > static_cast<double>(node_budget))
    throw BudgetExceeded("default_grid: " + std::to_string(static_cast<long long>(total)) +
                         " nodes exceed the budget of " + std::to_string(node_budget));
  const double halfwidth = std::sqrt(2.0 * cap + 1.0) + 4.0;
  return SpatialGrid(dim, halfwidth, nodes_per_axis, cap);
}

SpatialGrid default_grid(int dim, int cap) {
  const int nodes = dim == 1 ? 400 : dim == 2 ? 128 : 64;
  return default_grid(dim, cap, nodes);
}

// ---- HermiteTable -----------------------------------------------------------

HermiteTable::HermiteTable(const SpatialGrid& grid, int max_degree)
    : max_degree_(max_degree), stride_(grid.nodes_per_axis()) {
  data_.resize(static_cast<std::size_t>(max_degree + 1) * stride_);
  std::vector<double> values;
  for (std::size_t i = 0; i < stride_; ++i) {
    hermite_recurrence(max_degree, grid.axis_nodes()[i], values);
    for (int m = 0; m <= max_degree; ++m) data_[static_cast<std::size_t>(m) * stride_ + i] = values[static_cast<std::size_t>(m)];
  }
}

double HermiteTable::eval(const MultiIndex& k, const SpatialGrid& grid, std::size_t i) const {
  const auto idx = grid.axis_indices(i);
  double v = 1.0;
  for (int j = 0; j < k.dim(); ++j) v *= (*this)(k[j], idx[static_cast<std::size_t>(j)]);
  return v;
}

// ---- analysis / synthesis ---------------------------------------------------

GridSamples sample(const PointFunction& f, const SpatialGrid& grid) {
  GridSamples out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto x = grid.point(i);
    out[i] = f(std::span<const double>(x.data(), static_cast<std::size_t>(grid.dim())));
  }
  return out;
}

namespace {

// Every multi-index with entries <= cap in dimension `dim`, lexicographic.
std::vector<MultiIndex> box_indices(int dim, int cap) {
  std::vector<MultiIndex> out;
  MultiIndex k(dim);
  while (true) {
    out.push_back(k);
    int j = dim - 1;
    while (j >= 0 && k[j] == cap) k[j--] = 0;
    if (j < 0) break;
    ++k[j];
  }
  return out;
}

}  // namespace

HermiteExpansion analyze(const GridSamples& samples, const SpatialGrid& grid, int cap, ValueSpace space) {
  if (samples.size() != grid.size()) throw ValidationError("analyze: sample count does not match the grid");
  if (cap > grid.design_cap()) throw ValidationError("analyze: degree cap exceeds the grid's design cap");
  const std::size_t width = static_cast<std::size_t>(space.components());
  for (const auto& v : samples) {
    if (v.size() != width) throw ValidationError("analyze: sample width does not match the value space");
    for (const auto& z : v)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw ValidationError("analyze: non-finite sample value");
  }
  const int dim = grid.dim();
  const HermiteTable table(grid, cap);
  const std::size_t n = grid.nodes_per_axis();
  HermiteExpansion out(dim, cap, space);

  // Contract one axis at a time: partial[k_1..k_j, i_{j+1}..i_n].
  std::vector<cplx> cur(grid.size() * width);
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t c = 0; c < width; ++c) cur[i * width + c] = samples[i][c] * grid.weight(i);

  const std::size_t m = static_cast<std::size_t>(cap) + 1;
  std::size_t outer = 1;  // number of (k_1..k_{j-1}) combos
  std::size_t inner = grid.size() / n;
  for (int axis = 0; axis < dim; ++axis) {
    std::vector<cplx> next(outer * m * inner * width, 0.0);
    for (std::size_t o = 0; o < outer; ++o)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < m; ++k) {
          const double h = table(static_cast<int>(k), i);
          const cplx* src = &cur[((o * n + i) * inner) * width];
          cplx* dst = &next[((o * m + k) * inner) * width];
          for (std::size_t r = 0; r < inner * width; ++r) dst[r] += h * src[r];
        }
    cur = std::move(next);
    outer *= m;
    if (axis + 1 < dim) inner /= n;
  }
  const auto indices = box_indices(dim, cap);
  for (std::size_t t = 0; t < indices.size(); ++t) {
    Value v(width);
    bool nonzero = false;
    for (std::size_t c = 0; c < width; ++c) {
      v[c] = cur[t * width + c];
      if (std::abs(v[c]) >= HermiteExpansion::kPruneTolerance) nonzero = true;
    }
    if (nonzero) out.set(indices[t], std::move(v));
  }
  return out;
}

HermiteExpansion analyze(const PointFunction& f, int dim, int cap, const SpatialGrid& grid, ValueSpace space) {
  if (dim != grid.dim()) throw ValidationError("analyze: dimension mismatch with the grid");
  return analyze(sample(f, grid), grid, cap, space);
}

Value synthesize(const HermiteExpansion& e, std::span<const double> x) {
  if (static_cast<int>(x.size()) != e.dim()) throw ValidationError("synthesize: dimension mismatch");
  Value out = e.zero_value();
  if (e.empty()) return out;
  std::array<std::vector<double>, kMaxDim> axis_values;
  for (int j = 0; j < e.dim(); ++j) axis_values[static_cast<std::size_t>(j)] = eval_hermite_all(e.cap(), x[static_cast<std::size_t>(j)]);
  for (const auto& [k, c] : e.coeffs()) {
    double h = 1.0;
    for (int j = 0; j < e.dim(); ++j) h *= axis_values[static_cast<std::size_t>(j)][static_cast<std::size_t>(k[j])];
    for (std::size_t i = 0; i < c.size(); ++i) out[i] += h * c[i];
  }
  return out;
}

GridSamples synthesize_on_grid(const HermiteExpansion& e, const SpatialGrid& grid) {
  if (e.dim() != grid.dim()) throw ValidationError("synthesize_on_grid: dimension mismatch");
  GridSamples out(grid.size(), e.zero_value());
  if (e.empty()) return out;
  const HermiteTable table(grid, e.cap());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (const auto& [k, c] : e.coeffs()) {
      const double h = table.eval(k, grid, i);
      for (std::size_t r = 0; r < c.size(); ++r) out[i][r] += h * c[r];
    }
  }
  return out;
}

std::vector<double> pointwise_norms(const GridSamples& samples, const ValueSpace& space) {
  std::vector<double> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) out[i] = space.norm(samples[i]);
  return out;
}

double lp_norm_scalar(std::span<const double> values, double p, const SpatialGrid& grid) {
  if (!(p > 1.0) || !std::isfinite(p)) throw ValidationError("lp_norm: p must lie in (1, inf)");
  if (values.size() != grid.size()) throw ValidationError("lp_norm: sample count does not match the grid");
  double big = 0.0;
  for (double v : values) big = std::max(big, std::abs(v));
  if (big == 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += grid.weight(i) * std::pow(std::abs(values[i]) / big, p);
  return big * std::pow(s, 1.0 / p);
}

double lp_norm(const GridSamples& samples, double p, const SpatialGrid& grid, const ValueSpace& space) {
  if (!(p > 1.0) || !std::isfinite(p)) throw ValidationError("lp_norm: p must lie in (1, inf)");
  const auto norms = pointwise_norms(samples, space);
  return lp_norm_scalar(norms, p, grid);
}

double lp_norm(const HermiteExpansion& e, double p, const SpatialGrid& grid) {
  return lp_norm(synthesize_on_grid(e, grid), p, grid, e.space());
}

}  // namespace hermite
