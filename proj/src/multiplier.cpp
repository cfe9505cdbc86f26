#include "hermite/multiplier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hermite/quadrature.hpp"
#include "hermite/special.hpp"

namespace hermite {

namespace {

constexpr double kPi = std::numbers::pi;
// Angle kept between the rotated ray and the edge of the admissible sector.
constexpr double kContourMargin = 0.3;

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

// ---- MultiplierSymbol -------------------------------------------------------

MultiplierSymbol::MultiplierSymbol(std::string name, int dim, Evaluator f)
    : name_(std::move(name)), dim_(dim), f_(std::move(f)) {
  if (dim < 1 || dim > kMaxDim) throw ValidationError("MultiplierSymbol: dimension must be in 1..3");
  if (dim == 1) {
    Evaluator g = f_;
    factors_.push_back([g](cplx z) { return g(std::span<const cplx>(&z, 1)); });
  }
}

MultiplierSymbol MultiplierSymbol::separable(std::string name, std::vector<AxisFactor> factors) {
  const int dim = static_cast<int>(factors.size());
  auto copy = factors;
  MultiplierSymbol m(std::move(name), dim, [copy](std::span<const cplx> z) {
    cplx v = 1.0;
    for (std::size_t j = 0; j < copy.size(); ++j) v *= copy[j](z[j]);
    return v;
  });
  m.factors_ = std::move(factors);
  return m;
}

cplx MultiplierSymbol::operator()(std::span<const double> lambda) const {
  std::array<cplx, kMaxDim> z{};
  for (std::size_t j = 0; j < lambda.size(); ++j) z[j] = lambda[j];
  return evaluate(std::span<const cplx>(z.data(), lambda.size()));
}

cplx MultiplierSymbol::evaluate(std::span<const cplx> z) const {
  if (static_cast<int>(z.size()) != dim_) throw ValidationError("symbol '" + name_ + "': argument dimension mismatch");
  return f_(z);
}

MultiplierSymbol& MultiplierSymbol::with_sector(double psi) {
  if (!(psi > 0.0 && psi < kPi)) throw ValidationError("symbol sector must lie in (0, pi)");
  sector_ = psi;
  return *this;
}

MultiplierSymbol& MultiplierSymbol::with_real_on_axis(bool real) {
  real_ = real;
  return *this;
}

const MultiplierSymbol::AxisFactor& MultiplierSymbol::factor(int axis) const {
  if (!is_separable()) throw ValidationError("symbol '" + name_ + "' is not separable");
  return factors_.at(static_cast<std::size_t>(axis));
}

MultiplierSymbol MultiplierSymbol::axis_symbol(int axis) const {
  const AxisFactor f = factor(axis);
  MultiplierSymbol m(name_ + "[" + std::to_string(axis) + "]", 1, [f](std::span<const cplx> z) { return f(z[0]); });
  m.sector_ = sector_;
  m.real_ = real_;
  return m;
}

double MultiplierSymbol::lattice_bound(int cap) const {
  double bound = 0.0;
  MultiIndex k(dim_);
  std::array<double, kMaxDim> lambda{};
  while (true) {
    for (int j = 0; j < dim_; ++j) lambda[static_cast<std::size_t>(j)] = 2.0 * k[j] + 1.0;
    const cplx v = (*this)(std::span<const double>(lambda.data(), static_cast<std::size_t>(dim_)));
    if (!finite(v)) throw ValidationError("symbol '" + name_ + "' is not finite at a lattice point");
    bound = std::max(bound, std::abs(v));
    int j = dim_ - 1;
    while (j >= 0 && k[j] == cap) k[j--] = 0;
    if (j < 0) break;
    ++k[j];
  }
  return bound;
}

HermiteExpansion apply_multiplier(const HermiteExpansion& e, const MultiplierSymbol& m) {
  if (m.dim() != e.dim()) throw ValidationError("apply_multiplier: symbol dimension differs from the expansion");
  return e.map_diagonal(
      [&m](const MultiIndex& k) {
        std::array<double, kMaxDim> lambda{};
        for (int j = 0; j < k.dim(); ++j) lambda[static_cast<std::size_t>(j)] = 2.0 * k[j] + 1.0;
        const cplx v = m(std::span<const double>(lambda.data(), static_cast<std::size_t>(k.dim())));
        if (!finite(v)) throw ValidationError("symbol '" + m.name() + "' is not finite at a lattice point");
        return v;
      },
      !m.real_on_axis());
}

HermiteExpansion imaginary_power(const HermiteExpansion& e, std::span<const double> beta) {
  if (static_cast<int>(beta.size()) != e.dim()) throw ValidationError("imaginary_power: beta dimension mismatch");
  return e.map_diagonal([beta](const MultiIndex& k) {
    double phase = 0.0;
    for (int j = 0; j < k.dim(); ++j) phase += beta[static_cast<std::size_t>(j)] * std::log(2.0 * k[j] + 1.0);
    return std::polar(1.0, phase);
  });
}

// ---- catalog ----------------------------------------------------------------

MultiplierSymbol identity_symbol(int dim) {
  std::vector<MultiplierSymbol::AxisFactor> f(static_cast<std::size_t>(dim), [](cplx) { return cplx(1.0); });
  auto m = MultiplierSymbol::separable("identity", std::move(f));
  m.with_sector(kPi - 0.01);
  return m;
}

MultiplierSymbol imaginary_power_symbol(std::span<const double> beta) {
  std::vector<MultiplierSymbol::AxisFactor> f;
  for (double b : beta) f.push_back([b](cplx z) { return std::exp(cplx(0.0, b) * std::log(z)); });
  auto m = MultiplierSymbol::separable("imaginary-power", std::move(f));
  m.with_sector(kPi - 0.01);
  m.with_real_on_axis(std::all_of(beta.begin(), beta.end(), [](double b) { return b == 0.0; }));
  return m;
}

MultiplierSymbol sector_rational_symbol(int dim) {
  std::vector<MultiplierSymbol::AxisFactor> f(static_cast<std::size_t>(dim),
                                              [](cplx z) { return std::sqrt(z / (z + 1.0)); });
  auto m = MultiplierSymbol::separable("sector-rational", std::move(f));
  m.with_sector(kPi - 0.01);
  return m;
}

MultiplierSymbol riesz_symbol(const MultiIndex& orders, int split) {
  const int dim = orders.dim();
  if (split < 0 || split > dim) throw ValidationError("riesz_symbol: split index out of range");
  int lowered = 0;
  for (int l = 0; l < split; ++l) lowered += orders[l];
  const double total = orders.order();
  auto f = [orders, split, lowered, total, dim](std::span<const cplx> z) {
    cplx num = 1.0, sum = 0.0;
    for (int l = 0; l < dim; ++l) {
      const cplx zl = z[static_cast<std::size_t>(l)];
      sum += zl;
      if (l < split) {
        for (int s = 0; s < orders[l]; ++s) num *= std::sqrt(zl + 2.0 * (orders[l] - s) - 1.0);
      } else {
        for (int s = 1; s <= orders[l]; ++s) num *= std::sqrt(zl + 2.0 * s - 1.0);
      }
    }
    if (total == 0.0) return num;
    return num / std::pow(sum + 2.0 * lowered, total / 2.0);
  };
  MultiplierSymbol m("riesz", dim, f);
  m.with_sector(dim == 1 ? kPi - 0.01 : kPi / 2.0);
  return m;
}

MultiplierSymbol tau_inverse_symbol(int dim, int ell) {
  if (ell < 1) throw ValidationError("tau_inverse_symbol: ell must be >= 1");
  auto f = [ell](std::span<const cplx> z) {
    cplx sum = 0.0, den = 0.0;
    for (const cplx& zj : z) {
      sum += zj;
      cplx prod = 1.0;
      for (int r = 1; r <= ell; ++r) prod *= zj / 2.0 + (r - 0.5);
      den += prod;
    }
    return std::pow(sum + 2.0 * ell, ell / 2.0) * std::pow(sum, ell / 2.0) / den;
  };
  MultiplierSymbol m("tau-inverse", dim, f);
  m.with_sector(dim == 1 ? kPi - 0.01 : kPi / 2.0);
  return m;
}

MultiplierSymbol catalog_symbol(const std::string& name, int dim, const CatalogParams& params) {
  if (name == "identity") return identity_symbol(dim);
  if (name == "imaginary-power") {
    std::vector<double> beta = params.beta;
    if (beta.empty()) beta.assign(static_cast<std::size_t>(dim), 1.0);
    if (static_cast<int>(beta.size()) != dim) throw ValidationError("imaginary-power: beta has the wrong length");
    return imaginary_power_symbol(beta);
  }
  if (name == "sector-rational") return sector_rational_symbol(dim);
  if (name == "riesz") {
    MultiIndex orders = params.orders.dim() == dim ? params.orders : MultiIndex(dim);
    if (params.orders.dim() != dim) orders[0] = 1;
    return riesz_symbol(orders, params.split);
  }
  if (name == "tau-inverse") return tau_inverse_symbol(dim, params.ell);
  throw ValidationError("unknown catalog symbol '" + name + "'");
}

std::vector<std::string> catalog_names() {
  return {"identity", "imaginary-power", "sector-rational", "riesz", "tau-inverse"};
}

// ---- Mellin transform -------------------------------------------------------

namespace {

double contour_angle(std::optional<double> sector, double u, const MellinOptions& options) {
  if (!options.rotate || !sector || u == 0.0) return 0.0;
  const double theta = std::min(*sector / 2.0, kPi / 2.0) - kContourMargin;
  if (theta <= 0.0) return 0.0;
  return u > 0.0 ? -theta : theta;
}

int odd_nodes(const MellinOptions& options) { return options.nodes % 2 == 0 ? options.nodes + 1 : options.nodes; }

// Ray arg(lambda) = theta discretized in sigma = log s, s = t lambda e^{-i theta} / 2.
struct Ray {
  double theta = 0.0;
  double sigma0 = 0.0;
  double h = 0.0;
  std::vector<cplx> lambda;
  double magnitude = 0.0;  // h sum |body|, filled by the caller
};

constexpr double kEps = 2.220446049250313e-16;
constexpr double kRoundoffUlps = 8.0;

Ray make_ray(double t, double theta, const MellinOptions& options) {
  const int nodes = odd_nodes(options);
  Ray r;
  r.theta = theta;
  r.sigma0 = options.log_min;
  r.h = (std::log(options.tail / std::cos(theta)) - options.log_min) / (nodes - 1);
  r.lambda.resize(static_cast<std::size_t>(nodes));
  const cplx rot = std::polar(1.0, theta);
  for (int i = 0; i < nodes; ++i) r.lambda[static_cast<std::size_t>(i)] = (2.0 * std::exp(r.sigma0 + r.h * i) / t) * rot;
  return r;
}

// sum_i w_i body_i e^{-iu sigma_i} for the fine trapezoid rule and the rule on every other node.
std::pair<cplx, cplx> phased_sums(const std::vector<cplx>& body, double sigma0, double h, double u) {
  const std::size_t n = body.size();
  const cplx step = std::polar(1.0, -u * h);
  cplx phase = std::polar(1.0, -u * sigma0);
  cplx fine = 0.0, coarse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 64 == 0) phase = std::polar(1.0, -u * (sigma0 + h * static_cast<double>(i)));
    const cplx term = body[i] * phase;
    const bool end = i == 0 || i + 1 == n;
    fine += end ? 0.5 * term : term;
    if (i % 2 == 0) coarse += end ? term : 2.0 * term;
    phase *= step;
  }
  return {fine * h, coarse * h};
}

// Univariate transform at fixed (alpha, t). The symbol is sampled once per ray, so
// many u values cost one complex multiply-add per node each.
class AxisMellin {
 public:
  AxisMellin(MultiplierSymbol::AxisFactor f, int alpha, double t, std::optional<double> sector,
             const MellinOptions& options)
      : f_(std::move(f)), alpha_(alpha), t_(t), sector_(sector), options_(options) {}

  MellinValue operator()(double u) {
    const double theta = contour_angle(sector_, u, options_);
    const auto& body = ray_body(theta);
    auto [fine, coarse] = phased_sums(body.second, body.first.sigma0, body.first.h, u);
    // lambda^{-iu} = e^{-iu log(2/t)} e^{u theta} e^{-iu sigma}
    const cplx pre = std::exp(cplx(u * theta, -u * std::log(2.0 / t_)));
    fine *= pre;
    coarse *= pre;
    if (!finite(fine)) throw NonConvergence("mellin_transform: non-finite quadrature", INFINITY);
    return {fine, std::abs(fine - coarse), kRoundoffUlps * kEps * std::abs(pre) * body.first.magnitude};
  }

 private:
  // body_i = (t lambda_i)^alpha e^{-t lambda_i / 2} m(lambda_i^2)
  const std::pair<Ray, std::vector<cplx>>& ray_body(double theta) {
    for (const auto& r : rays_)
      if (r.first.theta == theta) return r;
    Ray ray = make_ray(t_, theta, options_);
    std::vector<cplx> body(ray.lambda.size());
    for (std::size_t i = 0; i < body.size(); ++i) {
      const cplx lam = ray.lambda[i];
      const cplx tl = t_ * lam;
      body[i] = std::exp(static_cast<double>(alpha_) * std::log(tl) - tl / 2.0) * f_(lam * lam);
      ray.magnitude += std::abs(body[i]) * ray.h;
    }
    rays_.emplace_back(std::move(ray), std::move(body));
    return rays_.back();
  }

  MultiplierSymbol::AxisFactor f_;
  int alpha_;
  double t_;
  std::optional<double> sector_;
  MellinOptions options_;
  std::vector<std::pair<Ray, std::vector<cplx>>> rays_;
};

MellinValue mellin_generic(const MultiplierSymbol& m, const MultiIndex& alpha, std::span<const double> t,
                           std::span<const double> u, const MellinOptions& options) {
  const int dim = m.dim();
  const int n = odd_nodes(options);
  // Per axis: nodes lambda and the symbol-free part of the integrand, fine and coarse weights.
  std::vector<std::vector<cplx>> lambda(static_cast<std::size_t>(dim)), wf(static_cast<std::size_t>(dim)),
      wc(static_cast<std::size_t>(dim));
  for (int j = 0; j < dim; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    const double theta = contour_angle(m.sector(), u[ju], options);
    const Ray ray = make_ray(t[ju], theta, options);
    lambda[ju] = ray.lambda;
    wf[ju].resize(ray.lambda.size());
    wc[ju].assign(ray.lambda.size(), 0.0);
    for (int i = 0; i < n; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      const cplx lam = ray.lambda[ii];
      const cplx tl = t[ju] * lam;
      const cplx log_lam(std::log(std::abs(lam)), theta);
      const cplx body = std::exp(cplx(0.0, -u[ju]) * log_lam + static_cast<double>(alpha[j]) * std::log(tl) - tl / 2.0);
      const bool end = i == 0 || i + 1 == n;
      wf[ju][ii] = body * (end ? 0.5 * ray.h : ray.h);
      if (i % 2 == 0) wc[ju][ii] = body * (end ? ray.h : 2.0 * ray.h);
    }
  }
  std::size_t total = 1;
  for (int j = 0; j < dim; ++j) total *= static_cast<std::size_t>(n);
  cplx fine = 0.0, coarse = 0.0;
  double magnitude = 0.0;
  std::array<cplx, kMaxDim> z{};
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    cplx a = 1.0, b = 1.0;
    for (int j = dim - 1; j >= 0; --j) {
      const auto ju = static_cast<std::size_t>(j);
      const std::size_t i = rest % static_cast<std::size_t>(n);
      rest /= static_cast<std::size_t>(n);
      z[ju] = lambda[ju][i] * lambda[ju][i];
      a *= wf[ju][i];
      b *= wc[ju][i];
    }
    const cplx mv = m.evaluate(std::span<const cplx>(z.data(), static_cast<std::size_t>(dim)));
    fine += a * mv;
    coarse += b * mv;
    magnitude += std::abs(a * mv);
  }
  if (!finite(fine)) throw NonConvergence("mellin_transform: non-finite quadrature", INFINITY);
  return {fine, std::abs(fine - coarse), kRoundoffUlps * kEps * magnitude};
}

void check_mellin_arguments(const MultiplierSymbol& m, const MultiIndex& alpha, std::span<const double> t,
                            std::span<const double> u, const MellinOptions& options) {
  const int dim = m.dim();
  if (alpha.dim() != dim || static_cast<int>(t.size()) != dim || static_cast<int>(u.size()) != dim)
    throw ValidationError("mellin_transform: dimension mismatch");
  for (int j = 0; j < dim; ++j) {
    if (alpha[j] < 1) throw ValidationError("mellin_transform: every alpha_j must be >= 1");
    if (!(t[static_cast<std::size_t>(j)] > 0.0) || !std::isfinite(t[static_cast<std::size_t>(j)]))
      throw ValidationError("mellin_transform: t must be positive");
    if (!std::isfinite(u[static_cast<std::size_t>(j)])) throw ValidationError("mellin_transform: u must be finite");
  }
  if (options.nodes < 16) throw ValidationError("mellin_transform: too few nodes");
  if (!(options.tail > 0.0) || !(std::log(options.tail) > options.log_min))
    throw ValidationError("mellin_transform: bad log range");
}

MellinValue combine(MellinValue acc, const MellinValue& axis) {
  return {acc.value * axis.value, std::abs(acc.value) * axis.error_estimate + std::abs(axis.value) * acc.error_estimate,
          std::abs(acc.value) * axis.roundoff + std::abs(axis.value) * acc.roundoff + acc.roundoff * axis.roundoff};
}

}  // namespace

MellinValue mellin_value(const MultiplierSymbol& m, const MultiIndex& alpha, std::span<const double> t,
                         std::span<const double> u, const MellinOptions& options) {
  check_mellin_arguments(m, alpha, t, u, options);
  if (!m.is_separable() || options.force_generic) return mellin_generic(m, alpha, t, u, options);
  MellinValue acc{1.0, 0.0};
  for (int j = 0; j < m.dim(); ++j) {
    const auto ju = static_cast<std::size_t>(j);
    AxisMellin axis(m.factor(j), alpha[j], t[ju], m.sector(), options);
    acc = combine(acc, axis(u[ju]));
  }
  return acc;
}

MellinSample mellin_transform(const MultiplierSymbol& m, const MultiIndex& alpha,
                              const std::vector<std::vector<double>>& t_nodes,
                              const std::vector<std::vector<double>>& u_nodes, const MellinOptions& options) {
  MellinSample s;
  s.alpha = alpha;
  s.t_nodes = t_nodes;
  s.u_nodes = u_nodes;
  s.values.reserve(t_nodes.size() * u_nodes.size());
  for (const auto& t : t_nodes) {
    for (const auto& u : u_nodes) check_mellin_arguments(m, alpha, t, u, options);
    if (!m.is_separable() || options.force_generic) {
      for (const auto& u : u_nodes) {
        const auto v = mellin_generic(m, alpha, t, u, options);
        s.values.push_back(v.value);
        s.max_error_estimate = std::max(s.max_error_estimate, v.error_estimate);
      }
      continue;
    }
    std::vector<AxisMellin> axes;
    for (int j = 0; j < m.dim(); ++j)
      axes.emplace_back(m.factor(j), alpha[j], t[static_cast<std::size_t>(j)], m.sector(), options);
    for (const auto& u : u_nodes) {
      MellinValue acc{1.0, 0.0};
      for (int j = 0; j < m.dim(); ++j) acc = combine(acc, axes[static_cast<std::size_t>(j)](u[static_cast<std::size_t>(j)]));
      s.values.push_back(acc.value);
      s.max_error_estimate = std::max(s.max_error_estimate, acc.error_estimate);
    }
  }
  return s;
}

// ---- Meda-type condition ----------------------------------------------------

GrowthModel GrowthModel::exponential(double omega) {
  if (!(omega >= 0.0) || !std::isfinite(omega)) throw ValidationError("growth model: omega must be >= 0");
  GrowthModel g;
  g.kind = Kind::Exponential;
  g.omega = omega;
  return g;
}

GrowthModel GrowthModel::polynomial(double power) {
  if (!(power >= 0.0) || !std::isfinite(power)) throw ValidationError("growth model: power must be >= 0");
  GrowthModel g;
  g.kind = Kind::Polynomial;
  g.power = power;
  return g;
}

double GrowthModel::operator()(double u) const {
  return kind == Kind::Exponential ? std::exp(omega * std::abs(u)) : std::pow(1.0 + std::abs(u), power);
}

namespace {

double log_growth(const GrowthModel& g, double u) {
  return g.kind == GrowthModel::Kind::Exponential ? g.omega * std::abs(u) : g.power * std::log1p(std::abs(u));
}

double log_envelope(int gamma, double u) {
  return std::log1p(std::abs(u)) + log_gamma(cplx(gamma, -u)).real();
}

std::vector<double> log_ladder(double lo, double hi, int points) {
  std::vector<double> t(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    t[static_cast<std::size_t>(i)] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (points - 1));
  return t;
}

// sup over the ladder of |M(t, u)| for every u, refining the ladder until stable,
// with the largest rounding floor met on the way.
struct SupProfile {
  std::vector<double> sup;
  std::vector<double> floor;
};

SupProfile sup_over_t(const MultiplierSymbol& m, int gamma, const std::vector<double>& u, const MedaOptions& options,
                      int& refinements) {
  auto raise = [&](double t, SupProfile& p) {
    AxisMellin axis(m.factor(0), gamma, t, m.sector(), options.mellin);
    for (std::size_t i = 0; i < u.size(); ++i) {
      const auto v = axis(u[i]);
      p.sup[i] = std::max(p.sup[i], std::abs(v.value));
      p.floor[i] = std::max(p.floor[i], v.roundoff);
    }
  };
  SupProfile profile{std::vector<double>(u.size(), 0.0), std::vector<double>(u.size(), 0.0)};
  int points = options.ladder_points;
  for (double t : log_ladder(options.ladder_min, options.ladder_max, points)) raise(t, profile);
  refinements = 0;
  for (int level = 0; level < options.max_refinements; ++level) {
    const int finer = 2 * points - 1;
    const auto ladder = log_ladder(options.ladder_min, options.ladder_max, finer);
    SupProfile next = profile;
    for (std::size_t k = 1; k < ladder.size(); k += 2) raise(ladder[k], next);  // only the new midpoints
    double change = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
      if (next.sup[i] > 0.0) change = std::max(change, (next.sup[i] - profile.sup[i]) / next.sup[i]);
    profile = std::move(next);
    points = finer;
    ++refinements;
    if (change < options.ladder_tolerance) return profile;
  }
  throw NonConvergence("meda_condition: sup over t did not stabilize on the refinement ladder", 0.0);
}

// A sup within this factor of its rounding floor is treated as noise.
constexpr double kNoiseMargin = 1e3;
// Below this cutoff the truncated integral says too little to extrapolate from.
constexpr double kMinCutoff = 2.0;

MedaAxis meda_axis(const MultiplierSymbol& m, int gamma, const GrowthModel& growth, const MedaOptions& options) {
  MedaAxis axis;
  const double cutoff = options.cutoff;
  axis.cutoff = cutoff;
  const auto half = quad::composite_gauss_legendre(0.0, cutoff, options.u_panels);
  // u nodes: the negative half (mirrored) then the positive half, then the endpoints +-U.
  std::vector<double> u, w;
  for (std::size_t i = half.size(); i-- > 0;) {
    u.push_back(-half.nodes[i]);
    w.push_back(half.weights[i]);
  }
  for (std::size_t i = 0; i < half.size(); ++i) {
    u.push_back(half.nodes[i]);
    w.push_back(half.weights[i]);
  }
  std::vector<double> query = u;
  query.push_back(-cutoff);
  query.push_back(cutoff);
  SupProfile profile;
  if (m.real_on_axis()) {
    // |M(t, -u)| = |M(t, u)| for real symbols.
    std::vector<double> positive;
    for (double v : query) positive.push_back(std::abs(v));
    std::vector<double> unique = positive;
    std::sort(unique.begin(), unique.end());
    unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
    const auto s = sup_over_t(m, gamma, unique, options, axis.refinements);
    for (double v : positive) {
      const auto k = static_cast<std::size_t>(std::lower_bound(unique.begin(), unique.end(), v) - unique.begin());
      profile.sup.push_back(s.sup[k]);
      profile.floor.push_back(s.floor[k]);
    }
  } else {
    profile = sup_over_t(m, gamma, query, options, axis.refinements);
  }

  // Without a rotated contour the transform decays into its rounding floor well
  // before U; the sup there is noise that the growth weight would amplify. Retry
  // with the cutoff pulled in to the first |u| where that happens.
  double noisy = INFINITY;
  for (std::size_t i = 0; i < query.size(); ++i)
    if (profile.floor[i] > 0.0 && profile.sup[i] <= kNoiseMargin * profile.floor[i]) noisy = std::min(noisy, std::abs(query[i]));
  if (noisy < cutoff) {
    if (noisy < kMinCutoff)
      throw NonConvergence("meda_condition: Mellin transform reaches its rounding floor at |u| = " +
                               std::to_string(noisy) + "; give the symbol sector metadata",
                           noisy);
    MedaOptions inner = options;
    inner.cutoff = noisy;
    return meda_axis(m, gamma, growth, inner);
  }

  auto& sup = profile.sup;
  const double sup_lo = sup[sup.size() - 2], sup_hi = sup.back();
  sup.resize(u.size());
  axis.u = u;
  axis.sup = sup;
  for (std::size_t i = 0; i < u.size(); ++i) {
    axis.envelope.push_back(std::exp(log_envelope(gamma, u[i])));
    axis.truncated += w[i] * sup[i] * growth(u[i]);
  }

  // Tail: the envelope, scaled to meet the computed sup at +-U, integrated over doubling windows.
  const double scale = std::max(sup_lo, sup_hi) / std::exp(log_envelope(gamma, cutoff));
  double tail = 0.0, previous = 0.0;
  int growing = 0;
  bool decided = false;
  for (int i = 0; i < options.max_windows; ++i) {
    const double a = cutoff * std::ldexp(1.0, i), b = 2.0 * a;
    const auto rule = quad::composite_gauss_legendre(a, b, 8);
    double window = 0.0;
    for (std::size_t k = 0; k < rule.size(); ++k)
      window += rule.weights[k] * std::exp(log_envelope(gamma, rule.nodes[k]) + log_growth(growth, rule.nodes[k]));
    window *= 2.0 * scale;  // both half lines
    tail += window;
    if (!std::isfinite(window) || !std::isfinite(tail)) {
      axis.finite = false;
      decided = true;
      break;
    }
    if (i > 0 && window > previous) {
      if (++growing >= 2) {
        axis.finite = false;
        decided = true;
        break;
      }
    } else {
      growing = 0;
    }
    if (window <= 1e-14 * (axis.truncated + tail)) {
      decided = true;
      break;
    }
    previous = window;
  }
  if (!decided) axis.finite = growing == 0;
  axis.tail = axis.finite ? tail : INFINITY;
  return axis;
}

}  // namespace

MedaResult meda_condition(const MultiplierSymbol& m, const MultiIndex& gamma, const GrowthModel& growth,
                          const MedaOptions& options) {
  if (gamma.dim() != m.dim()) throw ValidationError("meda_condition: gamma dimension differs from the symbol");
  for (int j = 0; j < gamma.dim(); ++j)
    if (gamma[j] < 1) throw ValidationError("meda_condition: every gamma_j must be >= 1");
  if (m.dim() > 1 && !m.is_separable())
    throw ValidationError("meda_condition: dimension > 1 requires a separable symbol");
  if (!(options.cutoff > 0.0) || options.ladder_points < 2 || options.u_panels < 1)
    throw ValidationError("meda_condition: invalid options");
  MedaResult r;
  r.integral = 1.0;
  r.truncated = 1.0;
  for (int j = 0; j < m.dim(); ++j) {
    const auto axis_symbol = m.dim() == 1 ? m : m.axis_symbol(j);
    auto axis = meda_axis(axis_symbol, gamma[j], growth, options);
    r.finite = r.finite && axis.finite;
    r.truncated *= axis.truncated;
    r.integral *= axis.truncated + axis.tail;
    r.axes.push_back(std::move(axis));
  }
  if (!r.finite) r.integral = INFINITY;
  return r;
}

// ---- representation through imaginary powers --------------------------------

RepresentationResult imaginary_power_representation_check(const HermiteExpansion& e, const MultiplierSymbol& m,
                                                           const MultiIndex& alpha,
                                                           const RepresentationOptions& options) {
  const int dim = e.dim();
  if (dim > 2) throw ValidationError("representation check: dimension must be 1 or 2");
  if (!e.space().is_scalar()) throw ValidationError("representation check: scalar expansions only");
  if (e.cap() > 6) throw ValidationError("representation check: degree cap must be <= 6");
  if (m.dim() != dim || alpha.dim() != dim) throw ValidationError("representation check: dimension mismatch");
  if (dim > 1 && !m.is_separable()) throw ValidationError("representation check: dimension 2 needs a separable symbol");
  for (int j = 0; j < dim; ++j)
    if (alpha[j] < 1) throw ValidationError("representation check: every alpha_j must be >= 1");
  if (options.t_probes < 1 || options.x_probes < 1) throw ValidationError("representation check: no probes");

  const auto urule = quad::composite_gauss_legendre(-options.cutoff, options.cutoff, options.u_panels);
  const int cap = e.cap();
  RepresentationResult result;

  std::vector<double> tprobe(static_cast<std::size_t>(options.t_probes));
  for (int i = 0; i < options.t_probes; ++i)
    tprobe[static_cast<std::size_t>(i)] =
        options.t_probes == 1 ? options.t_min
                              : std::exp(std::log(options.t_min) +
                                         (std::log(options.t_max) - std::log(options.t_min)) * i / (options.t_probes - 1));
  std::vector<double> xprobe(static_cast<std::size_t>(options.x_probes));
  for (int i = 0; i < options.x_probes; ++i)
    xprobe[static_cast<std::size_t>(i)] =
        options.x_probes == 1 ? 0.0 : -options.x_max + 2.0 * options.x_max * i / (options.x_probes - 1);

  struct Probe {
    double lhs, rhs;
  };
  std::vector<Probe> probes;
  const double sign = (alpha.order() % 2 == 0) ? 1.0 : -1.0;
  const double two_pi_n = std::pow(2.0 * kPi, dim);

  for (int ti = 0; ti < options.t_probes; ++ti) {
    // The second axis walks the time probes backwards so that t_1 != t_2 in general.
    std::array<double, 2> t{tprobe[static_cast<std::size_t>(ti)],
                            tprobe[static_cast<std::size_t>(options.t_probes - 1 - ti)]};
    // ujint[j][l] = int M^{(j)}(t_j, u) (2l+1)^{iu/2} du over [-U, U]
    std::vector<std::vector<cplx>> ujint(static_cast<std::size_t>(dim), std::vector<cplx>(static_cast<std::size_t>(cap) + 1));
    for (int j = 0; j < dim; ++j) {
      const auto axis = dim == 1 ? m : m.axis_symbol(j);
      AxisMellin transform(axis.factor(0), alpha[j], t[static_cast<std::size_t>(j)], axis.sector(), options.mellin);
      std::vector<cplx> mv(urule.size());
      double peak = 0.0;
      for (std::size_t k = 0; k < urule.size(); ++k) {
        mv[k] = transform(urule.nodes[k]).value;
        peak = std::max(peak, std::abs(mv[k]));
      }
      for (double edge : {-options.cutoff, options.cutoff})
        result.tail = std::max(result.tail, std::abs(transform(edge).value) / peak);
      for (int l = 0; l <= cap; ++l) {
        const double loglam = std::log(2.0 * l + 1.0);
        cplx s = 0.0;
        for (std::size_t k = 0; k < urule.size(); ++k)
          s += urule.weights[k] * mv[k] * std::polar(1.0, 0.5 * urule.nodes[k] * loglam);
        ujint[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)] = s;
      }
    }
    if (result.tail > 1e-8) throw NonConvergence("representation check: u-integral tail above tolerance", result.tail);

    // Per-coefficient factors of both sides at this time probe.
    std::vector<std::pair<cplx, cplx>> factors;
    for (const auto& [k, c] : e.coeffs()) {
      std::array<double, kMaxDim> lambda{};
      cplx lhs = 1.0, rhs = sign / two_pi_n;
      for (int j = 0; j < dim; ++j) {
        const double lam = 2.0 * k[j] + 1.0;
        const double mu = std::sqrt(lam);
        const double tj = t[static_cast<std::size_t>(j)];
        lambda[static_cast<std::size_t>(j)] = lam;
        lhs *= std::pow(-tj * mu, alpha[j] + 1) * std::exp(-tj * mu);
        rhs *= ujint[static_cast<std::size_t>(j)][static_cast<std::size_t>(k[j])] * (-tj * mu) * std::exp(-tj * mu / 2.0);
      }
      lhs *= m(std::span<const double>(lambda.data(), static_cast<std::size_t>(dim)));
      factors.emplace_back(lhs * c[0], rhs * c[0]);
    }
    for (int xi = 0; xi < options.x_probes; ++xi) {
      std::array<double, 2> x{xprobe[static_cast<std::size_t>(xi)],
                              xprobe[static_cast<std::size_t>(options.x_probes - 1 - xi)] * 0.8};
      cplx lhs = 0.0, rhs = 0.0;
      std::size_t idx = 0;
      for (const auto& [k, c] : e.coeffs()) {
        const double h = eval_hermite_multi(k, std::span<const double>(x.data(), static_cast<std::size_t>(dim)));
        lhs += factors[idx].first * h;
        rhs += factors[idx].second * h;
        ++idx;
      }
      probes.push_back({std::abs(lhs), std::abs(lhs - rhs)});
      result.max_lhs = std::max(result.max_lhs, std::abs(lhs));
    }
  }
  result.probes = probes.size();
  const double floor = options.floor * result.max_lhs;
  for (const auto& p : probes) {
    const double denom = std::max(p.lhs, floor);
    if (denom > 0.0) result.max_residual = std::max(result.max_residual, p.rhs / denom);
  }
  return result;
}

}  // namespace hermite
