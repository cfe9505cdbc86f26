#include "hermite/runner/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hermite/littlewood_paley.hpp"
#include "hermite/parallel.hpp"
#include "hermite/random.hpp"
#include "hermite/runner/numbers.hpp"
#include "hermite/runner/symbol_parser.hpp"
#include "hermite/semigroup.hpp"
#include "hermite/sobolev.hpp"

namespace hermite::runner {

std::vector<std::string> experiment_names() {
  return {"basis", "kernel", "equivalence", "polarization", "mellin", "representation", "meda", "sobolev", "triebel"};
}

HermiteExpansion corpus_member(int dim, int degree, const ValueSpace& space, std::uint64_t seed, std::uint64_t item,
                               std::uint64_t draw) {
  const bool complex_values = space.kind() != ValueSpace::Kind::Real;
  const auto width = static_cast<std::size_t>(space.components()) * (complex_values ? 2 : 1);
  std::vector<MultiIndex> indices;
  MultiIndex k(dim);
  while (true) {
    if (k.order() <= degree) indices.push_back(k);
    int j = dim - 1;
    while (j >= 0 && k[j] == degree) k[j--] = 0;
    if (j < 0) break;
    ++k[j];
  }
  const auto normals = keyed_normals(seed, item, draw, indices.size() * width);
  HermiteExpansion e(dim, degree, space);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    Value v(static_cast<std::size_t>(space.components()));
    for (std::size_t c = 0; c < v.size(); ++c) {
      const double* g = normals.data() + i * width + c * (complex_values ? 2 : 1);
      v[c] = complex_values ? cplx(g[0], g[1]) : cplx(g[0]);
    }
    e.set(indices[i], v);
  }
  return e;
}

MultiplierSymbol config_symbol(const ExperimentConfig& c) {
  const std::string prefix = "catalog:";
  if (c.symbol.rfind(prefix, 0) == 0) {
    CatalogParams params;
    params.beta.assign(static_cast<std::size_t>(c.dim), c.beta.value_or(1.0));
    if (!c.orders.empty()) params.orders = MultiIndex::from(c.orders);
    params.split = c.split;
    params.ell = c.ell;
    auto m = catalog_symbol(c.symbol.substr(prefix.size()), c.dim, params);
    if (c.symbol_sector) m.with_sector(*c.symbol_sector);
    return m;
  }
  return parse_symbol(c.symbol, c.dim, 16, c.symbol_sector).symbol;
}

namespace {

constexpr double kPi = std::numbers::pi;

MultiIndex ones_or(const std::vector<int>& v, int dim) {
  if (v.empty()) {
    MultiIndex m(dim);
    for (int j = 0; j < dim; ++j) m[j] = 1;
    return m;
  }
  return MultiIndex::from(v);
}

SpatialGrid spatial_grid(const ExperimentConfig& c, int cap) {
  return c.spatial_nodes > 0 ? default_grid(c.dim, cap, c.spatial_nodes) : default_grid(c.dim, cap);
}

std::vector<HermiteExpansion> corpus(const ExperimentConfig& c, const ValueSpace& space, std::uint64_t draw = 0) {
  std::vector<HermiteExpansion> out(static_cast<std::size_t>(c.corpus_size), HermiteExpansion(c.dim, 0));
  parallel_for(out.size(), c.threads, [&](std::size_t i) {
    out[i] = corpus_member(c.dim, c.corpus_degree, space, *c.seed, i, draw);
  });
  return out;
}

std::string tag(const std::string& key, double p) { return key + "[p=" + format_number(p) + "]"; }

void add_summary(ExperimentReport& r, const std::string& prefix, const RatioSummary& s) {
  r.summary.emplace_back(prefix + ".min", s.min);
  r.summary.emplace_back(prefix + ".q10", s.q10);
  r.summary.emplace_back(prefix + ".median", s.median);
  r.summary.emplace_back(prefix + ".q90", s.q90);
  r.summary.emplace_back(prefix + ".max", s.max);
  r.summary.emplace_back(prefix + ".lower_constant", s.lower_constant);
  r.summary.emplace_back(prefix + ".upper_constant", s.upper_constant);
}

// ---- experiments --------------------------------------------------------------

void basis_experiment(const ExperimentConfig& c, ExperimentReport& r) {
  const auto grid = spatial_grid(c, c.cap);
  // Orthonormality of h_0..h_cap along one axis of the grid.
  const SpatialGrid axis(1, grid.halfwidth(), static_cast<int>(grid.nodes_per_axis()), c.cap);
  const HermiteTable table(axis, c.cap);
  double gram = 0.0;
  for (int i = 0; i <= c.cap; ++i)
    for (int j = 0; j <= i; ++j) {
      double s = 0.0;
      for (std::size_t x = 0; x < axis.size(); ++x) s += axis.axis_weights()[x] * table(i, x) * table(j, x);
      gram = std::max(gram, std::abs(s - (i == j ? 1.0 : 0.0)));
    }
  const auto space = c.space();
  const auto members = corpus(c, space);
  r.columns = {"id", "parseval_residual", "reanalysis_error"};
  r.rows.resize(members.size());
  parallel_for(members.size(), c.threads, [&](std::size_t i) {
    const auto& f = members[i];
    const double coeff = f.coefficient_norm();
    const auto samples = synthesize_on_grid(f, grid);
    double l2 = 0.0;
    for (std::size_t x = 0; x < grid.size(); ++x)
      for (const auto& z : samples[x]) l2 += grid.weight(x) * std::norm(z);
    const double parseval = std::abs(l2 - coeff * coeff) / (coeff * coeff);
    const auto back = analyze(samples, grid, f.cap(), space);
    r.rows[i] = {static_cast<double>(i), parseval, max_coefficient_difference(back, f)};
  });
  double parseval = 0.0, reanalysis = 0.0;
  for (const auto& row : r.rows) {
    parseval = std::max(parseval, row[1]);
    reanalysis = std::max(reanalysis, row[2]);
  }
  r.summary = {{"gram_max_error", gram}, {"parseval_max_residual", parseval}, {"reanalysis_max_error", reanalysis}};
}

void kernel_experiment(const ExperimentConfig& c, ExperimentReport& r) {
  if (c.dim != 1) throw ValidationError("kernel experiment runs in dimension 1");
  const int terms = 60;
  const int eigen_degree = 8;
  const auto grid = spatial_grid(c, std::max(c.cap, eigen_degree));
  const auto& nodes = grid.axis_nodes();
  const auto& weights = grid.axis_weights();
  const std::size_t count = nodes.size();
  const HermiteTable table(grid, terms - 1);
  const SubordinationQuadrature sub;
  r.columns = {"t", "kernel_vs_spectral", "eigen_action_error", "poisson_h0_error"};
  r.rows.resize(c.t_list.size());
  parallel_for(c.t_list.size(), c.threads, [&](std::size_t ti) {
    const double t = c.t_list[ti];
    std::vector<double> decay(terms);
    for (int k = 0; k < terms; ++k) decay[k] = std::exp(-(2.0 * k + 1.0) * t);
    std::vector<double> kernel(count * count);
    double spectral = 0.0;
    for (std::size_t a = 0; a < count; ++a)
      for (std::size_t b = 0; b < count; ++b) {
        const double x[] = {nodes[a]};
        const double y[] = {nodes[b]};
        kernel[a * count + b] = mehler_kernel(t, x, y);
        double sum = 0.0;
        for (int k = 0; k < terms; ++k) sum += decay[k] * table(k, a) * table(k, b);
        spectral = std::max(spectral, std::abs(kernel[a * count + b] - sum));
      }
    double eigen = 0.0;
    for (std::size_t a = 0; a < count; ++a)
      for (int k = 0; k <= eigen_degree; ++k) {
        double s = 0.0;
        for (std::size_t b = 0; b < count; ++b) s += weights[b] * kernel[a * count + b] * table(k, b);
        eigen = std::max(eigen, std::abs(s - decay[k] * table(k, a)));
      }
    HermiteExpansion h0(1, 0);
    h0.set(MultiIndex(1), cplx(1.0));
    const double poisson = std::abs(sub.apply(h0, t).at(MultiIndex(1))[0] - std::exp(-t));
    r.rows[ti] = {t, spectral, eigen, poisson};
  });
  double a = 0.0, b = 0.0, d = 0.0;
  for (const auto& row : r.rows) {
    a = std::max(a, row[1]);
    b = std::max(b, row[2]);
    d = std::max(d, row[3]);
  }
  r.summary = {{"kernel_max_error", a}, {"eigen_action_max_error", b}, {"poisson_max_error", d}};
}

void equivalence_run(const ExperimentConfig& c, ExperimentReport& r) {
  const auto sgrid = spatial_grid(c, c.cap);
  const auto orders = ones_or(c.orders, c.dim);
  const auto sf = SquareFunction::g_function(orders);
  const TimeGrid tgrid(sf.time_dim(c.dim), c.time_min, c.time_max, c.time_nodes);
  const auto members = corpus(c, c.space());
  MonteCarloConfig mc{c.draws, c.seed, 0};
  r.columns = {"id", "p", "ratio", "square_norm", "lp_norm", "square_std_error"};
  for (double p : c.p) {
    const auto rep = equivalence_experiment(members, sf, p, tgrid, sgrid, mc, c.threads);
    for (const auto& it : rep.items)
      r.rows.push_back({static_cast<double>(it.id), p, it.ratio, it.square_norm, it.lp, it.square_std_error});
    add_summary(r, tag("ratio", p), rep.summary);
  }
}

void polarization_run(const ExperimentConfig& c, ExperimentReport& r) {
  const auto sgrid = spatial_grid(c, c.cap);
  const auto orders = ones_or(c.orders, c.dim);
  const TimeGrid tgrid(c.dim, c.time_min, c.time_max, c.time_nodes);
  const auto space = c.space();
  const auto fs = corpus(c, space, 0);
  const auto gs = corpus(c, space.is_scalar() ? space : space.dual(), 1);
  r.columns = {"id", "residual", "lhs", "rhs"};
  r.rows.resize(fs.size());
  parallel_for(fs.size(), c.threads, [&](std::size_t i) {
    const auto res = polarization_check(fs[i], gs[i], orders, tgrid, sgrid);
    r.rows[i] = {static_cast<double>(i), res.residual, res.lhs, res.rhs};
  });
  double worst = 0.0;
  for (const auto& row : r.rows) worst = std::max(worst, row[1]);
  r.summary = {{"max_residual", worst}};
}

void mellin_run(const ExperimentConfig& c, ExperimentReport& r) {
  const auto m = config_symbol(c);
  const auto alpha = ones_or(c.alpha, c.dim);
  std::vector<std::vector<double>> ts, us;
  for (double t : c.t_list) ts.emplace_back(static_cast<std::size_t>(c.dim), t);
  for (int i = 0; i < c.u_points; ++i)
    us.emplace_back(static_cast<std::size_t>(c.dim), -c.u_max + 2.0 * c.u_max * i / (c.u_points - 1));
  const auto sample = mellin_transform(m, alpha, ts, us);
  r.columns = {"t", "u", "re", "im", "abs"};
  for (std::size_t ti = 0; ti < ts.size(); ++ti) {
    Series s{"abs_t" + std::to_string(ti), {}};
    for (std::size_t ui = 0; ui < us.size(); ++ui) {
      const cplx v = sample.at(ti, ui);
      r.rows.push_back({ts[ti][0], us[ui][0], v.real(), v.imag(), std::abs(v)});
      s.points.emplace_back(us[ui][0], std::abs(v));
    }
    r.series.push_back(std::move(s));
  }
  r.summary = {{"max_error_estimate", sample.max_error_estimate}};
}

void representation_run(const ExperimentConfig& c, ExperimentReport& r) {
  const auto m = config_symbol(c);
  const auto alpha = ones_or(c.alpha, c.dim);
  const auto members = corpus(c, ValueSpace::real());
  r.columns = {"id", "max_residual", "max_lhs", "tail"};
  r.rows.resize(members.size());
  parallel_for(members.size(), c.threads, [&](std::size_t i) {
    const auto res = imaginary_power_representation_check(members[i], m, alpha);
    r.rows[i] = {static_cast<double>(i), res.max_residual, res.max_lhs, res.tail};
  });
  double worst = 0.0;
  for (const auto& row : r.rows) worst = std::max(worst, row[1]);
  r.summary = {{"max_residual", worst}};
}

void meda_run(const ExperimentConfig& c, ExperimentReport& r) {
  const auto m = config_symbol(c);
  const auto gamma = ones_or(c.alpha, c.dim);
  const auto growth =
      c.growth == "exponential" ? GrowthModel::exponential(c.omega) : GrowthModel::polynomial(c.growth_power);
  const auto res = meda_condition(m, gamma, growth);
  r.columns = {"axis", "u", "sup", "envelope"};
  for (std::size_t a = 0; a < res.axes.size(); ++a) {
    const auto& axis = res.axes[a];
    Series sup{"sup_axis" + std::to_string(a), {}}, env{"envelope_axis" + std::to_string(a), {}};
    for (std::size_t i = 0; i < axis.u.size(); ++i) {
      r.rows.push_back({static_cast<double>(a), axis.u[i], axis.sup[i], axis.envelope[i]});
      sup.points.emplace_back(axis.u[i], axis.sup[i]);
      env.points.emplace_back(axis.u[i], axis.envelope[i]);
    }
    r.series.push_back(std::move(sup));
    r.series.push_back(std::move(env));
  }
  r.summary = {{"finite", res.finite ? 1.0 : 0.0}, {"integral", res.integral}, {"truncated", res.truncated}};
  for (std::size_t a = 0; a < res.axes.size(); ++a)
    r.summary.emplace_back("cutoff_axis" + std::to_string(a), res.axes[a].cutoff);
}

void sobolev_run(const ExperimentConfig& c, ExperimentReport& r) {
  const auto grid = spatial_grid(c, c.cap + c.ell);
  const auto members = corpus(c, c.space());
  r.columns = {"id", "p", "negative_over_potential", "full_over_potential", "negative_over_full",
               "negative", "full", "potential"};
  for (double p : c.p) {
    const auto rep = sobolev_equivalence_experiment(members, c.ell, p, *c.beta, grid, c.threads);
    for (const auto& it : rep.items)
      r.rows.push_back({static_cast<double>(it.id), p, it.negative_over_potential, it.full_over_potential,
                        it.negative_over_full, it.negative, it.full, it.potential});
    add_summary(r, tag("negative_over_potential", p), rep.negative_over_potential);
    add_summary(r, tag("full_over_potential", p), rep.full_over_potential);
    add_summary(r, tag("negative_over_full", p), rep.negative_over_full);
  }
}

void triebel_run(const ExperimentConfig& c, ExperimentReport& r) {
  const auto sgrid = spatial_grid(c, c.cap);
  const TimeGrid tgrid(1, c.time_min, c.time_max, c.time_nodes);
  const auto members = corpus(c, c.space());
  MonteCarloConfig mc{c.draws, c.seed, 0};
  r.columns = {"id", "p", "ratio", "triebel", "potential", "triebel_std_error"};
  for (double p : c.p) {
    const auto rep = triebel_equivalence_experiment(members, *c.beta, c.k, p, tgrid, sgrid, mc, c.threads);
    for (const auto& it : rep.items)
      r.rows.push_back({static_cast<double>(it.id), p, it.ratio, it.triebel, it.potential, it.triebel_std_error});
    add_summary(r, tag("ratio", p), rep.summary);
  }
}

}  // namespace

ExperimentReport run(const ExperimentConfig& config) {
  const std::string context = "experiment '" + config.experiment + "': ";
  try {
    config.validate();
    ExperimentReport r;
    r.experiment = config.experiment;
    r.config = config.echo();
    r.semantic_config = config.semantic_echo();
    const auto& e = config.experiment;
    if (e == "basis") basis_experiment(config, r);
    else if (e == "kernel") kernel_experiment(config, r);
    else if (e == "equivalence") equivalence_run(config, r);
    else if (e == "polarization") polarization_run(config, r);
    else if (e == "mellin") mellin_run(config, r);
    else if (e == "representation") representation_run(config, r);
    else if (e == "meda") meda_run(config, r);
    else if (e == "sobolev") sobolev_run(config, r);
    else if (e == "triebel") triebel_run(config, r);
    seal(r);
    return r;
  } catch (const BudgetExceeded& err) {
    throw BudgetExceeded(context + err.what());
  } catch (const ValidationError& err) {
    throw ValidationError(context + err.what());
  } catch (const NonConvergence& err) {
    throw NonConvergence(context, err);
  } catch (const IoError& err) {
    throw IoError(context + err.what());
  }
}

}  // namespace hermite::runner
