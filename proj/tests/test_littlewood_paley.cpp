#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hermite/littlewood_paley.hpp"
#include "oracles.hpp"

using namespace hermite;

namespace {

HermiteExpansion basis(int dim, MultiIndex k, int cap = 8, ValueSpace space = ValueSpace::real()) {
  HermiteExpansion e(dim, cap, space);
  e.set(k, Value(static_cast<std::size_t>(space.components()), 1.0));
  return e;
}

HermiteExpansion random_expansion(int dim, int degree, std::uint64_t seed, ValueSpace space = ValueSpace::real()) {
  auto gen = oracle::rng(seed);
  std::normal_distribution<double> normal;
  HermiteExpansion e(dim, degree, space);
  MultiIndex k(dim);
  while (true) {
    if (k.order() <= degree) {
      Value v(static_cast<std::size_t>(space.components()));
      for (auto& z : v) z = space.kind() == ValueSpace::Kind::Complex ? cplx(normal(gen), normal(gen)) : cplx(normal(gen));
      e.set(k, v);
    }
    int j = dim - 1;
    while (j >= 0 && k[j] == degree) k[j--] = 0;
    if (j < 0) break;
    ++k[j];
  }
  return e;
}

std::vector<Value> random_field(std::size_t n, int width, std::uint64_t seed) {
  auto gen = oracle::rng(seed);
  std::normal_distribution<double> normal;
  std::vector<Value> f(n, Value(static_cast<std::size_t>(width)));
  for (auto& v : f)
    for (auto& z : v) z = cplx(normal(gen), normal(gen));
  return f;
}

}  // namespace

TEST_CASE("time grid weights") {
  for (int dim : {1, 2}) {
    const TimeGrid g(dim);
    double s = 0.0;
    for (double w : g.axis_weights()) s += w;
    CHECK(std::abs(s - std::log(40.0 / 1e-4)) < 1e-12);
    for (std::size_t i = 1; i < g.axis_nodes().size(); ++i) CHECK(g.axis_nodes()[i] > g.axis_nodes()[i - 1]);
    double total = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) total += g.weight(i);
    CHECK(total == doctest::Approx(std::pow(std::log(4e5), dim)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(TimeGrid(1, 0.0, 1.0), ValidationError);
}

TEST_CASE("H^n norm of t e^{-t}") {
  const TimeGrid g;
  std::vector<cplx> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = g.axis_nodes()[i] * std::exp(-g.axis_nodes()[i]);
  CHECK(std::abs(hn_norm(v, g) - 0.5) < 1e-6);
  std::vector<cplx> scaled = v;
  for (auto& z : scaled) z *= cplx(0.0, -3.0);
  CHECK(hn_norm(scaled, g) == doctest::Approx(3.0 * hn_norm(v, g)).epsilon(1e-14));
  std::vector<cplx> zero(g.size());
  CHECK(hn_norm(zero, g) == 0.0);
}

TEST_CASE("g-field on basis functions") {
  const TimeGrid tg(1, 1e-4, 40.0, 40);
  const auto sg = default_grid(1, 8, 64);
  const auto field = g_field(basis(1, {0}), {1}, tg, sg);
  for (std::size_t x = 0; x < sg.size(); x += 9)
    for (std::size_t t = 0; t < tg.size(); t += 3) {
      const double tv = tg.axis_nodes()[t];
      const double expect = -tv * std::exp(-tv) * eval_hermite(0, sg.axis_nodes()[x]);
      CHECK(field.values[x * field.time_nodes + t][0].real() == doctest::Approx(expect).epsilon(1e-13).scale(1e-300));
    }

  const TimeGrid tg2(2, 1e-3, 20.0, 12);
  const auto sg2 = default_grid(2, 4, 64);
  const auto f2 = g_field(basis(2, {0, 0}), {1, 1}, tg2, sg2);
  for (std::size_t x = 0; x < sg2.size(); x += 301)
    for (std::size_t t = 0; t < tg2.size(); t += 7) {
      const auto tp = tg2.point(t);
      const auto xp = sg2.point(x);
      const double expect = tp[0] * tp[1] * std::exp(-tp[0] - tp[1]) * eval_hermite(0, xp[0]) * eval_hermite(0, xp[1]);
      CHECK(f2.values[x * f2.time_nodes + t][0].real() == doctest::Approx(expect).epsilon(1e-13).scale(1e-300));
    }
  CHECK_THROWS_AS(g_field(basis(1, {0}), {0}, tg, sg), ValidationError);
}

TEST_CASE("g-field is linear") {
  const TimeGrid tg(1, 1e-3, 30.0, 30);
  const auto sg = default_grid(1, 6, 64);
  const auto a = random_expansion(1, 6, 1), b = random_expansion(1, 6, 2);
  const auto fa = g_field(a, {2}, tg, sg), fb = g_field(b, {2}, tg, sg);
  const auto fab = g_field(a.scaled(2.0) + b, {2}, tg, sg);
  for (std::size_t i = 0; i < fab.values.size(); i += 13)
    CHECK(std::abs(fab.values[i][0] - 2.0 * fa.values[i][0] - fb.values[i][0]) < 1e-12);
}

TEST_CASE("gamma-norm of scalar fields") {
  const TimeGrid g(1, 1e-4, 40.0, 200);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto field = random_field(g.size(), 1, 100 + seed);
    std::vector<cplx> scalar(field.size());
    for (std::size_t i = 0; i < field.size(); ++i) scalar[i] = field[i][0];
    const double hn = hn_norm(scalar, g);
    CHECK(std::abs(gamma_norm_exact(field, g) - hn) < 1e-10 * hn);
    const auto mc = gamma_norm(field, g, ValueSpace::complex(), 2000, 7, seed);
    CHECK(std::abs(mc.value - hn) < 3.0 * mc.std_error);
  }
  std::vector<Value> zero(g.size(), Value{0.0});
  const auto z = gamma_norm(zero, g, ValueSpace::real(), 200, 1);
  CHECK(z.value == 0.0);
  CHECK_THROWS_AS(gamma_norm(zero, g, ValueSpace::real(), 50, 1), ValidationError);
}

TEST_CASE("gamma-norm into l^2 is the Hilbert-Schmidt norm") {
  const TimeGrid g(1, 1e-3, 10.0, 60);
  const auto field = random_field(g.size(), 3, 5);
  const double hs = gamma_norm_exact(field, g);
  const auto mc = gamma_norm(field, g, ValueSpace::lq(2.0, 3), 2000, 9);
  CHECK(std::abs(mc.value - hs) < 3.0 * mc.std_error);
}

TEST_CASE("gamma-norm does not depend on the orthonormal basis") {
  const TimeGrid g(1, 1e-2, 10.0, 24);
  auto gen = oracle::rng(77);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd a(24, 24);
  for (int i = 0; i < 24; ++i)
    for (int j = 0; j < 24; ++j) a(i, j) = normal(gen);
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ();
  for (int width : {1, 3}) {
    const auto field = random_field(g.size(), width, 31 + width);
    std::vector<Value> images(field.size()), rotated(field.size(), Value(static_cast<std::size_t>(width)));
    for (std::size_t j = 0; j < field.size(); ++j) {
      images[j] = field[j];
      for (auto& z : images[j]) z *= std::sqrt(g.weight(j));
    }
    for (int i = 0; i < 24; ++i)
      for (int j = 0; j < 24; ++j)
        for (int c = 0; c < width; ++c) rotated[i][c] += q(i, j) * images[j][c];
    CHECK(std::abs(gamma_norm_exact(rotated) - gamma_norm_exact(images)) < 1e-10 * gamma_norm_exact(images));
    if (width == 3) {
      const auto space = ValueSpace::lq(3.0, 3);
      const auto a1 = gamma_norm_images(images, space, 4000, 1);
      const auto a2 = gamma_norm_images(rotated, space, 4000, 2);
      CHECK(std::abs(a1.value - a2.value) < 3.0 * std::hypot(a1.std_error, a2.std_error));
    }
  }
}

TEST_CASE("L^p norms of g-functions") {
  const TimeGrid tg;
  const auto sg = default_grid(1, 10);
  const auto h0 = basis(1, {0}, 10);
  CHECK(std::abs(g_norm_field(h0, {1}, 2.0, tg, sg).value - 0.5) < 1e-5);
  const auto r = random_expansion(1, 10, 4);
  CHECK(g_norm_field(r.scaled(-4.0), {2}, 3.0, tg, sg).value ==
        doctest::Approx(4.0 * g_norm_field(r, {2}, 3.0, tg, sg).value).epsilon(1e-12));
  // Duplicating a scalar field across l^2_3 multiplies the norm by sqrt(3).
  HermiteExpansion dup(1, 10, ValueSpace::lq(2.0, 3));
  for (const auto& [k, c] : r.coeffs()) dup.set(k, Value(3, c[0]));
  CHECK(g_norm_field(dup, {1}, 1.5, tg, sg).value ==
        doctest::Approx(std::sqrt(3.0) * g_norm_field(r, {1}, 1.5, tg, sg).value).epsilon(1e-12));
}

TEST_CASE("Gram route and materialized field agree") {
  const TimeGrid tg(1, 1e-4, 40.0, 200);
  const auto sg = default_grid(1, 8, 64);
  const auto r = random_expansion(1, 8, 21, ValueSpace::complex());
  const auto norm = g_norm_field(r, {2}, 2.0, tg, sg);
  const auto field = g_field(r, {2}, tg, sg);
  for (std::size_t x = 0; x < sg.size(); x += 5) {
    const double direct = gamma_norm_exact(field.at_node(x), tg);
    CHECK(std::abs(norm.pointwise[x] - direct) <= 1e-10 * std::max(1e-6, direct));
  }

  // l^3 targets: covariance route against literal Gaussian sums at a few nodes.
  const auto v = random_expansion(1, 6, 23, ValueSpace::lq(3.0, 2));
  MonteCarloConfig mc;
  mc.seed = 5;
  mc.draws = 3000;
  const auto est = g_norm_field(v, {1}, 2.0, tg, sg, mc);
  const auto vf = g_field(v, {1}, tg, sg);
  for (std::size_t x : {20u, 32u, 41u}) {
    const auto lit = gamma_norm(vf.at_node(x), tg, v.space(), 3000, 99, x);
    CHECK(std::abs(lit.value - est.pointwise[x]) < 3.0 * std::sqrt(2.0) * lit.std_error);
  }
  CHECK(est.std_error > 0.0);
  CHECK_FALSE(est.exact);
  MonteCarloConfig no_seed;
  CHECK_THROWS_AS(g_norm_field(v, {1}, 2.0, tg, sg, no_seed), ValidationError);
}

TEST_CASE("fractional square function of integer order matches the g-function") {
  const TimeGrid tg;
  const auto sg = default_grid(1, 8, 128);
  const auto r = random_expansion(1, 8, 31);
  const auto frac = square_function_norm(r, SquareFunction::fractional(FractionalOrder(1.0)), 2.5, tg, sg);
  const auto g = g_norm_field(r, {1}, 2.5, tg, sg);
  CHECK(frac.value == doctest::Approx(g.value).epsilon(1e-9));
}

TEST_CASE("Triebel square function on h_0") {
  const TimeGrid tg;
  const auto sg = default_grid(1, 4);
  const auto h0 = basis(1, {0}, 4);
  for (double p : {1.5, 2.0, 3.0}) {
    const auto sq = square_function_norm(h0, SquareFunction::triebel(1.0, 2), p, tg, sg);
    CHECK(sq.value == doctest::Approx(0.5 * lp_norm(h0, p, sg)).epsilon(1e-6));
  }
  CHECK_THROWS_AS(SquareFunction::triebel(2.0, 2), ValidationError);
}

TEST_CASE("polarization identity") {
  const TimeGrid tg;
  const auto sg = default_grid(1, 8);
  const auto h0 = basis(1, {0});
  const auto same = polarization_check(h0, h0, {1}, tg, sg);
  CHECK(same.lhs == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(same.rhs == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(same.residual < 1e-6);
  const auto orth = polarization_check(h0, basis(1, {1}), {1}, tg, sg);
  CHECK(std::abs(orth.lhs) < 1e-12);
  CHECK(std::abs(orth.rhs) < 1e-12);

  const TimeGrid tg2(2);
  const auto sg2 = default_grid(2, 8);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto f = random_expansion(2, 8, 200 + seed), g = random_expansion(2, 8, 300 + seed);
    CHECK(polarization_check(f, g, {2, 1}, tg2, sg2).residual < 1e-5);
  }

  // Independent route for n = 1: sum over the materialized fields.
  const TimeGrid tgs(1, 1e-4, 40.0, 200);
  const auto sgs = default_grid(1, 8, 128);
  const auto f = random_expansion(1, 8, 7), g = random_expansion(1, 8, 8);
  const auto ff = g_field(f, {2}, tgs, sgs), gf = g_field(g, {2}, tgs, sgs);
  double direct = 0.0;
  for (std::size_t x = 0; x < sgs.size(); ++x)
    for (std::size_t t = 0; t < tgs.size(); ++t)
      direct += sgs.weight(x) * tgs.weight(t) * (ff.values[x * ff.time_nodes + t][0] * gf.values[x * gf.time_nodes + t][0]).real();
  const auto pol = polarization_check(f, g, {2}, tgs, sgs);
  CHECK(pol.lhs == doctest::Approx(direct).epsilon(1e-10));
  CHECK(pol.residual < 1e-5);

  // l^3 values paired with l^{3/2}.
  const auto fv = random_expansion(1, 6, 41, ValueSpace::lq(3.0, 2));
  const auto gv = random_expansion(1, 6, 42, ValueSpace::lq(1.5, 2));
  CHECK(polarization_check(fv, gv, {1}, tg, sg).residual < 1e-5);
  CHECK_THROWS_AS(polarization_check(fv, fv, {1}, tg, sg), ValidationError);
}

TEST_CASE("equivalence experiment") {
  const TimeGrid tg;
  const auto sg = default_grid(1, 10);
  std::vector<HermiteExpansion> corpus{basis(1, {0}, 10)};
  const auto one = equivalence_experiment(corpus, SquareFunction::g_function({1}), 2.0, tg, sg);
  CHECK(one.items.size() == 1);
  CHECK(std::abs(one.items[0].ratio - 0.5) < 1e-5);

  std::vector<HermiteExpansion> random, scaled;
  for (std::uint64_t s = 0; s < 10; ++s) {
    random.push_back(random_expansion(1, 10, 500 + s));
    scaled.push_back(random.back().scaled(10.0));
  }
  const auto a = equivalence_experiment(random, SquareFunction::g_function({1}), 2.0, tg, sg);
  for (const auto& item : a.items) CHECK(std::abs(item.ratio - 0.5) < 1e-5);
  const auto b = equivalence_experiment(scaled, SquareFunction::g_function({1}), 2.0, tg, sg);
  for (std::size_t i = 0; i < a.items.size(); ++i)
    CHECK(std::abs(a.items[i].ratio - b.items[i].ratio) < 1e-10 * a.items[i].ratio);
  CHECK(a.summary.min <= a.summary.median);
  CHECK(a.summary.median <= a.summary.max);

  std::vector<HermiteExpansion> bad{HermiteExpansion(1, 4)};
  CHECK_THROWS_AS(equivalence_experiment(bad, SquareFunction::g_function({1}), 2.0, tg, sg), ValidationError);
}
