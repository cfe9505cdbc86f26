#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hermite/multiplier.hpp"
#include "hermite/semigroup.hpp"
#include "oracles.hpp"

using namespace hermite;

namespace {

constexpr double kPi = std::numbers::pi;

HermiteExpansion random_expansion(int dim, int cap, std::uint64_t seed, bool complex_values = false) {
  auto gen = oracle::rng(seed);
  std::normal_distribution<double> normal;
  HermiteExpansion e(dim, cap, complex_values ? ValueSpace::complex() : ValueSpace::real());
  MultiIndex k(dim);
  while (true) {
    e.set(k, complex_values ? cplx(normal(gen), normal(gen)) : cplx(normal(gen)));
    int j = dim - 1;
    while (j >= 0 && k[j] == cap) k[j--] = 0;
    if (j < 0) break;
    ++k[j];
  }
  return e;
}

cplx mellin1(const MultiplierSymbol& m, int alpha, double t, double u, MellinOptions options = {}) {
  const double tt[] = {t};
  const double uu[] = {u};
  return mellin_value(m, MultiIndex{alpha}, tt, uu, options).value;
}

// 2 int_0^inf 2 |Gamma(1 - iu)| e^{omega u} du by a plain trapezoid on [0, 400].
double identity_meda_oracle(double omega) {
  const int n = 400000;
  const double h = 400.0 / n;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double u = i * h;
    const double f = 2.0 * std::sqrt(oracle::gamma_one_plus_iy_abs2(u)) * std::exp(omega * u);
    s += (i == 0 || i == n) ? 0.5 * f : f;
  }
  return 2.0 * s * h;
}

}  // namespace

TEST_CASE("mellin transform of the identity symbol matches the Gamma closed form") {
  const auto one = identity_symbol(1);
  double worst = 0.0;
  for (int alpha : {1, 2, 3})
    for (double t : {0.1, 1.0, 7.0})
      for (double u = -20.0; u <= 20.0; u += 0.5) {
        const cplx expected =
            std::pow(2.0, alpha) * std::polar(1.0, u * std::log(t / 2.0)) * oracle::gamma_stirling(cplx(alpha, -u));
        const cplx got = mellin1(one, alpha, t, u);
        worst = std::max(worst, std::abs(got - expected) / std::abs(expected));
      }
  CHECK(worst < 1e-6);
}

TEST_CASE("error estimate tracks the half-resolution difference") {
  const double t[] = {0.5};
  const double u[] = {3.0};
  const auto v = mellin_value(sector_rational_symbol(1), MultiIndex{1}, t, u);
  CHECK(v.error_estimate < 1e-10 * std::abs(v.value));
}

TEST_CASE("rotated contour agrees with the real-axis quadrature where both are accurate") {
  const auto m = sector_rational_symbol(1);
  MellinOptions straight;
  straight.rotate = false;
  for (double u : {-4.0, -0.7, 0.3, 2.5, 5.0}) {
    const cplx a = mellin1(m, 2, 0.8, u);
    const cplx b = mellin1(m, 2, 0.8, u, straight);
    CHECK(std::abs(a - b) < 1e-9 * std::abs(a));
  }
}

TEST_CASE("real symbols give conjugate-symmetric transforms") {
  for (const auto& m : {sector_rational_symbol(1), tau_inverse_symbol(1, 2), riesz_symbol(MultiIndex{1}, 0)}) {
    for (double u : {0.5, 3.0, 11.0}) {
      const cplx a = mellin1(m, 1, 0.3, u);
      const cplx b = mellin1(m, 1, 0.3, -u);
      CHECK(std::abs(a - std::conj(b)) < 1e-9 * std::abs(a));
    }
  }
}

TEST_CASE("separable factorization equals the generic tensor quadrature") {
  const auto m = sector_rational_symbol(2);
  MellinOptions generic;
  generic.force_generic = true;
  generic.nodes = 801;
  MellinOptions fact = generic;
  fact.force_generic = false;
  const MultiIndex alpha{1, 2};
  const double t[] = {0.4, 2.0};
  for (auto u : {std::array<double, 2>{0.0, 0.0}, std::array<double, 2>{3.0, -1.5}}) {
    const auto a = mellin_value(m, alpha, t, u, fact).value;
    const auto b = mellin_value(m, alpha, t, u, generic).value;
    CHECK(std::abs(a - b) < 1e-8 * std::abs(a));
  }
  // A non-separable symbol only has the generic path; for a product symbol written
  // as a whole it must agree with the factorization too.
  MultiplierSymbol whole("whole", 2, [](std::span<const cplx> z) {
    return std::sqrt(z[0] / (z[0] + 1.0)) * std::sqrt(z[1] / (z[1] + 1.0));
  });
  whole.with_sector(kPi - 0.01);
  const std::array<double, 2> u{1.0, 2.0};
  const auto a = mellin_value(m, alpha, t, u, fact).value;
  const auto b = mellin_value(whole, alpha, t, u, generic).value;
  CHECK(std::abs(a - b) < 1e-8 * std::abs(a));
}

TEST_CASE("mellin_transform samples agree with single values") {
  const auto m = sector_rational_symbol(1);
  const auto s = mellin_transform(m, MultiIndex{1}, {{0.2}, {3.0}}, {{-2.0}, {0.0}, {4.0}});
  REQUIRE(s.values.size() == 6);
  CHECK(std::abs(s.at(1, 2) - mellin1(m, 1, 3.0, 4.0)) < 1e-14);
  CHECK(s.max_error_estimate < 1e-8);
}

TEST_CASE("meda sup over t for the identity is 2 |Gamma(1 - iu)|") {
  const auto r = meda_condition(identity_symbol(1), MultiIndex{1}, GrowthModel::exponential(1.0));
  const auto& axis = r.axes.at(0);
  double worst = 0.0;
  for (std::size_t i = 0; i < axis.u.size(); ++i) {
    const double expected = 2.0 * std::sqrt(oracle::gamma_one_plus_iy_abs2(axis.u[i]));
    worst = std::max(worst, std::abs(axis.sup[i] - expected) / expected);
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("meda condition: finite below pi/2, infinite above") {
  const auto one = identity_symbol(1);
  const auto finite = meda_condition(one, MultiIndex{1}, GrowthModel::exponential(1.0));
  CHECK(finite.finite);
  const double oracle_value = identity_meda_oracle(1.0);
  CHECK(std::abs(finite.integral - oracle_value) < 0.05 * oracle_value);
  const auto infinite = meda_condition(one, MultiIndex{1}, GrowthModel::exponential(1.6));
  CHECK_FALSE(infinite.finite);
  CHECK(std::isinf(infinite.integral));
  // Doubling gamma leaves the verdict unchanged.
  CHECK(meda_condition(one, MultiIndex{2}, GrowthModel::exponential(1.0)).finite);
  CHECK_FALSE(meda_condition(one, MultiIndex{2}, GrowthModel::exponential(1.6)).finite);
  CHECK(meda_condition(one, MultiIndex{1}, GrowthModel::polynomial(3.0)).finite);
}

TEST_CASE("meda without sector metadata stops at the rounding floor") {
  // Straight contour: |M| drops below 1e-16 near |u| = 23, where e^{|u|} would
  // amplify pure noise. The estimator pulls the cutoff in and extrapolates.
  const auto plain = MultiplierSymbol::separable("one", {[](cplx) { return cplx(1.0); }});
  REQUIRE_FALSE(plain.sector());
  const auto r = meda_condition(plain, MultiIndex{1}, GrowthModel::exponential(1.0));
  const auto& axis = r.axes.at(0);
  CHECK(axis.cutoff < 40.0);
  CHECK(axis.cutoff > 10.0);
  CHECK(r.finite);
  const double oracle_value = identity_meda_oracle(1.0);
  CHECK(std::abs(r.integral - oracle_value) < 0.01 * oracle_value);
  CHECK_FALSE(meda_condition(plain, MultiIndex{1}, GrowthModel::exponential(1.6)).finite);
  // The rotated contour keeps every digit out to U.
  CHECK(meda_condition(identity_symbol(1), MultiIndex{1}, GrowthModel::exponential(1.0)).axes.at(0).cutoff == 40.0);
}

TEST_CASE("meda envelope dominates the sup for catalog symbols") {
  for (const auto& m : {sector_rational_symbol(1), tau_inverse_symbol(1, 1)}) {
    const auto r = meda_condition(m, MultiIndex{1}, GrowthModel::exponential(0.5));
    const auto& axis = r.axes.at(0);
    double inner = 0.0, outer = 0.0;
    for (std::size_t i = 0; i < axis.u.size(); ++i) {
      const double ratio = axis.sup[i] / axis.envelope[i];
      (std::abs(axis.u[i]) <= 20.0 ? inner : outer) = std::max(std::abs(axis.u[i]) <= 20.0 ? inner : outer, ratio);
    }
    CHECK(outer <= 2.0 * inner);
    CHECK(r.finite);
  }
}

TEST_CASE("meda in dimension 2 is the product of the axes") {
  const auto m2 = sector_rational_symbol(2);
  const auto m1 = sector_rational_symbol(1);
  const auto r2 = meda_condition(m2, MultiIndex{1, 1}, GrowthModel::exponential(0.5));
  const auto r1 = meda_condition(m1, MultiIndex{1}, GrowthModel::exponential(0.5));
  CHECK(r2.integral == doctest::Approx(r1.integral * r1.integral).epsilon(1e-10));
  MultiplierSymbol whole("whole", 2, [](std::span<const cplx> z) { return z[0] / (z[0] + z[1]); });
  CHECK_THROWS_AS(meda_condition(whole, MultiIndex{1, 1}, GrowthModel::exponential(0.5)), ValidationError);
}

TEST_CASE("representation through imaginary powers") {
  RepresentationOptions fast;
  fast.t_probes = 6;
  fast.x_probes = 7;
  SUBCASE("identity, dimension 1") {
    const auto r = imaginary_power_representation_check(random_expansion(1, 6, 7), identity_symbol(1), MultiIndex{1}, fast);
    CHECK(r.max_residual < 1e-4);
    CHECK(r.probes == 42);
  }
  SUBCASE("sector-rational, dimension 1, alpha 2") {
    const auto r =
        imaginary_power_representation_check(random_expansion(1, 6, 8), sector_rational_symbol(1), MultiIndex{2}, fast);
    CHECK(r.max_residual < 1e-4);
  }
  SUBCASE("separable symbol, dimension 2") {
    const auto r = imaginary_power_representation_check(random_expansion(2, 4, 9), sector_rational_symbol(2),
                                                        MultiIndex{1, 1}, fast);
    CHECK(r.max_residual < 1e-4);
  }
  SUBCASE("non-catalog holomorphic symbol, alpha 3") {
    MultiplierSymbol shifted("shifted", 1, [](std::span<const cplx> z) { return std::sqrt(z[0] / (z[0] + 2.0)); });
    shifted.with_sector(kPi - 0.01);
    const auto r = imaginary_power_representation_check(random_expansion(1, 6, 10), shifted, MultiIndex{3}, fast);
    CHECK(r.max_residual < 1e-4);
  }
  SUBCASE("validation") {
    CHECK_THROWS_AS(imaginary_power_representation_check(random_expansion(1, 7, 1), identity_symbol(1), MultiIndex{1}),
                    ValidationError);
    CHECK_THROWS_AS(imaginary_power_representation_check(random_expansion(1, 3, 1), identity_symbol(1), MultiIndex{0}),
                    ValidationError);
    MultiplierSymbol whole("whole", 2, [](std::span<const cplx> z) { return z[0] / (z[0] + z[1]); });
    CHECK_THROWS_AS(imaginary_power_representation_check(random_expansion(2, 3, 1), whole, MultiIndex{1, 1}),
                    ValidationError);
  }
}

TEST_CASE("imaginary powers: isometry and group law") {
  const auto e = random_expansion(2, 5, 21, true);
  const double b1[] = {0.7, -1.3};
  const double b2[] = {2.1, 0.4};
  const double b12[] = {2.8, -0.9};
  const auto a = imaginary_power(e, b1);
  CHECK(a.coefficient_norm() == doctest::Approx(e.coefficient_norm()).epsilon(1e-13));
  CHECK(max_coefficient_difference(imaginary_power(a, b2), imaginary_power(e, b12)) < 1e-12);
  const double minus[] = {-0.7, 1.3};
  CHECK(max_coefficient_difference(imaginary_power(a, minus), e) < 1e-12);
  CHECK(max_coefficient_difference(apply_multiplier(e, imaginary_power_symbol(b1)), a) < 1e-12);
  // Single coefficient: (2k+1)^{i beta}
  HermiteExpansion one(1, 4);
  one.set(MultiIndex{3}, 1.0);
  const double beta[] = {0.5};
  CHECK(std::abs(imaginary_power(one, beta).at(MultiIndex{3})[0] - std::polar(1.0, 0.5 * std::log(7.0))) < 1e-15);
}

TEST_CASE("multipliers compose and commute with the semigroups") {
  const auto e = random_expansion(2, 6, 31);
  const auto m1 = sector_rational_symbol(2);
  const auto m2 = tau_inverse_symbol(2, 2);
  MultiplierSymbol product("product", 2, [m1, m2](std::span<const cplx> z) { return m1.evaluate(z) * m2.evaluate(z); });
  CHECK(max_coefficient_difference(apply_multiplier(apply_multiplier(e, m2), m1), apply_multiplier(e, product)) < 1e-12);
  CHECK(max_coefficient_difference(apply_multiplier(heat_apply(e, 0.3), m1), heat_apply(apply_multiplier(e, m1), 0.3)) <
        1e-13);
  CHECK(max_coefficient_difference(apply_multiplier(poisson_apply(e, 0.3), m2),
                                   poisson_apply(apply_multiplier(e, m2), 0.3)) < 1e-13);
}

TEST_CASE("catalog symbol values") {
  const double l3[] = {3.0};
  CHECK(riesz_symbol(MultiIndex{1}, 0)(l3).real() == doctest::Approx(std::sqrt(4.0 / 3.0)));
  CHECK(riesz_symbol(MultiIndex{1}, 1)(l3).real() == doctest::Approx(std::sqrt(4.0 / 5.0)));
  CHECK(tau_inverse_symbol(1, 1)(l3).real() == doctest::Approx(2.0 * std::sqrt(15.0) / 4.0));
  CHECK(sector_rational_symbol(1)(l3).real() == doctest::Approx(std::sqrt(0.75)));
  const double l2[] = {1.0, 5.0};
  // orders (1, 1), split 1: sqrt(z1 + 1) sqrt(z2 + 1) / (z1 + z2 + 2)
  CHECK(riesz_symbol(MultiIndex{1, 1}, 1)(l2).real() == doctest::Approx(std::sqrt(2.0 * 6.0) / 8.0));
  CHECK(identity_symbol(3).lattice_bound(4) == 1.0);
  CHECK(riesz_symbol(MultiIndex{1}, 0).lattice_bound(10) == doctest::Approx(std::sqrt(2.0)));
  for (const auto& name : catalog_names()) CHECK(catalog_symbol(name, 2).dim() == 2);
  CHECK_THROWS_AS(catalog_symbol("nope", 1), ValidationError);
  CHECK_THROWS_AS(riesz_symbol(MultiIndex{1}, 2), ValidationError);
}

TEST_CASE("symbol validation") {
  MultiplierSymbol pole("pole", 1, [](std::span<const cplx> z) { return 1.0 / (z[0] - 3.0); });
  HermiteExpansion e(1, 3);
  e.set(MultiIndex{1}, 1.0);
  CHECK_THROWS_AS(apply_multiplier(e, pole), ValidationError);
  CHECK_THROWS_AS(apply_multiplier(e, identity_symbol(2)), ValidationError);
  CHECK_THROWS_AS(MultiplierSymbol("bad", 4, [](std::span<const cplx>) { return cplx(1.0); }), ValidationError);
  const double t[] = {0.0};
  const double u[] = {1.0};
  CHECK_THROWS_AS(mellin_value(identity_symbol(1), MultiIndex{1}, t, u), ValidationError);
  CHECK_THROWS_AS(GrowthModel::exponential(-1.0), ValidationError);
}
