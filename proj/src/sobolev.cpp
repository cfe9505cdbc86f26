#include "hermite/sobolev.hpp"

#include <cmath>
#include <functional>

#include "hermite/parallel.hpp"
#include "hermite/semigroup.hpp"

namespace hermite {

SignedAxis::SignedAxis(int j) : j_(j) {
  if (j == 0 || j > kMaxDim || j < -kMaxDim) throw ValidationError("SignedAxis: need 1 <= |j| <= 3");
}

namespace {

void check_axis(const HermiteExpansion& e, SignedAxis j) {
  if (j.axis() >= e.dim()) throw ValidationError("ladder: axis exceeds the dimension");
}

void check_split(const HermiteExpansion& e, const MultiIndex& m, int split) {
  if (m.dim() != e.dim()) throw ValidationError("shift/riesz: multi-index dimension differs from the expansion");
  if (split < 0 || split > e.dim()) throw ValidationError("shift/riesz: split index out of range");
  for (int l = 0; l < m.dim(); ++l)
    if (m[l] < 0) throw ValidationError("shift/riesz: orders must be non-negative");
}

HermiteExpansion empty_like(const HermiteExpansion& e) { return HermiteExpansion(e.dim(), e.cap(), e.space()); }

}  // namespace

HermiteExpansion ladder_apply(const HermiteExpansion& e, SignedAxis j) {
  check_axis(e, j);
  const int axis = j.axis();
  HermiteExpansion out = empty_like(e);
  for (const auto& [k, c] : e.coeffs()) {
    MultiIndex target = k;
    if (j.raises()) {
      target[axis] += 1;
      out.accumulate(target, c, std::sqrt(2.0 * (k[axis] + 1)));
    } else if (k[axis] > 0) {
      target[axis] -= 1;
      out.accumulate(target, c, std::sqrt(2.0 * k[axis]));
    }
  }
  return out;
}

HermiteExpansion ladder_power(const HermiteExpansion& e, SignedAxis j, int power) {
  if (power < 0) throw ValidationError("ladder_power: negative power");
  HermiteExpansion out = e;
  for (int i = 0; i < power; ++i) out = ladder_apply(out, j);
  return out;
}

HermiteExpansion shift(const HermiteExpansion& e, const MultiIndex& m, int split) {
  check_split(e, m, split);
  HermiteExpansion out = empty_like(e);
  for (const auto& [k, c] : e.coeffs()) {
    MultiIndex target = k;
    bool keep = true;
    for (int l = 0; l < e.dim(); ++l) {
      target[l] += l < split ? -m[l] : m[l];
      keep = keep && target[l] >= 0;
    }
    if (keep) out.accumulate(target, c);
  }
  return out;
}

HermiteExpansion riesz_transform(const HermiteExpansion& e, const MultiIndex& m, int split) {
  check_split(e, m, split);
  HermiteExpansion out = empty_like(e);
  const double order = m.order();
  for (const auto& [k, c] : e.coeffs()) {
    MultiIndex target = k;
    double factor = 1.0;
    bool keep = true;
    for (int l = 0; l < e.dim() && keep; ++l) {
      if (l < split) {
        keep = k[l] >= m[l];
        for (int s = 0; s < m[l] && keep; ++s) factor *= std::sqrt(2.0 * (k[l] - s));
        target[l] -= m[l];
      } else {
        for (int s = 1; s <= m[l]; ++s) factor *= std::sqrt(2.0 * (k[l] + s));
        target[l] += m[l];
      }
    }
    if (!keep) continue;
    factor /= std::pow(k.eigenvalue(), order / 2.0);
    out.accumulate(target, c, factor);
  }
  return out;
}

double tau_coefficient(const MultiIndex& k, int ell) {
  double sum = 0.0;
  for (int j = 0; j < k.dim(); ++j) {
    double prod = 1.0;
    for (int r = 1; r <= ell; ++r) prod *= k[j] + r;
    sum += prod;
  }
  const double lambda = k.eigenvalue();
  return std::ldexp(sum, ell) / (std::pow(lambda + 2.0 * ell, ell / 2.0) * std::pow(lambda, ell / 2.0));
}

HermiteExpansion tau_operator(const HermiteExpansion& e, int ell) {
  if (ell < 1) throw ValidationError("tau_operator: ell must be >= 1");
  return e.map_diagonal([ell](const MultiIndex& k) { return cplx(tau_coefficient(k, ell)); }, false);
}

// ---- words ------------------------------------------------------------------

std::vector<LadderWord> sobolev_words(int dim, int ell, SobolevVariant variant) {
  if (dim < 1 || dim > kMaxDim) throw ValidationError("sobolev_words: dimension must be in 1..3");
  if (ell < 1) throw ValidationError("sobolev_words: ell must be >= 1");
  const double letters_per_axis = variant == SobolevVariant::Full ? 2.0 : 1.0;
  // Count distinct words first: sum over lengths and per-axis splits of prod letters^len.
  double distinct = 0.0;
  {
    // Number of per-axis sign strings with total length <= ell: coefficient sums of prod_j 1/(1 - a x).
    std::vector<double> ways(static_cast<std::size_t>(ell) + 1, 0.0);
    ways[0] = 1.0;
    for (int j = 0; j < dim; ++j) {
      std::vector<double> next(ways.size(), 0.0);
      for (int a = 0; a <= ell; ++a)
        for (int b = 0; a + b <= ell; ++b) next[static_cast<std::size_t>(a + b)] += ways[static_cast<std::size_t>(a)] * std::pow(letters_per_axis, b);
      ways = std::move(next);
    }
    for (int m = 1; m <= ell; ++m) distinct += ways[static_cast<std::size_t>(m)];
  }
  if (distinct > kMaxSobolevWords)
    throw BudgetExceeded("sobolev_norm: " + std::to_string(static_cast<long long>(distinct)) +
                         " distinct ladder words exceed the budget of " + std::to_string(kMaxSobolevWords));

  std::vector<LadderWord> words;
  LadderWord current;
  current.letters.assign(static_cast<std::size_t>(dim), {});
  // Fill axis by axis with `remaining` letters still allowed.
  std::function<void(int, int)> fill = [&](int axis, int remaining) {
    if (axis == dim) {
      if (current.length == 0) return;
      double mult = std::tgamma(current.length + 1.0);
      for (const auto& seq : current.letters) mult /= std::tgamma(static_cast<double>(seq.size()) + 1.0);
      current.multiplicity = std::round(mult);
      words.push_back(current);
      return;
    }
    auto& seq = current.letters[static_cast<std::size_t>(axis)];
    std::function<void(int)> extend = [&](int room) {
      fill(axis + 1, room);
      if (room == 0) return;
      for (int sign : {-1, 1}) {
        if (sign > 0 && variant == SobolevVariant::Negative) continue;
        seq.push_back(sign * (axis + 1));
        ++current.length;
        extend(room - 1);
        --current.length;
        seq.pop_back();
      }
    };
    extend(remaining);
  };
  fill(0, ell);
  return words;
}

HermiteExpansion apply_word(const HermiteExpansion& e, const LadderWord& word) {
  HermiteExpansion out = e;
  for (const auto& seq : word.letters)
    for (auto it = seq.rbegin(); it != seq.rend(); ++it) out = ladder_apply(out, SignedAxis(*it));
  return out;
}

// ---- norms ------------------------------------------------------------------

double sobolev_norm(const HermiteExpansion& e, int ell, double p, SobolevVariant variant, const SpatialGrid& grid) {
  if (e.cap() + ell > grid.design_cap())
    throw ValidationError("sobolev_norm: the grid does not resolve degree cap + ell");
  const auto words = sobolev_words(e.dim(), ell, variant);
  double total = lp_norm(e, p, grid);
  for (const auto& w : words) total += w.multiplicity * lp_norm(apply_word(e, w), p, grid);
  return total;
}

double potential_norm(const HermiteExpansion& e, double beta, double p, const SpatialGrid& grid) {
  if (!(beta > 0.0)) throw ValidationError("potential_norm: beta must be positive");
  return lp_norm(power(e, beta), p, grid);
}

double triebel_norm(const HermiteExpansion& e, double beta, int k, double p, const TimeGrid& tgrid,
                    const SpatialGrid& sgrid, const MonteCarloConfig& mc) {
  const auto sf = SquareFunction::triebel(beta, k);
  return lp_norm(e, p, sgrid) + square_function_norm(e, sf, p, tgrid, sgrid, mc).value;
}

// ---- experiments ------------------------------------------------------------

SobolevReport sobolev_equivalence_experiment(std::span<const HermiteExpansion> corpus, int ell, double p, double beta,
                                             const SpatialGrid& grid, int threads) {
  if (corpus.empty()) throw ValidationError("sobolev_equivalence_experiment: empty corpus");
  SobolevReport report;
  report.items.resize(corpus.size());
  parallel_for(corpus.size(), threads, [&](std::size_t id) {
    const auto& f = corpus[id];
    SobolevItem item;
    item.id = id;
    item.p = p;
    item.potential = potential_norm(f, beta, p, grid);
    if (!(item.potential >= kDegenerateNorm))
      throw ValidationError("sobolev_equivalence_experiment: corpus member " + std::to_string(id) + " has zero norm");
    item.negative = sobolev_norm(f, ell, p, SobolevVariant::Negative, grid);
    item.full = sobolev_norm(f, ell, p, SobolevVariant::Full, grid);
    item.negative_over_potential = item.negative / item.potential;
    item.full_over_potential = item.full / item.potential;
    item.negative_over_full = item.negative / item.full;
    report.items[id] = item;
  });
  std::vector<double> a, b, c;
  for (const auto& item : report.items) {
    a.push_back(item.negative_over_potential);
    b.push_back(item.full_over_potential);
    c.push_back(item.negative_over_full);
  }
  report.negative_over_potential = summarize_ratios(a);
  report.full_over_potential = summarize_ratios(b);
  report.negative_over_full = summarize_ratios(c);
  return report;
}

TriebelReport triebel_equivalence_experiment(std::span<const HermiteExpansion> corpus, double beta, int k, double p,
                                             const TimeGrid& tgrid, const SpatialGrid& sgrid,
                                             const MonteCarloConfig& mc, int threads) {
  if (corpus.empty()) throw ValidationError("triebel_equivalence_experiment: empty corpus");
  const auto sf = SquareFunction::triebel(beta, k);
  TriebelReport report;
  report.items.resize(corpus.size());
  parallel_for(corpus.size(), threads, [&](std::size_t id) {
    const auto& f = corpus[id];
    const double lp = lp_norm(f, p, sgrid);
    if (!(lp >= kDegenerateNorm))
      throw ValidationError("triebel_equivalence_experiment: corpus member " + std::to_string(id) + " has zero norm");
    MonteCarloConfig item_mc = mc;
    item_mc.item = mc.item + id;
    const auto sq = square_function_norm(f, sf, p, tgrid, sgrid, item_mc);
    TriebelItem item;
    item.id = id;
    item.p = p;
    item.triebel = lp + sq.value;
    item.triebel_std_error = sq.std_error;
    item.potential = lp + potential_norm(f, beta / 2.0, p, sgrid);
    item.ratio = item.triebel / item.potential;
    report.items[id] = item;
  });
  std::vector<double> ratios;
  for (const auto& item : report.items) ratios.push_back(item.ratio);
  report.summary = summarize_ratios(ratios);
  return report;
}

}  // namespace hermite
