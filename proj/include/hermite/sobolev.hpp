#pragma once

// Ladder operators A_{+-j}, index shifts, Hermite-Riesz transforms, tau_l, and
// the Sobolev / potential / Triebel-Lizorkin type norms built from them.

#include <span>
#include <vector>

#include "hermite/core.hpp"
#include "hermite/littlewood_paley.hpp"

namespace hermite {

// Axis j > 0 is A_j = d/dx_j + x_j (lowers degree); j < 0 is A_{-|j|} = -d/dx_j + x_j (raises).
class SignedAxis {
 public:
  explicit SignedAxis(int j);
  int value() const noexcept { return j_; }
  int axis() const noexcept { return (j_ > 0 ? j_ : -j_) - 1; }  // zero-based
  bool raises() const noexcept { return j_ < 0; }

 private:
  int j_;
};

// Raising past the cap grows the cap, so every ladder identity stays exact.
HermiteExpansion ladder_apply(const HermiteExpansion& e, SignedAxis j);
HermiteExpansion ladder_power(const HermiteExpansion& e, SignedAxis j, int power);

// Moves c_k to (k_1 - m_1, ..., k_split - m_split, k_{split+1} + m_{split+1}, ...),
// dropping indices that would go negative.
HermiteExpansion shift(const HermiteExpansion& e, const MultiIndex& m, int split);

// A_1^{m_1} ... A_split^{m_split} A_{-(split+1)}^{m_{split+1}} ... A_{-n}^{m_n} H^{-|m|/2}, in closed form.
HermiteExpansion riesz_transform(const HermiteExpansion& e, const MultiIndex& m, int split);

// tau_l = sum_j A_j^l H^{-l/2} A_{-j}^l H^{-l/2}: diagonal with
// 2^l sum_j prod_{r=1}^{l} (k_j + r) / ((2|k| + n + 2l)^{l/2} (2|k| + n)^{l/2}).
double tau_coefficient(const MultiIndex& k, int ell);
HermiteExpansion tau_operator(const HermiteExpansion& e, int ell);

enum class SobolevVariant {
  Full,      // all signed axes
  Negative,  // A_{-j} only
};

inline constexpr int kMaxSobolevWords = 2000;

// One operator word up to commutation of different axes, with the number of
// orderings that produce it.
struct LadderWord {
  // Per axis, the signed letters in operator order (leftmost applied last).
  std::vector<std::vector<int>> letters;
  int length = 0;
  double multiplicity = 1.0;
};

// Words of length 1..ell; throws BudgetExceeded above kMaxSobolevWords distinct words.
std::vector<LadderWord> sobolev_words(int dim, int ell, SobolevVariant variant);
HermiteExpansion apply_word(const HermiteExpansion& e, const LadderWord& word);

// ||f||_p + sum over all compositions A_{j_1} ... A_{j_m} f, 1 <= m <= ell.
// The grid must resolve degree cap + ell.
double sobolev_norm(const HermiteExpansion& e, int ell, double p, SobolevVariant variant, const SpatialGrid& grid);

// ||g||_p for f = H^{-beta} g.
double potential_norm(const HermiteExpansion& e, double beta, double p, const SpatialGrid& grid);

// ||f||_p + || t^{k-beta} d_t^k P_t f ||_{L^p(gamma)}.
double triebel_norm(const HermiteExpansion& e, double beta, int k, double p, const TimeGrid& tgrid,
                    const SpatialGrid& sgrid, const MonteCarloConfig& mc = {});

struct SobolevItem {
  std::size_t id = 0;
  double p = 0.0;
  double negative = 0.0;   // variant with A_{-j} only
  double full = 0.0;       // all signed axes
  double potential = 0.0;  // with the chosen beta
  double negative_over_potential = 0.0;
  double full_over_potential = 0.0;
  double negative_over_full = 0.0;
};

struct SobolevReport {
  std::vector<SobolevItem> items;
  RatioSummary negative_over_potential;
  RatioSummary full_over_potential;
  RatioSummary negative_over_full;
};

SobolevReport sobolev_equivalence_experiment(std::span<const HermiteExpansion> corpus, int ell, double p, double beta,
                                             const SpatialGrid& grid, int threads = 1);

struct TriebelItem {
  std::size_t id = 0;
  double p = 0.0;
  double triebel = 0.0;  // ||f||_p + square function norm
  double triebel_std_error = 0.0;
  double potential = 0.0;  // ||f||_p + ||H^{beta/2} f||_p
  double ratio = 0.0;
};

struct TriebelReport {
  std::vector<TriebelItem> items;
  RatioSummary summary;
};

// triebel_norm(beta, k) against lp + potential_norm(beta / 2): the square
// function t^{k-beta} d_t^k P_t scales like H^{beta/2} on every eigenfunction.
TriebelReport triebel_equivalence_experiment(std::span<const HermiteExpansion> corpus, double beta, int k, double p,
                                             const TimeGrid& tgrid, const SpatialGrid& sgrid,
                                             const MonteCarloConfig& mc = {}, int threads = 1);

}  // namespace hermite
