#include "hermite/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace hermite {

namespace {

using cplx = std::complex<double>;

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

}  // namespace

cplx log_sin_pi(cplx z) {
  constexpr double pi = std::numbers::pi;
  if (z.imag() < 0.0) return std::conj(log_sin_pi(std::conj(z)));
  // sin(pi z) = -e^{-i pi z} (1 - e^{2 i pi z}) / (2i); |e^{2 i pi z}| <= 1 here.
  const cplx i(0.0, 1.0);
  return -i * pi * z + std::log(1.0 - std::exp(2.0 * i * pi * z)) - std::log(2.0 * i) + i * pi;
}

cplx log_gamma(cplx z) {
  if (z.real() < 0.5) {
    return std::log(std::numbers::pi) - log_sin_pi(z) - log_gamma(1.0 - z);
  }
  z -= 1.0;
  cplx x = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) x += kLanczos[i] / (z + static_cast<double>(i));
  const cplx t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

cplx gamma(cplx z) { return std::exp(log_gamma(z)); }

}  // namespace hermite
