#pragma once

#include <complex>

namespace hermite {

// log Gamma(z) for complex z away from the poles. Lanczos (g = 7, 9 terms) on
// Re z >= 1/2, reflection elsewhere. The imaginary part is a continuous log, not
// necessarily the principal branch; exp() of it is Gamma(z).
std::complex<double> log_gamma(std::complex<double> z);
std::complex<double> gamma(std::complex<double> z);

// log sin(pi z) without overflow for large |Im z|.
std::complex<double> log_sin_pi(std::complex<double> z);

}  // namespace hermite
