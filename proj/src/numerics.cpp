#include "treesic/numerics.hpp"

#include <cmath>

namespace treesic {

BigInt binomial_exact(unsigned long n, unsigned long k) {
    if (k > n) throw std::invalid_argument("binomial_exact: k > n");
    return BigInt::binomial(n, k);
}

double ln_factorial(unsigned long n) {
    return std::lgamma(static_cast<double>(n) + 1.0);
}

double ln_binomial(unsigned long n, unsigned long k) {
    if (k > n) throw std::invalid_argument("ln_binomial: k > n");
    return ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k);
}

namespace {

// Lanczos g = 7, 9 terms. Good to ~1e-13 relative on the right half-plane.
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

ComplexValue gamma_right_half(ComplexValue z) {
    // valid for Re z >= 0.5
    z -= 1.0;
    ComplexValue x = kLanczos[0];
    for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + static_cast<double>(i));
    ComplexValue t = z + kLanczosG + 0.5;
    return std::sqrt(2.0 * M_PI) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

}  // namespace

ComplexValue complex_gamma(ComplexValue z) {
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real())) {
        throw pole_error("complex_gamma: pole at non-positive integer " +
                         std::to_string(static_cast<long>(z.real())));
    }
    if (z.real() >= 0.5) return gamma_right_half(z);
    // Reflection: Gamma(z) = pi / (sin(pi z) * Gamma(1 - z)).
    ComplexValue s = std::sin(M_PI * z);
    if (s == ComplexValue(0.0, 0.0)) {
        throw pole_error("complex_gamma: pole detected by reflection");
    }
    return M_PI / (s * gamma_right_half(1.0 - z));
}

}  // namespace treesic
