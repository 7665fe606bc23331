#include "treesic/asymptotics.hpp"

#include <cmath>
#include <stdexcept>

namespace treesic {

namespace {

constexpr double kTau = 6.283185307179586476925286766559;

void check_K(int K) {
    if (K < 1) throw std::invalid_argument("asymptotics: K must be >= 1");
}

void check_n(double n) {
    if (!(n >= 1.0)) throw std::invalid_argument("asymptotics: n must be >= 1");
}

double oscillation(double n, const AsymptoticModel& model) {
    return 1.0 - model.amplitude * std::cos(kTau * std::log2(n) + model.phase);
}

}  // namespace

ComplexValue mellin_A(int K, int m) {
    check_K(K);
    const double w = kTau * m / M_LN2;
    // Build prod_{i<k} (i - 1 + jw) / k! one factor at a time; the running
    // term stays O(1) until k approaches |w|.
    ComplexValue sum = 1.0;
    ComplexValue term = 1.0;
    for (int k = 1; k <= K; ++k) {
        term *= ComplexValue(k - 2, w) / static_cast<double>(k);
        sum += term;
    }
    return sum;
}

ComplexValue mellin_B(int K, int m) {
    check_K(K);
    if (m == 0) throw pole_error("mellin_B: Gamma(-1) pole at m = 0");
    return complex_gamma(ComplexValue(-1.0, kTau * m / M_LN2)) * mellin_A(K, m);
}

double oscillation_amplitude(int K) {
    return 2.0 * K * std::abs(mellin_B(K, 1));
}

AsymptoticModel asymptotic_model(int K) {
    check_K(K);
    AsymptoticModel model;
    model.K = K;
    model.B_K1 = mellin_B(K, 1);
    model.amplitude = 2.0 * K * std::abs(model.B_K1);
    model.phase = std::arg(model.B_K1);
    model.mean_coefficient = 1.0 / (K * M_LN2);
    return model;
}

double asymptotic_cri(double n, int K) {
    check_n(n);
    const AsymptoticModel model = asymptotic_model(K);
    return n * model.mean_coefficient * oscillation(n, model);
}

double asymptotic_throughput(double n, int K) {
    check_n(n);
    const AsymptoticModel model = asymptotic_model(K);
    return M_LN2 / oscillation(n, model);
}

std::pair<double, double> asymptotic_no_sic(double n, int K) {
    return {2.0 * asymptotic_cri(n, K), 0.5 * asymptotic_throughput(n, K)};
}

double asymptotic_cri_multi(double n, int K, int M) {
    check_n(n);
    check_K(K);
    if (M < 1) throw std::invalid_argument("asymptotic_cri_multi: M must be >= 1");
    double osc = 1.0;
    for (int m = 1; m <= M; ++m) {
        const ComplexValue B = mellin_B(K, m);
        osc -= 2.0 * K * std::abs(B) * std::cos(kTau * m * std::log2(n) + std::arg(B));
    }
    return n / (K * M_LN2) * osc;
}

}  // namespace treesic
