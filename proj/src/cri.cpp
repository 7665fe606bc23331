#include "treesic/cri.hpp"

#include <cmath>
#include <numeric>

namespace treesic {

ProtocolConfig ProtocolConfig::binary(int K, double p, bool sic) {
    ProtocolConfig c;
    c.K = K;
    c.d = 2;
    c.split_probs = {p, 1.0 - p};
    c.sic = sic;
    c.validate();
    return c;
}

ProtocolConfig ProtocolConfig::dary(int K, int d, bool sic) {
    ProtocolConfig c;
    c.K = K;
    c.d = d;
    c.split_probs.assign(static_cast<size_t>(d), 1.0 / d);
    c.sic = sic;
    c.validate();
    return c;
}

void ProtocolConfig::validate() const {
    if (K < 1) throw std::invalid_argument("ProtocolConfig: K must be >= 1");
    if (d < 2) throw std::invalid_argument("ProtocolConfig: d must be >= 2");
    if (split_probs.size() != static_cast<size_t>(d)) {
        throw std::invalid_argument("ProtocolConfig: need exactly d split probabilities");
    }
    double sum = 0;
    for (double q : split_probs) {
        if (!(q > 0.0 && q < 1.0)) {
            throw std::invalid_argument(
                "ProtocolConfig: split probabilities must lie strictly in (0,1)");
        }
        sum += q;
    }
    if (std::fabs(sum - 1.0) > 1e-12) {
        throw std::invalid_argument("ProtocolConfig: split probabilities must sum to 1");
    }
}

bool ProtocolConfig::fair() const {
    for (double q : split_probs) {
        if (std::fabs(q - 1.0 / d) > 1e-15) return false;
    }
    return true;
}

const char* to_string(CriMethod m) {
    switch (m) {
        case CriMethod::Recursive: return "recursive";
        case CriMethod::ClosedForm: return "closed";
        case CriMethod::Series: return "series";
        case CriMethod::NoSicRecursive: return "nosic-recursive";
        case CriMethod::NoSicSeries: return "nosic-series";
    }
    return "?";
}

namespace {

void check_nk(int n, int K) {
    if (n < 0) throw std::invalid_argument("expected_cri: n must be >= 0");
    if (K < 1) throw std::invalid_argument("expected_cri: K must be >= 1");
}

void check_p(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("expected_cri: split probability must lie strictly in (0,1)");
    }
}

std::vector<double> ln_factorial_table(int n_max) {
    std::vector<double> lf(static_cast<size_t>(n_max) + 1, 0.0);
    for (int i = 2; i <= n_max; ++i) lf[i] = lf[i - 1] + std::log(static_cast<double>(i));
    return lf;
}

// P[Binomial(n, 2^-m) > K]. Positive and monotone pieces only: complement of
// the lower CDF while that is accurate, upper-tail walk once the CDF nears 1.
double series_bracket(int n, int K, int m, const std::vector<double>& lf) {
    if (m == 0) return n > K ? 1.0 : 0.0;
    const double q = std::ldexp(1.0, -m);
    const double lq = -m * M_LN2;
    const double l1mq = std::log1p(-q);
    double cdf = 0.0;
    const int kmax = std::min(K, n);
    for (int k = 0; k <= kmax; ++k) {
        cdf += std::exp(lf[n] - lf[k] - lf[n - k] + k * lq + (n - k) * l1mq);
    }
    if (n <= K) return 0.0;
    if (cdf <= 0.9) return 1.0 - cdf;
    // upper tail from k = K+1 by the pmf term recurrence
    const double r = q / (1.0 - q);
    int k = K + 1;
    double t = std::exp(lf[n] - lf[k] - lf[n - k] + k * lq + (n - k) * l1mq);
    double s = 0.0;
    while (k <= n) {
        s += t;
        if (t < s * 1e-18) break;
        t *= static_cast<double>(n - k) / static_cast<double>(k + 1) * r;
        ++k;
    }
    return s;
}

double series_value(int n, int K, bool sic, const std::vector<double>& lf) {
    if (n <= K) return 1.0;
    const double mult = sic ? 1.0 : 2.0;
    double L = 1.0;
    int consec = 0;
    for (int m = 0; m < 10000; ++m) {
        const double term = mult * std::ldexp(series_bracket(n, K, m, lf), m);
        L += term;
        if (term < 1e-12 * L) {
            if (++consec >= 3) return L;
        } else {
            consec = 0;
        }
    }
    throw convergence_error("expected_cri_series: 10^4 terms without convergence");
}

}  // namespace

std::vector<double> cri_table_recursive(int n_max, int K, double p, bool sic) {
    check_nk(n_max, K);
    check_p(p);
    std::vector<double> L(static_cast<size_t>(n_max) + 1, 1.0);
    if (n_max <= K) return L;
    const auto lf = ln_factorial_table(n_max);
    const double lnp = std::log(p);
    const double lnq = std::log1p(-p);
    const double c = sic ? 0.0 : 1.0;
    for (int t = K + 1; t <= n_max; ++t) {
        const double denom = 1.0 - std::exp(t * lnp) - std::exp(t * lnq);
        double S = c;
        for (int i = 0; i < t; ++i) {
            const double lnC = lf[t] - lf[i] - lf[t - i];
            const double w =
                std::exp(lnC + i * lnp + (t - i) * lnq) + std::exp(lnC + (t - i) * lnp + i * lnq);
            S += w * L[i];
        }
        L[t] = S / denom;
    }
    return L;
}

std::vector<double> cri_table_series(int n_max, int K, bool sic) {
    check_nk(n_max, K);
    const auto lf = ln_factorial_table(n_max);
    std::vector<double> L(static_cast<size_t>(n_max) + 1, 1.0);
    for (int n = K + 1; n <= n_max; ++n) L[n] = series_value(n, K, sic, lf);
    return L;
}

CriValue expected_cri_recursive(int n, int K, double p) {
    const auto L = cri_table_recursive(n, K, p, true);
    return {n, L[n], CriMethod::Recursive, L[n] * 1e-14 * std::max(1, n)};
}

CriValue expected_cri_series(int n, int K) {
    check_nk(n, K);
    const auto lf = ln_factorial_table(n);
    const double v = series_value(n, K, true, lf);
    return {n, v, CriMethod::Series, v * 1e-12};
}

CriValue expected_cri_no_sic(int n, int K, double p) {
    const auto L = cri_table_recursive(n, K, p, false);
    return {n, L[n], CriMethod::NoSicRecursive, L[n] * 1e-14 * std::max(1, n)};
}

CriValue expected_cri_no_sic_series(int n, int K) {
    check_nk(n, K);
    const auto lf = ln_factorial_table(n);
    const double v = series_value(n, K, false, lf);
    return {n, v, CriMethod::NoSicSeries, v * 1e-12};
}

BigRational expected_cri_closed_form_exact(int n, int K) {
    check_nk(n, K);
    if (n <= K) return BigRational(1);
    BigRational sum(0);
    for (int i = 1; i <= n - K; ++i) {
        const unsigned long e = static_cast<unsigned long>(i + K - 1);
        BigInt num = BigInt::binomial(n - K, i);
        num *= static_cast<long>(i);
        num *= BigInt::pow2(e);
        BigInt den(static_cast<long>(i + K));
        den *= BigInt::pow2_minus_1(e);
        const BigRational term(num, den);
        if (i & 1) {
            sum -= term;
        } else {
            sum += term;
        }
    }
    return BigRational(1) - BigRational(BigInt::binomial(n, K), BigInt(1)) * sum;
}

CriValue expected_cri_closed_form(int n, int K, double p) {
    check_nk(n, K);
    check_p(p);
    if (n <= K) return {n, 1.0, CriMethod::ClosedForm, 0.0};
    if (p == 0.5) {
        const double v = expected_cri_closed_form_exact(n, K).to_double();
        return {n, v, CriMethod::ClosedForm, v * 2e-16};
    }
    const double lnp = std::log(p);
    const double lnq = std::log1p(-p);
    const int dnk = n - K;
    double sum = 0.0, sum_abs = 0.0;
    for (int i = 1; i <= dnk; ++i) {
        const int a = i + K;
        const double denom = 1.0 - std::exp(a * lnp) - std::exp(a * lnq);
        const double t = std::exp(ln_binomial(dnk, i) + std::log(static_cast<double>(i)) -
                                  std::log(static_cast<double>(a)) - std::log(denom));
        sum += (i & 1) ? -t : t;
        sum_abs += t;
    }
    const double cnk = std::exp(ln_binomial(n, K));
    const double v = 1.0 - cnk * sum;
    const double abs_err = (sum_abs * cnk + std::fabs(v)) * 4e-16;
    if (abs_err > 1e-6 * std::fabs(v)) {
        throw precision_loss_error(
            "expected_cri_closed_form: alternating sum cancels beyond the 1e-6 contract at n=" +
            std::to_string(n) + "; use the recursion (or p = 1/2 for the exact path)");
    }
    return {n, v, CriMethod::ClosedForm, abs_err};
}

double conditional_throughput(int n, int K, double L_n) {
    check_nk(n, K);
    if (L_n < 1.0) throw std::invalid_argument("conditional_throughput: L_n must be >= 1");
    return n / (K * L_n);
}

std::vector<BigRational> exact_cri_table(int n_max, int K, bool sic) {
    check_nk(n_max, K);
    // Scaled-integer form of the fair-split recursion
    //   L_t (2^{t-1} - 1) = c 2^{t-1} + sum_{i<t} C(t,i) L_i,  c = sic ? 0 : 1.
    // J[i] holds L_i times the running common denominator D = prod M_t,
    // M_t = 2^{t-1} - 1; one big*small multiply per entry per step.
    std::vector<BigInt> J(static_cast<size_t>(n_max) + 1);
    std::vector<BigInt> row(static_cast<size_t>(n_max) + 1);  // Pascal row C(t, i)
    BigInt D(1);
    row[0] = BigInt(1);
    for (int i = 0; i <= std::min(K, n_max); ++i) J[i] = BigInt(1);
    for (int t = 1; t <= n_max; ++t) {
        for (int i = t; i >= 1; --i) row[i] += row[i - 1];
        if (t <= K) continue;
        const BigInt M = BigInt::pow2_minus_1(static_cast<unsigned long>(t - 1));
        BigInt N(0);
        for (int i = 0; i < t; ++i) N.add_mul(row[i], J[i]);
        if (!sic) N += BigInt::pow2(static_cast<unsigned long>(t - 1)) * D;
        for (int i = 0; i < t; ++i) J[i] *= M;
        J[t] = std::move(N);
        D *= M;
    }
    std::vector<BigRational> L;
    L.reserve(static_cast<size_t>(n_max) + 1);
    for (int i = 0; i <= n_max; ++i) L.emplace_back(J[i], D);
    return L;
}

BigRational expected_cri_exact(int n, int K, bool sic) {
    return exact_cri_table(n, K, sic).back();
}

}  // namespace treesic
