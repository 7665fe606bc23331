#include "treesic/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "treesic/cri.hpp"

namespace treesic {

namespace {

constexpr double kPlateauTol = 1e-7;

void check_table_args(int m, long n, const std::vector<double>& table) {
    if (m < 2) throw std::invalid_argument("ratio_sequence: m must be >= 2");
    if (n < m) throw std::invalid_argument("ratio_sequence: n must be >= m");
    if (table.size() < static_cast<size_t>(m))
        throw std::invalid_argument("ratio_sequence: table shorter than m");
}

std::vector<double> exact_table_as_doubles(int m, int K) {
    const std::vector<BigRational> exact = exact_cri_table(m - 1, K, true);
    std::vector<double> table(exact.size());
    for (size_t i = 0; i < exact.size(); ++i) table[i] = exact[i].to_double();
    return table;
}

}  // namespace

double ratio_sequence(int m, long n, const std::vector<double>& table) {
    check_table_args(m, n, table);
    // lnC(n, i) built incrementally; normalize by the row maximum so the
    // exponentials stay in range for n in the tens of thousands.
    std::vector<double> lnc(m);
    lnc[0] = 0.0;
    for (int i = 1; i < m; ++i)
        lnc[i] = lnc[i - 1] + std::log(static_cast<double>(n - i + 1) / i);
    const double peak = *std::max_element(lnc.begin(), lnc.end());
    double num = 0.0;
    double den = 0.0;
    for (int i = 0; i < m; ++i) {
        const double w = std::exp(lnc[i] - peak);
        num += w * table[i];
        den += w * i;
    }
    return num / den;
}

double ratio_sequence(int m, int K, long n) {
    if (K < 1) throw std::invalid_argument("ratio_sequence: K must be >= 1");
    return ratio_sequence(m, n, exact_table_as_doubles(m, K));
}

BoundsResult compute_bounds_with_table(int m, int K, int n_eval,
                                       const std::vector<double>& table) {
    if (K < 1) throw std::invalid_argument("compute_bounds: K must be >= 1");
    if (n_eval < m) throw std::invalid_argument("compute_bounds: n_eval must be >= m");
    check_table_args(m, m, table);

    BoundsResult res;
    res.K = K;
    res.m = m;
    res.n_eval = n_eval;
    double alpha = -HUGE_VAL;
    double beta = HUGE_VAL;
    double prev = 0.0;
    double last = 0.0;
    for (int n = m; n <= n_eval; ++n) {
        const double r = ratio_sequence(m, n, table);
        alpha = std::max(alpha, r);
        beta = std::min(beta, r);
        prev = last;
        last = r;
    }
    res.alpha_m = alpha;
    res.beta_m = beta;
    res.A_m = 1.0 / (K * alpha);
    res.B_m = 1.0 / (K * beta);
    res.plateaued = n_eval == m || std::fabs(last - prev) < kPlateauTol;
    return res;
}

BoundsResult compute_bounds(int m, int K, int n_eval) {
    if (K < 1) throw std::invalid_argument("compute_bounds: K must be >= 1");
    if (m < K + 1) throw std::invalid_argument("compute_bounds: m must be >= K + 1");
    return compute_bounds_with_table(m, K, n_eval, exact_table_as_doubles(m, K));
}

}  // namespace treesic
