#include "treesic/arrivals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "treesic/asymptotics.hpp"
#include "treesic/cri.hpp"

namespace treesic {

namespace {

constexpr double kScanStep = 0.25;
constexpr double kRefineTol = 1e-8;

void check_K(int K) {
    if (K < 1) throw std::invalid_argument("arrivals: K must be >= 1");
}

std::vector<double> ln_factorials(int k) {
    std::vector<double> lf(k + 1, 0.0);
    for (int i = 1; i <= k; ++i) lf[i] = lf[i - 1] + std::log(static_cast<double>(i));
    return lf;
}

// f(x, k, z) with a precomputed log-factorial table.  Poisson weights more
// than ~15 standard deviations from the mean are below 1e-40 relative and
// are skipped; surviving terms are summed smallest magnitude first.
double f_eval(double x, int k, double z, const std::vector<double>& table,
              const std::vector<double>& lf) {
    if (z == 0.0) return table[0];
    const double lz = std::log(z);
    const double sz = std::sqrt(z);
    const int lo = std::max(0, static_cast<int>(z - 15.0 * sz - 30.0));
    const int hi = std::min(k, static_cast<int>(z + 15.0 * sz + 60.0));
    // A truncated table entirely below the window leaves only the linear term.
    if (lo > hi) return x * z;
    std::vector<double> terms;
    terms.reserve(hi - lo + 1);
    for (int i = lo; i <= hi; ++i) {
        const double lw = i * lz - z - lf[i];
        terms.push_back((table[i] - x * i) * std::exp(lw));
    }
    std::sort(terms.begin(), terms.end(),
              [](double a, double b) { return std::fabs(a) < std::fabs(b); });
    double sum = 0.0;
    for (double t : terms) sum += t;
    return x * z + sum;
}

struct ScanResult {
    double value;
    double argz;
};

// Coarse grid over (0, z_max] followed by golden-section refinement around
// the best point.  A maximizer on the final grid point means the horizon
// clipped the objective.
template <typename F>
ScanResult sup_scan(F&& obj, double z_max) {
    const int N = static_cast<int>(std::floor(z_max / kScanStep + 1e-9));
    if (N < 2) throw std::invalid_argument("sup_scan: search range too small");
    int best_j = 1;
    double best_v = -HUGE_VAL;
    for (int j = 1; j <= N; ++j) {
        const double v = obj(j * kScanStep);
        if (v > best_v) {
            best_v = v;
            best_j = j;
        }
    }
    if (best_j == N)
        throw convergence_error("sup_scan: maximizer at search horizon; widen the z range");

    double a = (best_j - 1) * kScanStep;
    double b = (best_j + 1) * kScanStep;
    constexpr double invphi = 0.6180339887498949;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = obj(c);
    double fd = obj(d);
    while (b - a > kRefineTol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = obj(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = obj(d);
        }
    }
    const double zstar = 0.5 * (a + b);
    return {std::max(obj(zstar), best_v), zstar};
}

std::vector<double> exact_doubles(int n_max, int K, bool sic) {
    const std::vector<BigRational> exact = exact_cri_table(n_max, K, sic);
    std::vector<double> out(exact.size());
    for (size_t i = 0; i < exact.size(); ++i) out[i] = exact[i].to_double();
    return out;
}

// Ratio evaluation grid for the affine (shifted) envelope: a dense integer
// band above m, then geometric coverage out to where the ratio has settled,
// plus the n -> infinity limit of the top table entry.
struct RatioExtremes {
    double alpha;
    double beta;
};

RatioExtremes ratio_extremes(int m, int n_eval, const std::vector<double>& table) {
    std::vector<long> grid;
    for (long n = m; n <= m + 150; ++n) grid.push_back(n);
    const long far = std::max(30000L, static_cast<long>(n_eval));
    if (m + 150 < far) {
        const double r = std::pow(static_cast<double>(far) / (m + 150), 1.0 / 49.0);
        for (int j = 1; j <= 49; ++j)
            grid.push_back(std::lround((m + 150) * std::pow(r, j)));
        grid.push_back(far);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    const double limit = table[m - 1] / (m - 1);
    double alpha = limit;
    double beta = limit;
    for (long n : grid) {
        const double r = ratio_sequence(m, n, table);
        alpha = std::max(alpha, r);
        beta = std::min(beta, r);
    }
    return {alpha, beta};
}

}  // namespace

const char* to_string(AccessMode mode) {
    return mode == AccessMode::Gated ? "gated" : "windowed";
}

WindowedAnchor canonical_windowed_anchor(int K, bool sic) {
    switch (K) {
        case 1: return sic ? WindowedAnchor{50, 100} : WindowedAnchor{2, 100};
        case 2: return {100, 200};
        case 4: return {200, 400};
        case 8: return {400, 800};
        case 16: return {400, 800};
        case 32: return {400, 800};
        case 64: return {500, 1000};
        default: {
            const int m = std::clamp(8 * K, K + 2, 500);
            return {m, 2 * m};
        }
    }
}

StabilityReport gated_bounds(int K) {
    check_K(K);
    const double amp = oscillation_amplitude(K);
    if (amp >= 1.0)
        throw std::domain_error("gated_bounds: oscillation amplitude >= 1");
    StabilityReport rep;
    rep.access = AccessMode::Gated;
    rep.K = K;
    rep.lambda_S = K * M_LN2 / (1.0 + amp);
    rep.lambda_U = K * M_LN2 / (1.0 - amp);
    rep.lambda_S_norm = rep.lambda_S / K;
    rep.lambda_U_norm = rep.lambda_U / K;
    return rep;
}

int poisson_table_length(double z) {
    if (!(z >= 0.0)) throw std::invalid_argument("poisson_table_length: z must be >= 0");
    return static_cast<int>(z + 12.0 * std::sqrt(z) + 50.0);
}

double windowed_f(double x, int k, double z, const std::vector<double>& table) {
    if (k < 0) throw std::invalid_argument("windowed_f: k must be >= 0");
    if (!(z >= 0.0)) throw std::invalid_argument("windowed_f: z must be >= 0");
    if (table.size() < static_cast<size_t>(k) + 1)
        throw std::invalid_argument("windowed_f: table shorter than k + 1");
    return f_eval(x, k, z, table, ln_factorials(k));
}

double expected_cri_poisson(double z, int K, int i_max, bool sic, double* tail_mass) {
    check_K(K);
    if (!(z >= 0.0)) throw std::invalid_argument("expected_cri_poisson: z must be >= 0");
    if (i_max < 0) i_max = poisson_table_length(z);
    const std::vector<double> table = cri_table_series(i_max, K, sic);
    if (z == 0.0) {
        if (tail_mass) *tail_mass = 0.0;
        return table[0];
    }
    const double lz = std::log(z);
    const std::vector<double> lf = ln_factorials(i_max);
    double sum = 0.0;
    double mass = 0.0;
    for (int i = 0; i <= i_max; ++i) {
        const double w = std::exp(i * lz - z - lf[i]);
        sum += w * table[i];
        mass += w;
    }
    if (tail_mass) *tail_mass = std::max(0.0, 1.0 - mass);
    return sum;
}

StabilityReport windowed_bounds(int K, int m, int n_eval) {
    check_K(K);
    if (m < K + 1) throw std::invalid_argument("windowed_bounds: m must be >= K + 1");
    if (n_eval < m) throw std::invalid_argument("windowed_bounds: n_eval must be >= m");

    const std::vector<double> exact = exact_doubles(m - 1, K, true);
    const BoundsResult env = compute_bounds_with_table(m, K, n_eval, exact);

    const double z_max = 8.0 * m;
    const int k = poisson_table_length(z_max);
    std::vector<double> L = cri_table_series(k, K, true);
    std::copy(exact.begin(), exact.end(), L.begin());
    const std::vector<double> lf = ln_factorials(k);

    auto objective = [&](double x) {
        return [&, x](double z) {
            const double f = f_eval(x, k, z, L, lf);
            return f > 1e-12 ? z / f : -HUGE_VAL;
        };
    };
    const ScanResult s = sup_scan(objective(env.alpha_m), z_max);
    const ScanResult u = sup_scan(objective(env.beta_m), z_max);

    StabilityReport rep;
    rep.access = AccessMode::Windowed;
    rep.K = K;
    rep.lambda_S = s.value;
    rep.lambda_U = u.value;
    rep.lambda_S_norm = s.value / K;
    rep.lambda_U_norm = u.value / K;
    rep.argmax_z = s.argz;
    rep.m_used = m;
    return rep;
}

StabilityReport windowed_bounds_no_sic(int K, int m, int n_eval) {
    check_K(K);
    if (m < K + 1) throw std::invalid_argument("windowed_bounds_no_sic: m must be >= K + 1");
    if (n_eval < m) throw std::invalid_argument("windowed_bounds_no_sic: n_eval must be >= m");

    // Shifted table: Lambda_i = L*_i + 1 linearizes the affine recursion.
    std::vector<double> Lambda = exact_doubles(m, K, false);
    for (double& v : Lambda) v += 1.0;
    const RatioExtremes env = ratio_extremes(m, n_eval, Lambda);

    const int k = m;
    const std::vector<double> lf = ln_factorials(k);
    const double z_max = std::max(8.0 * m, 40.0);

    auto objective = [&](double x) {
        return [&, x](double z) {
            const double denom = f_eval(x, k, z, Lambda, lf) - 1.0;
            return denom > 1e-12 ? z / denom : -HUGE_VAL;
        };
    };
    const ScanResult s = sup_scan(objective(env.alpha), z_max);
    const ScanResult u = sup_scan(objective(env.beta), z_max);

    StabilityReport rep;
    rep.access = AccessMode::Windowed;
    rep.K = K;
    rep.lambda_S = s.value;
    rep.lambda_U = u.value;
    rep.lambda_S_norm = s.value / K;
    rep.lambda_U_norm = u.value / K;
    rep.argmax_z = s.argz;
    rep.m_used = m;
    return rep;
}

std::vector<SensitivityPoint> sensitivity_curve(int K, int m,
                                                const std::vector<double>& z_grid) {
    check_K(K);
    if (m < K + 1) throw std::invalid_argument("sensitivity_curve: m must be >= K + 1");
    if (z_grid.empty()) throw std::invalid_argument("sensitivity_curve: empty grid");
    for (size_t i = 0; i < z_grid.size(); ++i) {
        if (!(z_grid[i] > 0.0) || (i > 0 && z_grid[i] <= z_grid[i - 1]))
            throw std::invalid_argument("sensitivity_curve: grid must be positive ascending");
    }

    const int k = poisson_table_length(z_grid.back());
    const std::vector<double> lf = ln_factorials(k);

    const std::vector<double> exact = exact_doubles(m - 1, K, true);
    const BoundsResult env = compute_bounds_with_table(m, K, 2 * m, exact);
    std::vector<double> L = cri_table_series(k, K, true);
    std::copy(exact.begin(), exact.end(), L.begin());

    std::vector<double> Lambda_exact = exact_doubles(m, K, false);
    for (double& v : Lambda_exact) v += 1.0;
    const RatioExtremes env_ns = ratio_extremes(m, 2 * m, Lambda_exact);
    std::vector<double> Lambda = cri_table_series(k, K, false);
    for (double& v : Lambda) v += 1.0;
    std::copy(Lambda_exact.begin(), Lambda_exact.end(), Lambda.begin());

    std::vector<SensitivityPoint> curve;
    curve.reserve(z_grid.size());
    for (double z : z_grid) {
        SensitivityPoint pt;
        pt.z = z;
        const double f = f_eval(env.beta_m, k, z, L, lf);
        pt.F = f > 1e-12 ? z / (K * f) : 0.0;
        const double fn = f_eval(env_ns.beta, k, z, Lambda, lf) - 1.0;
        pt.F_no_sic = fn > 1e-12 ? z / (K * fn) : 0.0;
        curve.push_back(pt);
    }
    return curve;
}

}  // namespace treesic
