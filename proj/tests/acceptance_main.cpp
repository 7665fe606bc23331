// Acceptance gate: one [PASS]/[FAIL] line per criterion, nonzero exit on any
// failure.  Tolerances and reference values are pinned here on purpose; a
// change in any of them is a deliberate contract change, not a tuning knob.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "treesic/arrivals.hpp"
#include "treesic/asymptotics.hpp"
#include "treesic/bounds.hpp"
#include "treesic/cri.hpp"
#include "treesic/numerics.hpp"
#include "treesic/sim.hpp"

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail = "") {
    std::printf("[%s] %s%s%s\n", ok ? "PASS" : "FAIL", name.c_str(),
                detail.empty() ? "" : ": ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

double elapsed_s(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

double rel(double a, double b) {
    return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), 1e-300});
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct Anchor {
    int K, m, n_eval;
};
constexpr Anchor kAnchors[] = {
    {1, 50, 100},   {2, 100, 200},  {4, 200, 400},   {8, 400, 800},
    {16, 400, 800}, {32, 400, 800}, {64, 500, 1000},
};

// Criterion 1: linear envelope values at the published anchors, to 5e-4,
// inside a two-minute budget.
void criterion_envelopes() {
    struct Want {
        double alpha, beta, A, B;
    };
    constexpr Want want[] = {
        {1.4427, 1.4427, 0.6931, 0.6931}, {0.7214, 0.7213, 0.6931, 0.6932},
        {0.3607, 0.3606, 0.6930, 0.6933}, {0.1808, 0.1799, 0.6915, 0.6948},
        {0.0919, 0.0884, 0.6803, 0.7069}, {0.0480, 0.0421, 0.6505, 0.7420},
        {0.0254, 0.0199, 0.6141, 0.7864},
    };
    const auto start = Clock::now();
    double worst = 0.0;
    for (int i = 0; i < 7; ++i) {
        const treesic::BoundsResult r =
            treesic::compute_bounds(kAnchors[i].m, kAnchors[i].K, kAnchors[i].n_eval);
        worst = std::max({worst, std::fabs(r.alpha_m - want[i].alpha),
                          std::fabs(r.beta_m - want[i].beta),
                          std::fabs(r.A_m - want[i].A), std::fabs(r.B_m - want[i].B)});
    }
    const double secs = elapsed_s(start);
    report(worst < 5e-4 && secs < 120.0,
           "envelope coefficients at the seven published anchors within 5e-4",
           "max deviation " + fmt(worst) + ", " + fmt(secs) + " s");
}

// Criterion 2: gated-access stability norms to 5e-4.
void criterion_gated() {
    struct Want {
        int K;
        double s, u;
    };
    constexpr Want want[] = {
        {1, 0.6931, 0.6931},  {2, 0.6931, 0.6932},  {4, 0.6930, 0.6932},
        {8, 0.6916, 0.6947},  {16, 0.6811, 0.7056}, {32, 0.6536, 0.7378},
        {64, 0.6216, 0.7833},
    };
    double worst = 0.0;
    for (const Want& w : want) {
        const treesic::StabilityReport r = treesic::gated_bounds(w.K);
        worst = std::max({worst, std::fabs(r.lambda_S_norm - w.s),
                          std::fabs(r.lambda_U_norm - w.u)});
    }
    report(worst < 5e-4, "gated stability norms across K = 1..64 within 5e-4",
           "max deviation " + fmt(worst));
}

// Criterion 3: windowed-access rates.  With cancellation the two-sided
// sandwich must close to 5e-4 and land on the published points to 2e-3;
// without cancellation the stable rate lands on its published points to 2e-3.
void criterion_windowed() {
    constexpr double sic_want[] = {0.6931, 0.6932, 0.6932, 0.6947,
                                   0.7056, 0.737,  0.7816};
    constexpr double no_sic_want[] = {0.423,  0.4707, 0.5175, 0.5678,
                                      0.6239, 0.6862, 0.7475};
    double worst_gap = 0.0;
    double worst_dev = 0.0;
    for (int i = 0; i < 7; ++i) {
        const Anchor& a = kAnchors[i];
        const treesic::StabilityReport s =
            treesic::windowed_bounds(a.K, a.m, a.n_eval);
        worst_gap = std::max(worst_gap,
                             std::fabs(s.lambda_S_norm - s.lambda_U_norm));
        worst_dev = std::max({worst_dev, std::fabs(s.lambda_S_norm - sic_want[i]),
                              std::fabs(s.lambda_U_norm - sic_want[i])});

        const treesic::WindowedAnchor an =
            treesic::canonical_windowed_anchor(a.K, false);
        const treesic::StabilityReport ns =
            treesic::windowed_bounds_no_sic(a.K, an.m, an.n_eval);
        worst_dev = std::max(worst_dev, std::fabs(ns.lambda_S_norm - no_sic_want[i]));
    }
    report(worst_gap < 5e-4 && worst_dev < 2e-3,
           "windowed stability sandwich closes to 5e-4 and matches published "
           "points to 2e-3",
           "max gap " + fmt(worst_gap) + ", max deviation " + fmt(worst_dev));
}

// Criterion 4: oscillation amplitude at K = 32 and the asymptotic throughput
// extremes it induces.
void criterion_amplitude() {
    const double amp = treesic::oscillation_amplitude(32);
    double t_min = 1e300;
    double t_max = -1e300;
    for (int i = 0; i <= 65536; ++i) {
        const double n = 512.0 * std::pow(2.0, i / 65536.0);
        const double t = treesic::asymptotic_throughput(n, 32);
        t_min = std::min(t_min, t);
        t_max = std::max(t_max, t);
    }
    const bool ok = std::fabs(amp - 0.0607) < 5e-4 &&
                    std::fabs(t_max - 0.7378) < 5e-4 &&
                    std::fabs(t_min - 0.6536) < 5e-4;
    report(ok, "oscillation amplitude and throughput extremes at K = 32",
           "amplitude " + fmt(amp) + ", extremes " + fmt(t_min) + " / " + fmt(t_max));
}

// Criterion 5: the recursive, closed-form, and series evaluations agree to
// 1e-9 relative for n <= 200 and K in {1, 2, 4, 8}, inside a minute.
void criterion_three_methods() {
    const auto start = Clock::now();
    double worst = 0.0;
    for (int K : {1, 2, 4, 8}) {
        const std::vector<double> rec = treesic::cri_table_recursive(200, K, 0.5, true);
        const std::vector<double> ser = treesic::cri_table_series(200, K, true);
        for (int n = 0; n <= 200; ++n) {
            const double clo = treesic::expected_cri_closed_form(n, K, 0.5).value;
            worst = std::max({worst, rel(rec[n], ser[n]), rel(rec[n], clo),
                              rel(ser[n], clo)});
        }
    }
    const double secs = elapsed_s(start);
    report(worst < 1e-9 && secs < 60.0,
           "recursive, closed-form, and series lengths agree to 1e-9 for "
           "n <= 200, K in {1,2,4,8}",
           "max relative gap " + fmt(worst) + ", " + fmt(secs) + " s");
}

// Criterion 6: Monte Carlo means sit within four standard errors of the
// analytic expectation, and reruns with the same seed are bit identical.
void criterion_simulation() {
    struct Probe {
        int n, K;
    };
    constexpr Probe probes[] = {{100, 1}, {100, 4}, {1000, 1}};
    bool ok = true;
    std::string detail;
    for (const Probe& probe : probes) {
        const treesic::ProtocolConfig config = treesic::ProtocolConfig::binary(probe.K);
        const treesic::MonteCarloStats a =
            treesic::monte_carlo(config, probe.n, 100000, 20260816);
        const treesic::MonteCarloStats b =
            treesic::monte_carlo(config, probe.n, 100000, 20260816);
        if (a.mean_slots != b.mean_slots || a.std_dev != b.std_dev ||
            a.ci95_half_width != b.ci95_half_width)
            ok = false;
        const double want =
            treesic::cri_table_series(probe.n, probe.K, true)[probe.n];
        const double se = a.std_dev / std::sqrt(100000.0);
        if (std::fabs(a.mean_slots - want) > 4.0 * se) ok = false;
        detail += (detail.empty() ? "" : "; ") + std::to_string(probe.n) + "/" +
                  std::to_string(probe.K) + " off by " +
                  fmt((a.mean_slots - want) / se) + " se";
    }
    report(ok, "Monte Carlo means match analysis within 4 standard errors, "
               "reruns bit-identical", detail);
}

// Criterion 7: d-ary splitting simulation throughputs and forced-split
// micro cases.
void criterion_dary() {
    const treesic::MonteCarloStats d3 =
        treesic::monte_carlo(treesic::ProtocolConfig::dary(1, 3), 1000, 10000, 42);
    const treesic::MonteCarloStats d8 =
        treesic::monte_carlo(treesic::ProtocolConfig::dary(1, 8), 1000, 10000, 42);
    const bool micro =
        treesic::cri_with_root_split(treesic::ProtocolConfig::dary(1, 3), {1, 0, 1}) == 2 &&
        treesic::cri_with_root_split(treesic::ProtocolConfig::dary(1, 3), {0, 1, 1}) == 3;
    const bool ok = std::fabs(d3.throughput - 0.663) < 0.01 &&
                    std::fabs(d8.throughput - 0.48) < 0.01 && micro;
    report(ok, "d-ary throughput at n = 1000 and forced-split micro cases",
           "d=3 " + fmt(d3.throughput) + ", d=8 " + fmt(d8.throughput));
}

// Criterion 8: without cancellation the exact conditional throughput at
// K = 1 plateaus in [0.34, 0.355] for n in [500, 1000].
void criterion_no_sic_plateau() {
    const std::vector<double> L = treesic::cri_table_series(1000, 1, false);
    double lo = 1e300;
    double hi = -1e300;
    for (int n = 500; n <= 1000; ++n) {
        const double t = treesic::conditional_throughput(n, 1, L[n]);
        lo = std::min(lo, t);
        hi = std::max(hi, t);
    }
    report(lo >= 0.34 && hi <= 0.355,
           "no-cancellation exact throughput stays in [0.34, 0.355] on "
           "n in [500, 1000]",
           "range [" + fmt(lo) + ", " + fmt(hi) + "]");
}

// Brute-force distribution of the K = 1 fair-split CRI length by direct
// probability-mass convolution; independent of every analytic code path.
std::vector<double> brute_pmf_means(int n_max) {
    constexpr int S = 400;
    std::vector<std::vector<double>> pmf(n_max + 1);
    pmf[0].assign(S + 1, 0.0);
    pmf[0][1] = 1.0;
    pmf[1] = pmf[0];
    for (int n = 2; n <= n_max; ++n) {
        std::vector<double> inner(S + 1, 0.0);
        const double scale = std::pow(2.0, -n);
        for (int i = 1; i < n; ++i) {
            const double w =
                treesic::BigInt::binomial(n, i).to_double() * scale;
            const std::vector<double>& a = pmf[i];
            const std::vector<double>& b = pmf[n - i];
            for (int s = 0; s <= S; ++s) {
                if (a[s] == 0.0) continue;
                for (int t = 0; s + t <= S; ++t) inner[s + t] += w * a[s] * b[t];
            }
        }
        const double loop = 2.0 * scale;  // both-empty and both-full splits
        pmf[n].assign(S + 1, 0.0);
        for (int s = 1; s <= S; ++s) pmf[n][s] = inner[s] + loop * pmf[n][s - 1];
    }
    std::vector<double> mean(n_max + 1, 0.0);
    for (int n = 0; n <= n_max; ++n)
        for (int s = 1; s <= S; ++s) mean[n] += s * pmf[n][s];
    return mean;
}

// Criterion 9: property suites. (a) pathwise coupling over 1e4 draws,
// (b) trace totals equal the counting path over 1e4 draws, (c) brute-force
// distribution means at n <= 6 match the exact table to 1e-12, (d) gamma
// functional equations on a grid to 1e-9.
void criterion_properties() {
    bool ok = true;
    std::string why;

    treesic::Rng rng(987654321);
    for (int it = 0; it < 10000 && ok; ++it) {
        const int K = 1 + static_cast<int>(rng.next() % 8);
        const int n = static_cast<int>(rng.next() % 61);
        const double p = 0.2 + 0.6 * rng.uniform01();
        const auto [sic, no_sic] =
            treesic::coupled_sic_comparison(n, K, p, rng.next());
        if (no_sic != 2 * sic - 1 || (n > K && no_sic <= sic)) {
            ok = false;
            why = "coupling broke at n=" + std::to_string(n) + " K=" + std::to_string(K);
        }
    }

    for (int it = 0; it < 10000 && ok; ++it) {
        const int K = 1 + static_cast<int>(rng.next() % 4);
        const int d = 2 + static_cast<int>(rng.next() % 4);
        const bool sic = rng.next() % 2 == 0;
        const int n = static_cast<int>(rng.next() % 31);
        const treesic::ProtocolConfig config =
            d == 2 ? treesic::ProtocolConfig::binary(K, 0.2 + 0.6 * rng.uniform01(), sic)
                   : treesic::ProtocolConfig::dary(K, d, sic);
        const std::uint64_t seed = rng.next();
        const treesic::TrialOutcome plain = treesic::simulate_cri(config, n, seed);
        const auto [traced, events] = treesic::simulate_cri_trace(config, n, seed);
        (void)events;
        if (plain.slots != traced.slots || plain.resolved != traced.resolved ||
            traced.resolved != n) {
            ok = false;
            why = "trace totals diverged at n=" + std::to_string(n);
        }
    }

    if (ok) {
        const std::vector<double> brute = brute_pmf_means(6);
        const std::vector<treesic::BigRational> exact = treesic::exact_cri_table(6, 1, true);
        for (int n = 0; n <= 6 && ok; ++n) {
            if (std::fabs(brute[n] - exact[n].to_double()) > 1e-12) {
                ok = false;
                why = "brute-force mean off at n=" + std::to_string(n);
            }
        }
        if (ok && (std::fabs(brute[2] - 3.0) > 1e-12 ||
                   std::fabs(brute[3] - 13.0 / 3.0) > 1e-12)) {
            ok = false;
            why = "hand values 3 and 13/3 missed";
        }
    }

    if (ok) {
        for (double x : {-2.5, 0.5, 3.7, 20.4}) {
            for (double y : {0.25, 3.0, 29.0}) {
                const treesic::ComplexValue z{x, y};
                const treesic::ComplexValue lhs = treesic::complex_gamma(z + 1.0);
                const treesic::ComplexValue rhs = z * treesic::complex_gamma(z);
                if (std::abs(lhs - rhs) > 1e-9 * std::abs(lhs)) {
                    ok = false;
                    why = "gamma recurrence off at x=" + fmt(x) + " y=" + fmt(y);
                }
            }
        }
    }

    report(ok, "property suites: coupling, trace totals, brute-force "
               "distribution, gamma identities", why);
}

// Criterion 10: queue drift in the windowed simulator brackets the analytic
// stability range at K = 1, inside two minutes.
void criterion_windowed_sim() {
    const auto start = Clock::now();
    const treesic::StabilityReport w = treesic::windowed_bounds(1, 50, 100);
    const treesic::ProtocolConfig config = treesic::ProtocolConfig::binary(1);
    const double delta = 50.0;
    const treesic::WindowedSimStats below = treesic::simulate_windowed(
        config, 0.95 * w.lambda_S, delta, 100000, 20260816);
    const treesic::WindowedSimStats above = treesic::simulate_windowed(
        config, 1.05 * w.lambda_U, delta, 100000, 20260816);
    const double secs = elapsed_s(start);
    report(below.drift <= 0.0 && above.drift > 0.0 && secs < 120.0,
           "windowed queue drift brackets the stability range at K = 1",
           "drift " + fmt(below.drift) + " at 0.95 lambda_S, " + fmt(above.drift) +
               " at 1.05 lambda_U, " + fmt(secs) + " s");
}

// Diagnostic: harmonics beyond the first shift the asymptote by less than
// 0.1% for K <= 8.
void diagnostic_harmonics() {
    double worst = 0.0;
    for (int K : {1, 2, 4, 8}) {
        for (double n : {500.0, 777.0, 1000.0}) {
            const double one = treesic::asymptotic_cri(n, K);
            const double three = treesic::asymptotic_cri_multi(n, K, 3);
            worst = std::max(worst, std::fabs(three - one) / one);
        }
    }
    report(worst < 1e-3, "diagnostic: harmonics m <= 3 move the asymptote by "
                         "less than 0.1% for K <= 8",
           "max shift " + fmt(worst));
}

void guarded(void (*fn)(), const char* name) {
    try {
        fn();
    } catch (const std::exception& e) {
        report(false, name, std::string("exception: ") + e.what());
    }
}

}  // namespace

int main() {
    guarded(criterion_envelopes, "envelope coefficients at the seven published anchors");
    guarded(criterion_gated, "gated stability norms");
    guarded(criterion_windowed, "windowed stability sandwich");
    guarded(criterion_amplitude, "oscillation amplitude and throughput extremes");
    guarded(criterion_three_methods, "three-method agreement");
    guarded(criterion_simulation, "Monte Carlo versus analysis");
    guarded(criterion_dary, "d-ary simulation");
    guarded(criterion_no_sic_plateau, "no-cancellation throughput plateau");
    guarded(criterion_properties, "property suites");
    guarded(criterion_windowed_sim, "windowed queue drift");
    guarded(diagnostic_harmonics, "multi-harmonic diagnostic");
    std::printf("%s\n", failures == 0 ? "all criteria satisfied"
                                      : "some criteria failed");
    return failures == 0 ? 0 : 1;
}
