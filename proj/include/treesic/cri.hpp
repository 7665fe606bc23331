#pragma once
// Expected conditional CRI (collision resolution interval) length L_n and
// conditional throughput T_n for binary tree splitting on a K-MPR channel.
//
// Channel: a slot carrying at most K packets decodes all of them, a slot
// carrying more decodes none. A collided set splits into a left group
// (probability p per user) and a right group. Branch laws for the CRI
// length l_n, with l_n = 1 for n <= K:
//
//   with interference cancellation:    l_n = l_I + l_{n-I}
//   without interference cancellation: l_n = 1 + l_I + l_{n-I}
//
// where I ~ Binomial(n, p). Taking expectations and solving for L_n = E l_n:
//
//   L_n = (c + sum_{i<n} C(n,i) (p^i q^{n-i} + p^{n-i} q^i) L_i)
//         / (1 - p^n - q^n),                   c = 0 with SIC, 1 without.
//
// Three routes are implemented for the fair split p = 1/2:
//   - the recursion above (reference method, any p);
//   - a closed form with alternating binomial terms, kept exact with
//     rationals because the alternating sum is hopeless in doubles for
//     n beyond ~60:
//       L_n = 1 - C(n,K) sum_{i=1}^{n-K} i (-1)^i C(n-K,i)
//             / ((i+K) (1 - p^{i+K} - q^{i+K}));
//   - an everywhere-positive series (the preferred large-n route),
//       L_n = 1 + (1+c) sum_{m>=0} 2^m P[Binomial(n, 2^-m) > K],
//     truncated once three consecutive terms contribute < 1e-12 relative.
//
// All functions are pure; table builders return plain vectors that may be
// shared read-only across threads.

#include <vector>

#include "treesic/numerics.hpp"

namespace treesic {

struct ProtocolConfig {
    int K = 1;                        // MPR capability, packets per slot
    int d = 2;                        // splitting factor
    std::vector<double> split_probs;  // d entries, each in (0,1), sum 1
    bool sic = true;

    static ProtocolConfig binary(int K, double p = 0.5, bool sic = true);
    static ProtocolConfig dary(int K, int d, bool sic = true);  // fair split

    // Throws std::invalid_argument on violation.
    void validate() const;
    bool fair() const;
};

enum class CriMethod { Recursive, ClosedForm, Series, NoSicRecursive, NoSicSeries };
const char* to_string(CriMethod m);

struct CriValue {
    int n = 0;                   // initial collision multiplicity
    double value = 1.0;          // expected CRI length, slots
    CriMethod method = CriMethod::Recursive;
    double abs_error_bound = 0;  // conservative absolute error estimate
};

// Reference method, any p in (0,1). O(n^2).
CriValue expected_cri_recursive(int n, int K, double p);

// Closed form. Exact rationals for p = 1/2 (any n); floating point otherwise,
// raising precision_loss_error when 1e-6 relative accuracy cannot be
// certified (the alternating sum cancels catastrophically near n ~ 100).
CriValue expected_cri_closed_form(int n, int K, double p);

// Positive-term series, fair split only. Stable for large n.
CriValue expected_cri_series(int n, int K);

// Without interference cancellation: recursion for any p, series for p = 1/2.
CriValue expected_cri_no_sic(int n, int K, double p);
CriValue expected_cri_no_sic_series(int n, int K);

// T_n = n / (K L_n).
double conditional_throughput(int n, int K, double L_n);

// Whole tables L_0..L_{n_max} (index = multiplicity).
std::vector<double> cri_table_recursive(int n_max, int K, double p, bool sic);
std::vector<double> cri_table_series(int n_max, int K, bool sic);

// Exact rational table via a scaled-integer recursion over the common
// denominator prod(2^{t-1} - 1). ~1 s at n_max = 500; avoid much beyond that.
std::vector<BigRational> exact_cri_table(int n_max, int K, bool sic);
BigRational expected_cri_exact(int n, int K, bool sic);

// Exact rational closed form, fair split.
BigRational expected_cri_closed_form_exact(int n, int K);

}  // namespace treesic
