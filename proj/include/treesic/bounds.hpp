#pragma once
// Linear envelopes for the expected CRI length.
//
// Conditioning one splitting step on the initial multiplicity n gives the
// weighted ratio
//
//   R(n) = sum_{i<m} C(n,i) L_i  /  sum_{i<m} C(n,i) i
//
// whose extremes over n in [m, n_eval],
//
//   alpha_m = max R(n),   beta_m = min R(n),
//
// certify beta_m * n <= L_n <= alpha_m * n for all n >= m.  The induced
// throughput envelope is A_m = 1/(K alpha_m) <= T_n <= B_m = 1/(K beta_m).
// R(n) approaches its supremum from below as n grows, so n_eval must be
// generous; a plateau flag reports whether the tail has stopped moving.

#include <vector>

namespace treesic {

struct BoundsResult {
    int K = 1;
    int m = 2;
    int n_eval = 2;
    double alpha_m = 0;
    double beta_m = 0;
    double A_m = 0;  // throughput lower bound, 1/(K alpha_m)
    double B_m = 0;  // throughput upper bound, 1/(K beta_m)
    bool plateaued = true;
};

// R(n) given the first m expected CRI values (table[i] = L_i, i < m).
// Weights are evaluated in the log domain and normalized by the largest
// binomial coefficient before exponentiation.
double ratio_sequence(int m, long n, const std::vector<double>& table);

// Convenience overload that builds the exact fair-split table for (K, m).
double ratio_sequence(int m, int K, long n);

// Envelope from the first m values supplied by the caller.  Requires
// m >= 2, n_eval >= m, and table.size() >= m.
BoundsResult compute_bounds_with_table(int m, int K, int n_eval,
                                       const std::vector<double>& table);

// Envelope for the fair-split channel with interference cancellation.
// Requires m >= K + 1 so every tabulated L_i is nontrivial to certify.
BoundsResult compute_bounds(int m, int K, int n_eval);

}  // namespace treesic
