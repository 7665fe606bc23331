#pragma once
// Large-n behavior of the expected CRI length under fair splitting.
//
// The divide-and-conquer recursion for L_n yields, via Mellin analysis of its
// generating function, a linear mean term plus a log-periodic oscillation:
//
//   L_n ~ (n / (K ln 2)) [1 - 2K|B(K,1)| cos(2 pi log2 n + arg B(K,1))]
//
// where  B(K,m) = Gamma(-1 + 2 pi j m / ln 2) * A(K,m)  and
//        A(K,m) = 1 + sum_{k=1}^{K} [prod_{i=0}^{k-1} (i - 1 + 2 pi j m/ln 2)] / k!
//
// Higher harmonics (|m| >= 2) are suppressed by the exponential decay of
// |Gamma| along the imaginary direction; a diagnostic mode sums them anyway.
// Without interference cancellation the mean coefficient doubles and the
// oscillation is unchanged.

#include <utility>

#include "treesic/numerics.hpp"

namespace treesic {

struct AsymptoticModel {
    int K = 1;
    ComplexValue B_K1;          // residue coefficient at the first harmonic
    double amplitude = 0;       // 2K |B(K,1)|
    double phase = 0;           // arg B(K,1), radians
    double mean_coefficient = 0;  // 1/(K ln 2), slots per user
};

ComplexValue mellin_A(int K, int m);
ComplexValue mellin_B(int K, int m);  // m != 0 (Gamma pole at m = 0)
double oscillation_amplitude(int K);
AsymptoticModel asymptotic_model(int K);

double asymptotic_cri(double n, int K);
double asymptotic_throughput(double n, int K);
// {L_n, T_n} without interference cancellation.
std::pair<double, double> asymptotic_no_sic(double n, int K);

// Diagnostic: include harmonics m = 1..M in the oscillation.
double asymptotic_cri_multi(double n, int K, int M);

}  // namespace treesic
