#pragma once
// Stable-throughput analysis for gated and windowed channel access with
// Poisson arrivals of rate lambda (packets per slot).
//
// Gated access: every backlog flush resolves all n waiting users in one CRI,
// so the linear asymptote plus oscillation envelope gives closed-form rates
//   lambda_S = K ln 2 / (1 + amp),   lambda_U = K ln 2 / (1 - amp).
//
// Windowed access: each CRI resolves the arrivals of a fixed window of
// delta slots, a Poisson(lambda * delta) batch.  With linear envelopes
// beta_m n <= L_n <= alpha_m n valid for n >= m, the Poisson-averaged CRI
// length is sandwiched by
//
//   f(x, k, z) = x z + sum_{i<=k} (L_i - x i) e^{-z} z^i / i!
//
// with x = alpha_m (upper) or beta_m (lower), and the service condition
// E[CRI] <= delta is settled by  lambda_S = sup_z z / f(alpha_m, k, z)
// (stable below) and lambda_U = sup_z z / f(beta_m, k, z) (unstable above).
//
// Without interference cancellation L*_n is affine rather than linear:
// Lambda_n = L*_n + 1 satisfies the cancellation-style recursion with base
// value 2, so the same machinery runs on the shifted table and the window
// objective becomes z / (f_Lambda(x, k, z) - 1).

#include <optional>
#include <vector>

#include "treesic/bounds.hpp"

namespace treesic {

enum class AccessMode { Gated, Windowed };
const char* to_string(AccessMode mode);

struct StabilityReport {
    AccessMode access = AccessMode::Gated;
    int K = 1;
    double lambda_S = 0;       // arrivals per slot, stable below
    double lambda_U = 0;       // arrivals per slot, unstable above
    double lambda_S_norm = 0;  // lambda_S / K
    double lambda_U_norm = 0;  // lambda_U / K
    std::optional<double> argmax_z;  // windowed only: maximizer of z / f
    std::optional<int> m_used;       // windowed only: envelope order
};

struct WindowedModel {
    int K = 1;
    int m = 2;
    double coeff_upper = 0;  // alpha_m
    double coeff_lower = 0;  // beta_m
    std::vector<double> L_table;
};

// Envelope order and ratio horizon used for published operating points;
// other K fall back to m = clamp(8K, K+2, 500), n_eval = 2m.
struct WindowedAnchor {
    int m;
    int n_eval;
};
WindowedAnchor canonical_windowed_anchor(int K, bool sic);

StabilityReport gated_bounds(int K);

// Poisson truncation horizon covering mean z with ~12 standard deviations
// of headroom.
int poisson_table_length(double z);

// f(x, k, z) above; table[i] = L_i for i <= k.  Terms are evaluated with
// log-domain Poisson weights and summed smallest magnitude first.
double windowed_f(double x, int k, double z, const std::vector<double>& table);

// Poisson-averaged expected CRI length, the direct oracle for windowed_f.
// i_max < 0 selects poisson_table_length(z).  If tail_mass is non-null it
// receives the truncated Poisson probability mass (caller may warn).
double expected_cri_poisson(double z, int K, int i_max = -1, bool sic = true,
                            double* tail_mass = nullptr);

// Windowed stability rates with interference cancellation.  The envelope
// comes from compute_bounds(m, K, n_eval); the Poisson table extends far
// beyond m so the objective is not horizon-limited.  Throws
// convergence_error if the search grid edge is the maximizer.
StabilityReport windowed_bounds(int K, int m, int n_eval);

// Windowed stability without interference cancellation via the shifted
// table Lambda_n = L*_n + 1.  The Poisson table is truncated at k = m; the
// envelope order doubles as the truncation depth at these operating points.
StabilityReport windowed_bounds_no_sic(int K, int m, int n_eval);

struct SensitivityPoint {
    double z;
    double F;         // z / (K f(beta_m, k, z)), with cancellation
    double F_no_sic;  // z / (K (f_Lambda(beta*_m, k, z) - 1))
};

// Normalized window objective F(z) on an ascending grid; its maximum is the
// unstable-side rate lambda_U / K.  Both curves use a truncation horizon
// covering the full grid.
std::vector<SensitivityPoint> sensitivity_curve(int K, int m,
                                                const std::vector<double>& z_grid);

}  // namespace treesic
