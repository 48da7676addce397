#ifndef KORANYI_KERNELS_HPP
#define KORANYI_KERNELS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "koranyi/heisenberg.hpp"

namespace koranyi {

// a_0 = 2^{n-2} Γ(n/2)² / π^{n+1}
double a0_constant(int n);

// g_η(ξ) = a_0 |C − P|^{-n}, C = |z|²+|z'|²+i(t−t'), P = 2 z·z̄'.
double fundamental_solution(const HPoint& eta, const HPoint& xi);

// θ-average of g_η: a_0 |C|^{-n} F(n/2, n/2; 1; |P|²/|C|²).
// (The equal-parameter hypergeometric with unit third parameter is the
// Gegenbauer average; it coincides with the n-parameter form at n = 1.)
double averaged_fundamental(const HPoint& eta, const HPoint& xi);

// ∂⊥ of g_η(ξ) in ξ, closed form (n = 1 and general n alike).
double fundamental_solution_dperp(const HPoint& eta, const HPoint& xi);
// ∂⊥ in the pole variable η (equals the ξ-form with the slots swapped).
double fundamental_solution_dperp_pole(const HPoint& eta, const HPoint& xi);

// Coefficient table a_{m;k} for the separated series of the averaged kernel,
// with truncation orders and the additive constant of the harmonic correction.
struct KernelCoefficients {
    int n = 1;
    int M = 0;
    int K = 0;
    double b0 = 0.0;
    std::vector<std::vector<double>> a;  // a[m][k], (M+1) x (K+1)
    double residual = 0.0;               // held-out max relative error
    double condition = 0.0;              // largest accepted tower condition estimate

    double at(int m, int k) const { return a[static_cast<size_t>(m)][static_cast<size_t>(k)]; }
};

struct FitOptions {
    int grid = 8;                 // per-axis sample-grid resolution
    double r_eta_min = 0.10, r_eta_max = 0.65;
    double r_xi_min = 1.05, r_xi_max = 2.20;
    double ratio_max = 0.55;      // N(η)/N(ξ) cap on fitted samples
    double heldout_ratio_max = 0.50;
    double svd_threshold = 1e-10;
    double condition_limit = 1e12;
    double tower_gain = 1.5;      // keep tower k only if it shrinks the residual by this factor
    int guard = 8;                // extra fitted degrees that absorb the truncation tail
    std::uint64_t seed = 0;       // reserved; the sample grids are deterministic
};

struct FitReport {
    double residual_train_rms = 0.0;
    double residual_heldout_max = 0.0;
    double condition = 0.0;
    int towers_kept = 0;
    int samples = 0;
};

// Least-squares recovery of a_{m;k} against the closed-form averaged kernel
// on a deterministic tensor grid of (η, ξ) pairs in the series regime
// N(η) < N(ξ). Towers in k are fitted hierarchically; a tower is kept only
// if it materially reduces the residual (for n = 1 the k = 0 tower suffices
// and higher towers stay zero, keeping every retained term harmonic).
KernelCoefficients project_coefficients(int n, int M, int K, const FitOptions& opts = {},
                                        FitReport* report = nullptr);

// Truncated series for ḡ_{η^{-1}}(ξ^{-1}); valid for N(η) < N(ξ).
double series_averaged_fundamental(const KernelCoefficients& c, const HPoint& eta,
                                   const HPoint& xi, double* tail_estimate = nullptr);

// Truncated series for K(ḡ_{η^{-1}})(ξ); valid for N(η)·N(ξ) < 1.
double series_kelvin(const KernelCoefficients& c, const HPoint& eta, const HPoint& xi,
                     double* tail_estimate = nullptr);

// Harmonic correction h(η,ξ) = Σ_{(m,k)≠(0,0)} (n/(m+k)) a_{m;k} C_m(ς_ξ)Y_k(z)
//                              · C_m(ς_η)Ȳ_k(z') + b0.
double harmonic_correction(const KernelCoefficients& c, const HPoint& eta, const HPoint& xi);

// N_B(η,ξ) = ḡ_{η^{-1}}(ξ^{-1}) (closed form) + K(ḡ)-series + h + n·a_{0;0}·N(ξ)².
// The last term carries the unit boundary flux so that ∂⊥N_B vanishes on ∂B.
double neumann_kernel(const KernelCoefficients& c, const HPoint& eta, const HPoint& xi);

std::string coefficients_to_json(const KernelCoefficients& c);
KernelCoefficients coefficients_from_json(const std::string& text);
void save_coefficients(const KernelCoefficients& c, const std::string& path);
KernelCoefficients load_coefficients(const std::string& path);

} // namespace koranyi

#endif
