#ifndef KORANYI_LAYER_POTENTIALS_HPP
#define KORANYI_LAYER_POTENTIALS_HPP

#include <Eigen/Dense>

#include "koranyi/heisenberg.hpp"
#include "koranyi/quadrature.hpp"

namespace koranyi {

// Boundary density samples aligned with a SurfaceQuadrature.
struct DensityVector {
    std::vector<Complex> values;
    const SurfaceQuadrature* quad = nullptr;

    size_t size() const { return values.size(); }
};

DensityVector sample_density(const ScalarField& phi, const SurfaceQuadrature& sq);

// m(η) = ∫ φ g_η dσ  (single layer, dσ-normalized).
Complex single_layer(const DensityVector& phi, const HPoint& eta);

// v(η) = ∫ φ (∂⊥g_η)_ξ 2dσ  (double layer; the potential-theory sector
// carries the kernel against 2dσ so the jump relations read v_± = PV ± φ).
Complex double_layer(const DensityVector& phi, const HPoint& eta);

enum class DiagonalRule { Punctured, Corrected };

// Dense Nyström matrices of K and K' on the quadrature nodes, kernel 2∂⊥g dσ.
// Corrected: the diagonal absorbs the row defect so constants map exactly to
// -1 (the flux identity); K' takes the weight-adjoint diagonal.
Eigen::MatrixXd build_K(const SurfaceQuadrature& sq, DiagonalRule rule = DiagonalRule::Corrected);
Eigen::MatrixXd build_Kprime(const SurfaceQuadrature& sq,
                             DiagonalRule rule = DiagonalRule::Corrected);

struct JumpProbeResult {
    double v_plus = 0.0, v_minus = 0.0;    // double-layer one-sided limits
    double dm_plus = 0.0, dm_minus = 0.0;  // ∂⊥ of the single layer (2dσ sector)
    double dv_plus = 0.0, dv_minus = 0.0;  // ∂⊥ of the double layer (Theorem-c probe)
    bool converged = true;
};

struct JumpProbeOptions {
    double h0 = 0.8;
    int levels = 5;          // h_k = h0·2^{-k}, k = 0..levels-1
    double points_per_h = 9; // near-surface grids resolve h with this many spacings
    int max_nodes_phi = 4096;
};

// Richardson / Neville extrapolation of the off-surface potentials along
// η ± h n_0(η). The density is a field: the probe refines its own surface
// grids per level (node-locked samples cannot be re-quadratured).
JumpProbeResult jump_probe(const ScalarField& phi, const HPoint& eta_on_boundary,
                           const JumpProbeOptions& opts = {});

struct BieReport {
    double residual = 0.0;    // range-component residual of (I+K')ψ = g
    double null_gap = 0.0;    // smallest retained singular value
    double compat_gap = 0.0;  // |∫ g dσ|
};

// Minimum-norm solution of ψ + K'ψ = g for circular g. The circular block of
// K' is assembled from the kernel's exact circular eigenstructure
// (K'[|z|P_p(t)] = -|z|P_p(t)/(2p+1)); the non-circular remainder falls back
// to the quadrature matrix. Throws CompatibilityError when |∫g dσ| > compat_tol.
DensityVector solve_integral_equation(const DensityVector& g, const SurfaceQuadrature& sq,
                                      double compat_tol = 1e-6, BieReport* report = nullptr);

// Dense K' with the circular block spectrally assembled (the matrix used by
// solve_integral_equation); exposed for inspection and tests.
Eigen::MatrixXd build_Kprime_spectral(const SurfaceQuadrature& sq, int max_mode = 48);

// Single layer of the solved density evaluated as the Neumann solution,
// u = ∫ ψ g_η 2dσ (the 2dσ sector matches the integral equation).
Complex bie_solution_value(const DensityVector& psi, const HPoint& eta);

} // namespace koranyi

#endif
