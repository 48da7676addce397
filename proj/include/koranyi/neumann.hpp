#ifndef KORANYI_NEUMANN_HPP
#define KORANYI_NEUMANN_HPP

#include <string>
#include <vector>

#include "koranyi/heisenberg.hpp"
#include "koranyi/kernels.hpp"
#include "koranyi/layer_potentials.hpp"
#include "koranyi/quadrature.hpp"

namespace koranyi {

struct NeumannProblem {
    ScalarField f;  // interior source, circular
    ScalarField g;  // boundary flux, circular
    int n = 1;
    double tol_compat = 1e-3;
};

// Deterministic interior probe grid (tensor polar, N <= r_max, φ = 0 plane
// plus the group identity for anchoring).
std::vector<HPoint> probe_grid(double r_max = 0.7, int n_r = 5, int n_alpha = 7);

struct SolutionReport {
    std::vector<HPoint> probes;
    std::vector<double> u;      // anchored to u(e) = 0
    double interior_residual = 0.0;
    double boundary_residual = 0.0;
    double compat_gap = 0.0;
    std::string constant_mode_note;
    BieReport bie;              // populated by the BIE method
};

struct SolveOptions {
    StencilParams stencil{1e-3, 4};
    std::vector<HPoint> probes = probe_grid();
    bool compute_residuals = true;
    int residual_probe_count = 12;  // interior residual sample size
    int boundary_probe_count = 8;
    int bie_max_mode = 48;
};

// Representation-formula solve: u(η) = -[∫ N_B f dv − ∫ N_B g dσ], anchored.
SolutionReport solve_via_kernel(const NeumannProblem& prob, const KernelCoefficients& coeffs,
                                const SurfaceQuadrature& sq, const VolumeQuadrature& vq,
                                const SolveOptions& opts = {});

// Integral-equation solve: particular solution for f (exact for polynomial
// circular sources, volume potential otherwise), then ψ + K'ψ = g' and
// u = u_1 + ∫ ψ g_η 2dσ, anchored.
SolutionReport solve_via_bie(const NeumannProblem& prob, const SurfaceQuadrature& sq,
                             const VolumeQuadrature& vq, const SolveOptions& opts = {});

// Also expose the solution as an evaluatable field (for verify_solution).
ScalarField kernel_solution_field(const NeumannProblem& prob, const KernelCoefficients& coeffs,
                                  const SurfaceQuadrature& sq, const VolumeQuadrature& vq);
ScalarField bie_solution_field(const NeumannProblem& prob, const SurfaceQuadrature& sq,
                               const VolumeQuadrature& vq, const SolveOptions& opts = {},
                               SolutionReport* report = nullptr);

// max |L_0 u − f| over interior probes and max |∂⊥u − g| over
// non-characteristic boundary probes.
std::pair<double, double> verify_solution(const ScalarField& u, const NeumannProblem& prob,
                                          const StencilParams& s, int interior_probes = 12,
                                          int boundary_probes = 8);

// Circular polynomial detection/solution of L_0 u = f on monomials
// |z|^{2a} t^b; returns true and fills u when f is such a polynomial.
bool polynomial_particular_solution(const ScalarField& f, int n, int max_degree,
                                    ScalarField* u_out);

std::string report_to_json(const SolutionReport& r);
std::string report_to_csv(const SolutionReport& r);

} // namespace koranyi

#endif
