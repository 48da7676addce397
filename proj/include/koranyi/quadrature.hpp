#ifndef KORANYI_QUADRATURE_HPP
#define KORANYI_QUADRATURE_HPP

#include <string>
#include <vector>

#include "koranyi/heisenberg.hpp"

namespace koranyi {

// Gauss-Legendre nodes/weights on [-1,1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

// Nodes and dσ-weights on the unit Korányi sphere. The measure carries the
// Green-identity normalization dσ = (1/4)(‖∇_0N‖_0/‖∇N‖)ds, which for n = 1
// is (1/4)√cosα dα dφ in the polar chart. The two characteristic poles get
// zero weight (they are never nodes: the α rule is open).
struct SurfaceQuadrature {
    std::vector<HPoint> nodes;
    std::vector<double> weights;
    bool char_excluded = true;
    int n = 1;
    int n_phi = 0, n_alpha = 0;

    size_t size() const { return nodes.size(); }
    double area() const;  // Σ weights
};

SurfaceQuadrature sphere_quadrature(int n, int n_phi, int n_alpha);

struct VolumeQuadrature {
    std::vector<HPoint> nodes;
    std::vector<double> weights;
    int n = 1;
    int n_r = 0, n_phi = 0, n_alpha = 0;

    size_t size() const { return nodes.size(); }
    double volume() const;
};

VolumeQuadrature ball_quadrature(int n, int n_r, int n_phi, int n_alpha);

// Compensated sums; deterministic evaluation order.
double integrate(const SurfaceQuadrature& sq, const ScalarField& f);
double integrate(const VolumeQuadrature& vq, const ScalarField& f);
Complex integrate_complex(const SurfaceQuadrature& sq, const ScalarField& f);

// |∫(u L_0 v − v L_0 u)dv − ∫(u ∂⊥v − v ∂⊥u)dσ|, stencil derivatives.
double greens_identity_residual(const ScalarField& u, const ScalarField& v,
                                const SurfaceQuadrature& sq, const VolumeQuadrature& vq,
                                const StencilParams& s);

struct SolvabilityResult {
    double gap = 0.0;
    bool pass = false;
};

// gap = |∫f dv − ∫g dσ| against tol.
SolvabilityResult solvability_check(const ScalarField& f, const ScalarField& g,
                                    const SurfaceQuadrature& sq, const VolumeQuadrature& vq,
                                    double tol);

std::string surface_to_json(const SurfaceQuadrature& sq);
std::string volume_to_json(const VolumeQuadrature& vq);

} // namespace koranyi

#endif
