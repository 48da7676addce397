#ifndef KORANYI_SPECIAL_FUNCTIONS_HPP
#define KORANYI_SPECIAL_FUNCTIONS_HPP

#include <complex>
#include <vector>

#include "koranyi/heisenberg.hpp"

namespace koranyi {

// Rising factorial x(x+1)...(x+m-1), empty product 1.
Complex pochhammer(Complex x, int m);

struct Hyp2F1Result {
    Complex value{0.0, 0.0};
    bool converged = false;
    int terms = 0;
    double tail_estimate = 0.0;
};

// Gauss hypergeometric series at real x in [0,1), direct summation with a
// geometric tail bound. Throws ConvergenceError (carrying the partial value)
// when max_terms is exhausted before the tail drops below rel_tol.
Hyp2F1Result hyp2f1(Complex a, Complex b, Complex c, double x, double rel_tol = 1e-12,
                    int max_terms = 400000);

struct CabIndex {
    int m = 0;
    Complex alpha{0.0, 0.0};
    Complex beta{0.0, 0.0};
};

// C_m^{(α,β)}(ς, ς̄) = Σ_p (α)_{m-p}(β)_p / ((m-p)! p!) ς̄^{m-p} ς^p.
Complex cab_poly(const CabIndex& idx, Complex sigma);

// Real-α equal-parameter fast path used by the kernel series.
double cab_poly_sym(int m, double alpha, Complex sigma);

struct HarmonicIndex {
    int k = 0;
    int l = 0;
    int n = 1;
};

// c_0..c_r with c_0 = 1 and the degree recurrence; r = min(k,l) (general)
// or r = k (circular). For n = 1 the vector is just {1}.
std::vector<double> cq_coeffs(const HarmonicIndex& idx, bool circular);

// Representative basis element. General: Σ_q c_q |z*|^{2q} z_1^{k-q} z̄_1^{l-q}.
// Circular: Σ_q c_q |z*|^{2q} |z_1|^{2(k-q)}.
Complex spherical_harmonic(const HarmonicIndex& idx, const std::vector<Complex>& z,
                           bool circular);

// Trapezoidal average (1/2π)∫ f([e^{iθ}z,t]) dθ over q_nodes samples.
Complex circular_average(const ScalarField& f, const HPoint& p, int q_nodes = 64);

} // namespace koranyi

#endif
