#include "koranyi/special_functions.hpp"
#include "koranyi/errors.hpp"

#include <cmath>

namespace koranyi {

Complex pochhammer(Complex x, int m) {
    Complex acc(1.0, 0.0);
    for (int i = 0; i < m; ++i) acc *= x + static_cast<double>(i);
    return acc;
}

Hyp2F1Result hyp2f1(Complex a, Complex b, Complex c, double x, double rel_tol, int max_terms) {
    if (x < 0.0 || x >= 1.0) throw RegimeError("hyp2f1: x outside [0,1)");
    {
        // c must not be a nonpositive integer
        const double cr = std::real(c), ci = std::imag(c);
        if (std::abs(ci) < 1e-14 && cr <= 0.0 && std::abs(cr - std::round(cr)) < 1e-14)
            throw RegimeError("hyp2f1: c is a nonpositive integer");
    }
    Hyp2F1Result res;
    Complex term(1.0, 0.0);
    Complex sum(1.0, 0.0);
    for (int s = 0; s < max_terms; ++s) {
        const Complex ratio = (a + static_cast<double>(s)) * (b + static_cast<double>(s)) /
                              ((c + static_cast<double>(s)) * (1.0 + static_cast<double>(s))) * x;
        term *= ratio;
        sum += term;
        const double r = std::abs(ratio);
        if (r < 1.0) {
            const double tail = std::abs(term) * r / (1.0 - r);
            if (tail <= rel_tol * std::abs(sum)) {
                res.value = sum;
                res.converged = true;
                res.terms = s + 2;
                res.tail_estimate = tail;
                return res;
            }
        }
    }
    res.value = sum;
    res.converged = false;
    res.terms = max_terms;
    res.tail_estimate = std::abs(term);
    throw ConvergenceError("hyp2f1: series did not reach tolerance", std::abs(sum));
}

Complex cab_poly(const CabIndex& idx, Complex sigma) {
    const Complex sbar = std::conj(sigma);
    Complex acc(0.0, 0.0);
    // coefficient (α)_{m-p}(β)_p / ((m-p)! p!), built incrementally in p
    Complex coef = pochhammer(idx.alpha, idx.m);
    double fact = 1.0;
    for (int i = 2; i <= idx.m; ++i) fact *= i;
    coef /= fact;  // p = 0 term: (α)_m / m!
    Complex spow(1.0, 0.0);
    Complex sbpow = std::pow(sbar, idx.m);
    for (int p = 0; p <= idx.m; ++p) {
        acc += coef * sbpow * spow;
        if (p == idx.m) break;
        // advance p -> p+1
        coef *= (idx.beta + static_cast<double>(p)) * static_cast<double>(idx.m - p) /
                ((idx.alpha + static_cast<double>(idx.m - p - 1)) * static_cast<double>(p + 1));
        spow *= sigma;
        sbpow /= sbar;
    }
    return acc;
}

double cab_poly_sym(int m, double alpha, Complex sigma) {
    // Equal parameters and real alpha: the sum is real and conjugation-symmetric.
    // Evaluated without complex powers via the binomial-style recurrence.
    std::vector<double> coef(static_cast<size_t>(m) + 1);
    double c = 1.0;
    for (int i = 0; i < m; ++i) c *= (alpha + i) / (1.0 + i);
    coef[0] = c;  // (α)_m / m!
    for (int p = 0; p < m; ++p)
        coef[static_cast<size_t>(p) + 1] = coef[static_cast<size_t>(p)] * (alpha + p) *
                                           static_cast<double>(m - p) /
                                           ((alpha + (m - p - 1)) * static_cast<double>(p + 1));
    // Σ_p coef_p ς̄^{m-p} ς^p ; pair p and m-p to stay real.
    const Complex sbar = std::conj(sigma);
    double acc = 0.0;
    for (int p = 0; 2 * p <= m; ++p) {
        const Complex cross = std::pow(sbar, m - p) * std::pow(sigma, p);
        if (2 * p == m)
            acc += coef[static_cast<size_t>(p)] * std::real(cross);
        else
            acc += 2.0 * coef[static_cast<size_t>(p)] * std::real(cross);
    }
    return acc;
}

std::vector<double> cq_coeffs(const HarmonicIndex& idx, bool circular) {
    if (idx.k < 0 || idx.l < 0) throw RegimeError("cq_coeffs: negative degree");
    if (idx.n == 1) return {1.0};
    const int r = circular ? idx.k : std::min(idx.k, idx.l);
    std::vector<double> c(static_cast<size_t>(r) + 1);
    c[0] = 1.0;
    for (int q = 0; q < r; ++q) {
        const double num = circular ? static_cast<double>(idx.k - q) * (idx.k - q)
                                    : static_cast<double>(idx.k - q) * (idx.l - q);
        c[static_cast<size_t>(q) + 1] =
            -num * c[static_cast<size_t>(q)] /
            (static_cast<double>(q + 1) * static_cast<double>(idx.n + q - 1));
    }
    return c;
}

Complex spherical_harmonic(const HarmonicIndex& idx, const std::vector<Complex>& z,
                           bool circular) {
    if (static_cast<int>(z.size()) != idx.n)
        throw DimensionMismatchError("spherical_harmonic: |z| != n");
    const auto c = cq_coeffs(idx, circular);
    double zstar2 = 0.0;
    for (size_t j = 1; j < z.size(); ++j) zstar2 += std::norm(z[j]);
    const Complex z1 = z[0];
    Complex acc(0.0, 0.0);
    double zsq = 1.0;
    for (size_t q = 0; q < c.size(); ++q) {
        const int kq = idx.k - static_cast<int>(q);
        if (circular) {
            acc += c[q] * zsq * std::pow(std::norm(z1), kq);
        } else {
            const int lq = idx.l - static_cast<int>(q);
            acc += c[q] * zsq * std::pow(z1, kq) * std::pow(std::conj(z1), lq);
        }
        zsq *= zstar2;
    }
    return acc;
}

Complex circular_average(const ScalarField& f, const HPoint& p, int q_nodes) {
    if (q_nodes < 8) throw RegimeError("circular_average: q_nodes must be >= 8");
    Complex acc(0.0, 0.0);
    for (int i = 0; i < q_nodes; ++i) {
        const double theta = 2.0 * M_PI * i / q_nodes;
        acc += f(gauge_rotate(p, theta));
    }
    return acc / static_cast<double>(q_nodes);
}

} // namespace koranyi
