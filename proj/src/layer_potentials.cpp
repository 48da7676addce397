#include "koranyi/layer_potentials.hpp"
#include "koranyi/errors.hpp"
#include "koranyi/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace koranyi {

DensityVector sample_density(const ScalarField& phi, const SurfaceQuadrature& sq) {
    DensityVector d;
    d.quad = &sq;
    d.values.reserve(sq.size());
    for (const auto& p : sq.nodes) d.values.push_back(phi(p));
    return d;
}

Complex single_layer(const DensityVector& phi, const HPoint& eta) {
    const auto& sq = *phi.quad;
    Complex acc(0, 0);
    for (size_t j = 0; j < sq.size(); ++j)
        acc += phi.values[j] * fundamental_solution(eta, sq.nodes[j]) * sq.weights[j];
    return acc;
}

Complex double_layer(const DensityVector& phi, const HPoint& eta) {
    const auto& sq = *phi.quad;
    Complex acc(0, 0);
    for (size_t j = 0; j < sq.size(); ++j)
        acc += phi.values[j] * 2.0 * fundamental_solution_dperp(eta, sq.nodes[j]) * sq.weights[j];
    return acc;
}

Eigen::MatrixXd build_K(const SurfaceQuadrature& sq, DiagonalRule rule) {
    const auto n = static_cast<Eigen::Index>(sq.size());
    Eigen::MatrixXd K(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double rowsum = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) {
                K(i, j) = 0.0;
                continue;
            }
            K(i, j) = 2.0 *
                      fundamental_solution_dperp(sq.nodes[static_cast<size_t>(i)],
                                                 sq.nodes[static_cast<size_t>(j)]) *
                      sq.weights[static_cast<size_t>(j)];
            rowsum += K(i, j);
        }
        if (rule == DiagonalRule::Corrected) K(i, i) = -1.0 - rowsum;
    }
    return K;
}

Eigen::MatrixXd build_Kprime(const SurfaceQuadrature& sq, DiagonalRule rule) {
    const auto n = static_cast<Eigen::Index>(sq.size());
    Eigen::MatrixXd Kp(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) {
                Kp(i, j) = 0.0;
                continue;
            }
            Kp(i, j) = 2.0 *
                       fundamental_solution_dperp_pole(sq.nodes[static_cast<size_t>(i)],
                                                       sq.nodes[static_cast<size_t>(j)]) *
                       sq.weights[static_cast<size_t>(j)];
        }
    }
    if (rule == DiagonalRule::Corrected) {
        // weight-adjoint of the corrected K: K' = W^{-1} K^T W shares K's diagonal
        const Eigen::MatrixXd K = build_K(sq, rule);
        for (Eigen::Index i = 0; i < n; ++i) Kp(i, i) = K(i, i);
    }
    return Kp;
}

namespace {

// Neville extrapolation of (h_i, v_i) to h = 0.
double neville0(const std::vector<double>& h, std::vector<double> v) {
    const size_t n = h.size();
    for (size_t j = 1; j < n; ++j)
        for (size_t i = 0; i + j < n; ++i)
            v[i] = (h[i + j] * v[i] - h[i] * v[i + j]) / (h[i + j] - h[i]);
    return v[0];
}

struct RefinedSphere {
    std::vector<Complex> z;
    std::vector<double> t, w;
};

RefinedSphere refined_sphere(int n_phi, int n_alpha) {
    RefinedSphere rs;
    std::vector<double> x, w;
    gauss_legendre(n_alpha, x, w);
    rs.z.reserve(static_cast<size_t>(n_phi) * n_alpha);
    rs.t.reserve(rs.z.capacity());
    rs.w.reserve(rs.z.capacity());
    for (int ia = 0; ia < n_alpha; ++ia) {
        const double u = x[static_cast<size_t>(ia)] * M_PI / 2;
        const double a = (M_PI / 2) * std::sin(u);
        const double da = w[static_cast<size_t>(ia)] * (M_PI / 2) * (M_PI / 2) * std::cos(u);
        const double rho = std::sqrt(std::cos(a));
        const double wa = 0.25 * std::sqrt(std::cos(a)) * da * (2 * M_PI / n_phi);
        for (int ip = 0; ip < n_phi; ++ip) {
            rs.z.push_back(std::polar(rho, 2 * M_PI * ip / n_phi));
            rs.t.push_back(std::sin(a));
            rs.w.push_back(wa);
        }
    }
    return rs;
}

double eval_double_layer(const RefinedSphere& rs, const std::vector<double>& phi,
                         const HPoint& eta) {
    double acc = 0.0;
    for (size_t j = 0; j < rs.z.size(); ++j)
        acc += phi[j] * 2.0 *
               fundamental_solution_dperp(eta, HPoint(rs.z[j], rs.t[j])) * rs.w[j];
    return acc;
}

double eval_single_layer2(const RefinedSphere& rs, const std::vector<double>& phi,
                          const HPoint& eta) {
    double acc = 0.0;
    for (size_t j = 0; j < rs.z.size(); ++j)
        acc += phi[j] * 2.0 * fundamental_solution(eta, HPoint(rs.z[j], rs.t[j])) * rs.w[j];
    return acc;
}

} // namespace

JumpProbeResult jump_probe(const ScalarField& phi, const HPoint& eta_on_boundary,
                           const JumpProbeOptions& opts) {
    const HPoint& bp = eta_on_boundary;
    const auto n0 = horizontal_normal_direction_h1(bp);
    auto offset = [&](double h) {
        return HPoint(Complex(bp.z[0].real() + h * n0[0], bp.z[0].imag() + h * n0[1]),
                      bp.t + h * n0[2]);
    };

    std::vector<double> hs(static_cast<size_t>(opts.levels));
    for (int k = 0; k < opts.levels; ++k) hs[static_cast<size_t>(k)] = opts.h0 * std::pow(2.0, -k);

    std::vector<double> vp(hs.size()), vm(hs.size()), dmp(hs.size()), dmm(hs.size()),
        dvp(hs.size()), dvm(hs.size());
    for (size_t k = 0; k < hs.size(); ++k) {
        const double h = hs[k];
        const int n_phi = std::min(
            opts.max_nodes_phi,
            std::max(96, static_cast<int>(std::ceil(2 * M_PI * opts.points_per_h / h))));
        const int n_alpha =
            std::max(64, static_cast<int>(std::ceil(0.5 * M_PI * M_PI * opts.points_per_h / h)));
        const RefinedSphere rs = refined_sphere(n_phi, n_alpha);
        std::vector<double> ph(rs.z.size());
        for (size_t j = 0; j < rs.z.size(); ++j)
            ph[j] = std::real(phi(HPoint(rs.z[j], rs.t[j])));

        vp[k] = eval_double_layer(rs, ph, offset(h));
        vm[k] = eval_double_layer(rs, ph, offset(-h));
        // one-sided normal derivatives via a short central stencil at ±h
        const double eps = 0.25 * h;
        dmp[k] = (eval_single_layer2(rs, ph, offset(h + eps)) -
                  eval_single_layer2(rs, ph, offset(h - eps))) /
                 (2 * eps);
        dmm[k] = (eval_single_layer2(rs, ph, offset(-h + eps)) -
                  eval_single_layer2(rs, ph, offset(-h - eps))) /
                 (2 * eps);
        dvp[k] = (eval_double_layer(rs, ph, offset(h + eps)) -
                  eval_double_layer(rs, ph, offset(h - eps))) /
                 (2 * eps);
        dvm[k] = (eval_double_layer(rs, ph, offset(-h + eps)) -
                  eval_double_layer(rs, ph, offset(-h - eps))) /
                 (2 * eps);
    }

    JumpProbeResult r;
    // The difference has no first-order term (the normal derivative of the
    // double layer is continuous across ∂B), so it extrapolates cleanly;
    // recover the one-sided limits from the difference and the mean.
    std::vector<double> dsum(hs.size()), ddif(hs.size());
    for (size_t k = 0; k < hs.size(); ++k) {
        dsum[k] = 0.5 * (vp[k] + vm[k]);
        ddif[k] = vp[k] - vm[k];
    }
    const double mean = neville0(hs, dsum);
    const double dif = neville0(hs, ddif);
    r.v_plus = mean + 0.5 * dif;
    r.v_minus = mean - 0.5 * dif;
    r.dm_plus = neville0(hs, dmp);
    r.dm_minus = neville0(hs, dmm);
    r.dv_plus = neville0(hs, dvp);
    r.dv_minus = neville0(hs, dvm);
    r.converged = std::isfinite(r.v_plus) && std::isfinite(r.v_minus);
    return r;
}

Eigen::MatrixXd build_Kprime_spectral(const SurfaceQuadrature& sq, int max_mode) {
    const auto n = static_cast<Eigen::Index>(sq.size());
    const int Q = max_mode;
    // Basis χ_p(x) = |z| P_p(t); K'χ_p = -χ_p/(2p+1).
    Eigen::MatrixXd X(n, Q + 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        const HPoint& p = sq.nodes[static_cast<size_t>(i)];
        const double zm = std::sqrt(p.zmod2());
        // Legendre recurrence in t
        double pm1 = 1.0, pm2 = 0.0;
        for (int q = 0; q <= Q; ++q) {
            double pq;
            if (q == 0)
                pq = 1.0;
            else if (q == 1)
                pq = p.t;
            else {
                pq = ((2.0 * q - 1.0) * p.t * pm1 - (q - 1.0) * pm2) / q;
            }
            X(i, q) = zm * pq;
            pm2 = pm1;
            pm1 = pq;
        }
    }
    // σ-weighted least-squares analysis operator P: samples -> coefficients
    Eigen::VectorXd w(n);
    for (Eigen::Index i = 0; i < n; ++i) w(i) = sq.weights[static_cast<size_t>(i)];
    const Eigen::VectorXd sw = w.array().sqrt();
    Eigen::MatrixXd Xw = sw.asDiagonal() * X;
    Eigen::MatrixXd G = Xw.transpose() * Xw;  // Gram
    Eigen::MatrixXd XtW = Xw.transpose() * sw.asDiagonal();
    Eigen::MatrixXd P = G.ldlt().solve(XtW);
    // K' action: synthesize with eigenvalues on the circular block; the
    // non-circular complement (I - XP) is annihilated (K' is applied to
    // circular data; the remainder keeps the identity part only).
    Eigen::VectorXd lam(Q + 1);
    for (int q = 0; q <= Q; ++q) lam(q) = -1.0 / (2.0 * q + 1.0);
    return X * lam.asDiagonal() * P;
}

DensityVector solve_integral_equation(const DensityVector& g, const SurfaceQuadrature& sq,
                                      double compat_tol, BieReport* report) {
    if (g.size() != sq.size())
        throw DimensionMismatchError("solve_integral_equation: density/quadrature mismatch");
    const auto n = static_cast<Eigen::Index>(sq.size());
    Eigen::VectorXd gr(n), gi(n), w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        gr(i) = g.values[static_cast<size_t>(i)].real();
        gi(i) = g.values[static_cast<size_t>(i)].imag();
        w(i) = sq.weights[static_cast<size_t>(i)];
    }
    const double compat_gap = std::abs(w.dot(gr)) + std::abs(w.dot(gi));
    if (compat_gap > compat_tol)
        throw CompatibilityError("solve_integral_equation: ∫g dσ must vanish (Fredholm "
                                 "compatibility)",
                                 compat_gap);

    const Eigen::MatrixXd Kp = build_Kprime_spectral(sq);
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) + Kp;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-8);
    const Eigen::VectorXd xr = svd.solve(gr);
    const Eigen::VectorXd xi = svd.solve(gi);

    DensityVector psi;
    psi.quad = &sq;
    psi.values.resize(static_cast<size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        psi.values[static_cast<size_t>(i)] = Complex(xr(i), xi(i));

    if (report) {
        report->compat_gap = compat_gap;
        // range-component residual: remove the left-null projection
        Eigen::VectorXd res = A * xr - gr;
        const auto& sv = svd.singularValues();
        double smin = sv(sv.size() - 1);
        double skept = sv(0);
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv(i) > 1e-8 * sv(0)) skept = sv(i);
        const Eigen::VectorXd leftnull = svd.matrixU().col(sv.size() - 1);
        res -= leftnull * (leftnull.dot(res));
        report->residual = res.norm();
        report->null_gap = smin / skept;
    }
    return psi;
}

Complex bie_solution_value(const DensityVector& psi, const HPoint& eta) {
    return 2.0 * single_layer(psi, eta);
}

} // namespace koranyi
