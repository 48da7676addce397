#include "koranyi/kernels.hpp"
#include "koranyi/errors.hpp"
#include "koranyi/quadrature.hpp"
#include "koranyi/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

namespace koranyi {

namespace {

constexpr double kPoleEps = 1e-12;

struct PairGeom {
    Complex C;   // |z|² + |z'|² + i(t − t')
    Complex P;   // 2 z·z̄'
};

PairGeom pair_geom(const HPoint& eta, const HPoint& xi) {
    if (eta.dim() != xi.dim()) throw DimensionMismatchError("kernel: dimension mismatch");
    Complex P(0.0, 0.0);
    for (size_t j = 0; j < xi.z.size(); ++j) P += xi.z[j] * std::conj(eta.z[j]);
    P *= 2.0;
    const Complex C(xi.zmod2() + eta.zmod2(), xi.t - eta.t);
    return {C, P};
}

} // namespace

double a0_constant(int n) {
    if (n < 1) throw RegimeError("a0_constant: n >= 1 required");
    const double g = std::tgamma(0.5 * n);
    return std::pow(2.0, n - 2) * g * g / std::pow(M_PI, n + 1);
}

double fundamental_solution(const HPoint& eta, const HPoint& xi) {
    const auto [C, P] = pair_geom(eta, xi);
    const double d = std::abs(C - P);
    if (d < kPoleEps) throw PoleError("fundamental_solution: evaluation at the pole");
    return a0_constant(xi.dim()) * std::pow(d, -xi.dim());
}

double averaged_fundamental(const HPoint& eta, const HPoint& xi) {
    const int n = xi.dim();
    const auto [C, P] = pair_geom(eta, xi);
    const double c2 = std::norm(C);
    if (c2 < kPoleEps * kPoleEps)
        throw PoleError("averaged_fundamental: both points at the group center");
    const double x = std::norm(P) / c2;
    if (x >= 1.0)
        throw RegimeError("averaged_fundamental: evaluation on the pole orbit");
    double F;
    if (n == 1 && x > 1.0 - 5e-4) {
        // logarithmic asymptotics of F(1/2,1/2;1;x) at the orbit: the direct
        // series needs O(1/(1-x)) terms there
        const double w = 1.0 - x;
        const double L = std::log(16.0 / w);
        F = (L + 0.25 * w * (L - 2.0)) / M_PI;
    } else {
        F = std::real(
            hyp2f1(Complex(0.5 * n, 0.0), Complex(0.5 * n, 0.0), Complex(1.0, 0.0), x).value);
    }
    return a0_constant(n) * std::pow(c2, -0.5 * n) * F;
}

double fundamental_solution_dperp(const HPoint& eta, const HPoint& xi) {
    const int n = xi.dim();
    const auto [C, P] = pair_geom(eta, xi);
    const Complex D = C - P;
    const double d = std::abs(D);
    if (d < kPoleEps) throw PoleError("fundamental_solution_dperp: evaluation at the pole");
    const double zmod2 = xi.zmod2();
    const double zmod = std::sqrt(zmod2);
    if (zmod == 0.0) return 0.0;  // the characteristic limit of ∂⊥g is 0
    const Complex A(zmod2, xi.t);
    const double bracket =
        2.0 * zmod2 * std::real(std::conj(A) * D) - std::real(std::conj(A) * P * std::conj(D));
    return -(n * a0_constant(n) / zmod) * std::pow(d, -n - 2) * bracket;
}

double fundamental_solution_dperp_pole(const HPoint& eta, const HPoint& xi) {
    // g_η(ξ) = g_ξ(η): the pole derivative is the ξ-derivative with slots swapped.
    return fundamental_solution_dperp(xi, eta);
}

// ---------------------------------------------------------------------------
// Series machinery.
//
// Basis term (m,k) of ḡ_{η^{-1}}(ξ^{-1}):
//   N(ξ)^{-2n-4(m+k)} C_m^{(n/2+k)}(ς_ξ) Y_k(z_ξ) C_m^{(n/2+k)}(ς_η) Y_k(z_η)
// with ς = t + i|z|² and circular Y_k. Dropping the N-power gives the Kelvin
// term; (n/(m+k)) replaces the power for the harmonic correction.
// ---------------------------------------------------------------------------

namespace {

struct SeriesPoint {
    Complex sigma;                 // t + i|z|²
    double n4 = 0.0;               // |ς|² = N⁴
    std::vector<double> yk;        // circular Y_k(z), k = 0..K
};

SeriesPoint series_point(const HPoint& p, int K) {
    SeriesPoint sp;
    sp.sigma = Complex(p.t, p.zmod2());
    sp.n4 = std::norm(sp.sigma);
    sp.yk.resize(static_cast<size_t>(K) + 1);
    for (int k = 0; k <= K; ++k) {
        HarmonicIndex idx{k, k, p.dim()};
        sp.yk[static_cast<size_t>(k)] = std::real(spherical_harmonic(idx, p.z, true));
    }
    return sp;
}

enum class SeriesKind { Averaged, Kelvin, Correction };

double series_sum(const KernelCoefficients& c, const HPoint& eta, const HPoint& xi,
                  SeriesKind kind, double* tail_estimate) {
    const int n = c.n;
    const SeriesPoint se = series_point(eta, c.K);
    const SeriesPoint sx = series_point(xi, c.K);
    double acc = 0.0;
    double level_mag = 0.0;  // Σ|terms| at the top level carrying nonzero coefficients
    int top = 0;
    for (int k = 0; k <= c.K; ++k)
        for (int m = 0; m <= c.M; ++m)
            if (c.at(m, k) != 0.0) top = std::max(top, m + k);
    for (int k = 0; k <= c.K; ++k) {
        const double alpha = 0.5 * n + k;
        for (int m = 0; m <= c.M; ++m) {
            const double amk = c.at(m, k);
            if (amk == 0.0 && kind != SeriesKind::Correction) {
                continue;
            }
            if (kind == SeriesKind::Correction && (m + k == 0 || amk == 0.0)) continue;
            double term = amk * cab_poly_sym(m, alpha, sx.sigma) *
                          sx.yk[static_cast<size_t>(k)] * cab_poly_sym(m, alpha, se.sigma) *
                          se.yk[static_cast<size_t>(k)];
            switch (kind) {
                case SeriesKind::Averaged:
                    term *= std::pow(sx.n4, -0.5 * n - (m + k));
                    break;
                case SeriesKind::Kelvin:
                    break;
                case SeriesKind::Correction:
                    term *= static_cast<double>(n) / (m + k);
                    break;
            }
            acc += term;
            if (m + k == top) level_mag += std::abs(term);
        }
    }
    if (tail_estimate) {
        const double Ne = gauge_norm(eta), Nx = gauge_norm(xi);
        double rho = 0.0;
        if (kind == SeriesKind::Averaged) {
            rho = (Nx > 0) ? (Ne / Nx) * (Ne / Nx) : 0.0;
        } else {
            rho = (Ne * Nx) * (Ne * Nx);
        }
        *tail_estimate = (rho < 1.0) ? level_mag * rho / (1.0 - rho) : INFINITY;
    }
    return acc;
}

} // namespace

double series_averaged_fundamental(const KernelCoefficients& c, const HPoint& eta,
                                   const HPoint& xi, double* tail_estimate) {
    if (!(gauge_norm(eta) < gauge_norm(xi)))
        throw RegimeError("series_averaged_fundamental: requires N(eta) < N(xi)");
    return series_sum(c, eta, xi, SeriesKind::Averaged, tail_estimate);
}

double series_kelvin(const KernelCoefficients& c, const HPoint& eta, const HPoint& xi,
                     double* tail_estimate) {
    if (!(gauge_norm(eta) * gauge_norm(xi) < 1.0))
        throw RegimeError("series_kelvin: requires N(eta)·N(xi) < 1");
    return series_sum(c, eta, xi, SeriesKind::Kelvin, tail_estimate);
}

double harmonic_correction(const KernelCoefficients& c, const HPoint& eta, const HPoint& xi) {
    return series_sum(c, eta, xi, SeriesKind::Correction, nullptr) + c.b0;
}

double neumann_kernel(const KernelCoefficients& c, const HPoint& eta, const HPoint& xi) {
    const HPoint ei = inverse(eta);
    const HPoint xii = inverse(xi);
    const double gbar = averaged_fundamental(ei, xii);
    // truncated sums are polynomials in the series variables: no regime gate
    // here, so the kernel stays evaluatable for stencils straddling ∂B
    const double kelv = series_sum(c, eta, xi, SeriesKind::Kelvin, nullptr);
    const double h = series_sum(c, eta, xi, SeriesKind::Correction, nullptr) + c.b0;
    const double n2 = gauge_norm(xi) * gauge_norm(xi);
    return gbar + kelv + h + c.n * c.at(0, 0) * n2;
}

// ---------------------------------------------------------------------------
// Coefficient fit.
// ---------------------------------------------------------------------------

namespace {

struct SamplePair {
    HPoint eta, xi;
    double target = 0.0;  // closed-form ḡ_{η^{-1}}(ξ^{-1}) = averaged_fundamental(η,ξ)
};

// Deterministic tensor grid over (r_η, α_η, r_ξ, α_ξ), ratio-capped. The
// offset shifts nodes to build a held-out grid disjoint from the training one.
std::vector<SamplePair> sample_grid(int n, const FitOptions& o, int per_axis, double offset,
                                    double ratio_cap) {
    std::vector<SamplePair> out;
    auto lin = [per_axis, offset](double lo, double hi, int i) {
        return lo + (hi - lo) * (i + 0.5 + offset) / per_axis;
    };
    const double amax = M_PI / 2 * 0.995;
    for (int ie = 0; ie < per_axis; ++ie) {
        const double re = lin(o.r_eta_min, o.r_eta_max, ie);
        for (int je = 0; je < per_axis; ++je) {
            const double ae = lin(-amax, amax, je);
            for (int ix = 0; ix < per_axis; ++ix) {
                const double rx = lin(o.r_xi_min, o.r_xi_max, ix);
                if (re / rx > ratio_cap) continue;
                for (int jx = 0; jx < per_axis; ++jx) {
                    const double ax = lin(-amax, amax, jx);
                    SamplePair sp;
                    // circularity: the fit lives on (|z|, t) per point
                    std::vector<Complex> ze(static_cast<size_t>(n), Complex(0, 0));
                    std::vector<Complex> zx(static_cast<size_t>(n), Complex(0, 0));
                    ze[0] = re * std::sqrt(std::cos(ae));
                    zx[0] = rx * std::sqrt(std::cos(ax));
                    sp.eta = HPoint(ze, re * re * std::sin(ae));
                    sp.xi = HPoint(zx, rx * rx * std::sin(ax));
                    sp.target = averaged_fundamental(sp.eta, sp.xi);
                    out.push_back(std::move(sp));
                }
            }
        }
    }
    return out;
}

double basis_value(int n, int m, int k, const SeriesPoint& se, const SeriesPoint& sx) {
    const double alpha = 0.5 * n + k;
    return std::pow(sx.n4, -0.5 * n - (m + k)) * cab_poly_sym(m, alpha, sx.sigma) *
           sx.yk[static_cast<size_t>(k)] * cab_poly_sym(m, alpha, se.sigma) *
           se.yk[static_cast<size_t>(k)];
}

} // namespace

KernelCoefficients project_coefficients(int n, int M, int K, const FitOptions& opts,
                                        FitReport* report) {
    if (n < 1 || M < 0 || K < 0) throw FitError("project_coefficients: bad truncation orders");
    const auto train = sample_grid(n, opts, opts.grid, 0.0, opts.ratio_max);
    if (train.size() < static_cast<size_t>((M + 1) * (K + 1)))
        throw FitError("project_coefficients: sample grid smaller than the coefficient count");

    const size_t S = train.size();
    std::vector<SeriesPoint> se(S), sx(S);
    Eigen::VectorXd resid(S);
    Eigen::VectorXd wrow(S);
    for (size_t i = 0; i < S; ++i) {
        se[i] = series_point(train[i].eta, K);
        sx[i] = series_point(train[i].xi, K);
        wrow(static_cast<Eigen::Index>(i)) = 1.0 / std::abs(train[i].target);
        resid(static_cast<Eigen::Index>(i)) = 1.0;  // weighted target: tgt * (1/|tgt|)
    }

    KernelCoefficients c;
    c.n = n;
    c.M = M;
    c.K = K;
    c.a.assign(static_cast<size_t>(M) + 1, std::vector<double>(static_cast<size_t>(K) + 1, 0.0));

    double prev_rms = resid.norm() / std::sqrt(static_cast<double>(S));
    double worst_cond = 0.0;
    int kept = 0;
    const int Mfit = M + std::max(0, opts.guard);  // guard degrees absorb the tail
    for (int k = 0; k <= K; ++k) {
        Eigen::MatrixXd A(S, Mfit + 1);
        for (size_t i = 0; i < S; ++i)
            for (int m = 0; m <= Mfit; ++m)
                A(static_cast<Eigen::Index>(i), m) =
                    basis_value(n, m, k, se[i], sx[i]) * wrow(static_cast<Eigen::Index>(i));
        Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& sv = svd.singularValues();
        const double smax = sv(0);
        double smin = smax;
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv(i) > opts.svd_threshold * smax) smin = sv(i);
        const double cond = smax / smin;
        if (cond > opts.condition_limit)
            throw FitError("project_coefficients: ill-conditioned tower fit (condition estimate " +
                           std::to_string(cond) + ")");
        svd.setThreshold(opts.svd_threshold);
        Eigen::VectorXd coef = svd.solve(resid);
        Eigen::VectorXd new_resid = resid - A * coef;
        const double rms = new_resid.norm() / std::sqrt(static_cast<double>(S));
        const bool keep = (k == 0) || (rms * opts.tower_gain < prev_rms);
        if (keep) {
            for (int m = 0; m <= M; ++m) c.a[static_cast<size_t>(m)][static_cast<size_t>(k)] = coef(m);
            resid = new_resid;
            prev_rms = rms;
            worst_cond = std::max(worst_cond, cond);
            ++kept;
        }
    }
    c.condition = worst_cond;

    // Held-out residual on the offset grid, restricted to the tighter ratio cap.
    const auto held = sample_grid(n, opts, opts.grid, 0.23, opts.heldout_ratio_max);
    double hmax = 0.0;
    for (const auto& sp : held) {
        const double v = series_averaged_fundamental(c, sp.eta, sp.xi);
        hmax = std::max(hmax, std::abs(v - sp.target) / std::abs(sp.target));
    }
    c.residual = hmax;

    // b0: make ∫ N_B(e, ξ) dσ(ξ) vanish for the reference pole η = e.
    if (n == 1) {
        c.b0 = 0.0;
        const HPoint e = identity_point(1);
        // 1D ring rule suffices: the integrand is circular.
        const int nr = 96;
        double s = 0.0, area = 0.0;
        std::vector<double> x, w;
        gauss_legendre(nr, x, w);
        for (int i = 0; i < nr; ++i) {
            const double u = x[static_cast<size_t>(i)] * M_PI / 2;
            const double a = (M_PI / 2) * std::sin(u);
            const double da = w[static_cast<size_t>(i)] * (M_PI / 2) * (M_PI / 2) * std::cos(u);
            const double ring = 2 * M_PI * 0.25 * std::sqrt(std::cos(a)) * da;
            const HPoint p(std::polar(std::sqrt(std::cos(a)), 0.0), std::sin(a));
            s += neumann_kernel(c, e, p) * ring;
            area += ring;
        }
        c.b0 = -s / area;
    }

    if (report) {
        report->residual_train_rms = prev_rms;
        report->residual_heldout_max = hmax;
        report->condition = worst_cond;
        report->towers_kept = kept;
        report->samples = static_cast<int>(S);
    }
    return c;
}

std::string coefficients_to_json(const KernelCoefficients& c) {
    nlohmann::json j;
    j["n"] = c.n;
    j["M"] = c.M;
    j["K"] = c.K;
    j["b0"] = c.b0;
    j["residual"] = c.residual;
    j["condition"] = c.condition;
    auto& arr = j["a"];
    arr = nlohmann::json::array();
    for (int m = 0; m <= c.M; ++m)
        for (int k = 0; k <= c.K; ++k)
            arr.push_back({m, k, c.at(m, k), 0.0});
    return j.dump(2);
}

KernelCoefficients coefficients_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    KernelCoefficients c;
    c.n = j.at("n").get<int>();
    c.M = j.at("M").get<int>();
    c.K = j.at("K").get<int>();
    c.b0 = j.at("b0").get<double>();
    c.residual = j.value("residual", 0.0);
    c.condition = j.value("condition", 0.0);
    c.a.assign(static_cast<size_t>(c.M) + 1,
               std::vector<double>(static_cast<size_t>(c.K) + 1, 0.0));
    for (const auto& row : j.at("a")) {
        const int m = row.at(0).get<int>();
        const int k = row.at(1).get<int>();
        c.a[static_cast<size_t>(m)][static_cast<size_t>(k)] = row.at(2).get<double>();
    }
    return c;
}

void save_coefficients(const KernelCoefficients& c, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_coefficients: cannot open " + path);
    out << coefficients_to_json(c) << "\n";
}

KernelCoefficients load_coefficients(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_coefficients: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return coefficients_from_json(text);
}

} // namespace koranyi
