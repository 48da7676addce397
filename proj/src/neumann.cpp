#include "koranyi/neumann.hpp"
#include "koranyi/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <sstream>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

namespace koranyi {

std::vector<HPoint> probe_grid(double r_max, int n_r, int n_alpha) {
    std::vector<HPoint> probes;
    probes.push_back(identity_point(1));
    for (int ir = 1; ir <= n_r; ++ir) {
        const double r = r_max * ir / n_r;
        for (int ia = 0; ia < n_alpha; ++ia) {
            const double a = -1.2 + 2.4 * ia / (n_alpha - 1);
            probes.emplace_back(Complex(r * std::sqrt(std::cos(a)), 0.0), r * r * std::sin(a));
        }
    }
    return probes;
}

namespace {

void check_circular(const NeumannProblem& prob) {
    if (!prob.f.circular || !prob.g.circular)
        throw RegimeError("neumann solve: f and g must be circular");
    // spot check on sampled orbits
    const HPoint p(Complex(0.61, 0.2), 0.31);
    for (const ScalarField* fld : {&prob.f, &prob.g}) {
        const Complex v0 = (*fld)(p);
        const Complex v1 = (*fld)(gauge_rotate(p, 1.234));
        if (std::abs(v1 - v0) > 1e-8 * (1.0 + std::abs(v0)))
            throw RegimeError("neumann solve: field flagged circular fails the orbit spot check");
    }
}

double check_compat(const NeumannProblem& prob, const SurfaceQuadrature& sq,
                    const VolumeQuadrature& vq) {
    const auto res = solvability_check(prob.f, prob.g, sq, vq, prob.tol_compat);
    if (!res.pass)
        throw CompatibilityError("neumann solve: solvability condition ∫f dv = ∫g dσ fails",
                                 res.gap);
    return res.gap;
}

std::vector<HPoint> interior_residual_probes(int count) {
    std::vector<HPoint> pts;
    for (int i = 0; i < count; ++i) {
        const double r = 0.25 + 0.4 * i / std::max(1, count - 1);
        const double a = -1.0 + 2.0 * i / std::max(1, count - 1);
        pts.emplace_back(Complex(r * std::sqrt(std::cos(a)), 0.0), r * r * std::sin(a));
    }
    return pts;
}

// Pulled slightly inside ∂B: the flux is continuous up to the boundary and
// the surface quadrature cannot resolve evaluation closer than its spacing.
std::vector<HPoint> boundary_residual_probes(int count) {
    std::vector<HPoint> pts;
    const double r = 0.95;
    for (int i = 0; i < count; ++i) {
        const double a = -0.9 + 1.8 * i / std::max(1, count - 1);
        pts.emplace_back(Complex(r * std::sqrt(std::cos(a)), 0.0), r * r * std::sin(a));
    }
    return pts;
}

void fill_residuals(SolutionReport& rep, const ScalarField& u, const NeumannProblem& prob,
                    const SolveOptions& opts) {
    const auto [ir, br] =
        verify_solution(u, prob, opts.stencil, opts.residual_probe_count,
                        opts.boundary_probe_count);
    rep.interior_residual = ir;
    rep.boundary_residual = br;
}

} // namespace

bool polynomial_particular_solution(const ScalarField& f, int n, int max_degree,
                                    ScalarField* u_out) {
    // Fit f on a deterministic grid to Σ c_{ab} |z|^{2a} t^b, a+b <= max_degree.
    std::vector<std::pair<int, int>> mono;
    for (int a = 0; a + 0 <= max_degree; ++a)
        for (int b = 0; a + b <= max_degree; ++b) mono.emplace_back(a, b);
    std::vector<HPoint> pts;
    const int G = 9;
    for (int i = 0; i < G; ++i)
        for (int j = 0; j < G; ++j) {
            const double r2 = 0.05 + 0.9 * i / (G - 1);
            const double t = -0.9 + 1.8 * j / (G - 1);
            std::vector<Complex> z(static_cast<size_t>(n), Complex(0, 0));
            z[0] = std::sqrt(r2);
            pts.emplace_back(z, t);
        }
    Eigen::MatrixXd A(pts.size(), mono.size());
    Eigen::VectorXd rhs(pts.size());
    double scale = 0.0;
    for (size_t i = 0; i < pts.size(); ++i) {
        const double r2 = pts[i].zmod2();
        for (size_t m = 0; m < mono.size(); ++m)
            A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m)) =
                std::pow(r2, mono[m].first) * std::pow(pts[i].t, mono[m].second);
        const Complex fv = f(pts[i]);
        if (std::abs(fv.imag()) > 1e-10) return false;
        rhs(static_cast<Eigen::Index>(i)) = fv.real();
        scale = std::max(scale, std::abs(fv.real()));
    }
    Eigen::VectorXd c = A.colPivHouseholderQr().solve(rhs);
    const double resid = (A * c - rhs).lpNorm<Eigen::Infinity>();
    if (resid > 1e-9 * (1.0 + scale)) return false;

    // Invert L_0 on monomials: L_0 |z|^{2a} t^b =
    //   a(a+n-1)|z|^{2(a-1)} t^b + b(b-1)|z|^{2(a+1)} t^{b-2}.
    // Process b from high to low: pick u-term |z|^{2(a+1)} t^b to produce the
    // target (a,b) term, then push the induced (a+2, b-2) correction down.
    std::map<std::pair<int, int>, double> want;
    for (size_t m = 0; m < mono.size(); ++m)
        if (std::abs(c(static_cast<Eigen::Index>(m))) > 1e-12)
            want[mono[m]] += c(static_cast<Eigen::Index>(m));
    std::map<std::pair<int, int>, double> usol;
    for (int b = max_degree; b >= 0; --b) {
        for (int a = max_degree; a >= 0; --a) {
            const auto it = want.find({a, b});
            if (it == want.end() || it->second == 0.0) continue;
            const double coeff = it->second;
            const double lead = static_cast<double>(a + 1) * (a + n);  // L_0 of |z|^{2(a+1)}t^b
            const double uc = coeff / lead;
            usol[{a + 1, b}] += uc;
            it->second = 0.0;
            if (b >= 2) want[{a + 2, b - 2}] -= uc * b * (b - 1);
        }
    }
    std::vector<std::pair<std::pair<int, int>, double>> terms(usol.begin(), usol.end());
    *u_out = make_field(
        n,
        [terms](const HPoint& p) {
            const double r2 = p.zmod2();
            double acc = 0.0;
            for (const auto& [ab, coef] : terms)
                acc += coef * std::pow(r2, ab.first) * std::pow(p.t, ab.second);
            return Complex(acc, 0.0);
        },
        true);
    return true;
}

ScalarField kernel_solution_field(const NeumannProblem& prob, const KernelCoefficients& coeffs,
                                  const SurfaceQuadrature& sq, const VolumeQuadrature& vq) {
    // u(η) = -[∫ N_B(η,ξ) f(ξ) dv(ξ) − ∫ N_B(η,ξ) g(ξ) dσ(ξ)]
    std::vector<double> fv(vq.size());
    bool f_zero = true;
    for (size_t i = 0; i < vq.size(); ++i) {
        fv[i] = std::real(prob.f(vq.nodes[i])) * vq.weights[i];
        if (fv[i] != 0.0) f_zero = false;
    }
    std::vector<double> gv(sq.size());
    for (size_t i = 0; i < sq.size(); ++i)
        gv[i] = std::real(prob.g(sq.nodes[i])) * sq.weights[i];

    const SurfaceQuadrature* psq = &sq;
    const VolumeQuadrature* pvq = &vq;
    return make_field(
        prob.n,
        [coeffs, fv = std::move(fv), gv = std::move(gv), f_zero, psq, pvq](const HPoint& eta) {
            double vol = 0.0;
            if (!f_zero)
                for (size_t i = 0; i < pvq->size(); ++i)
                    vol += neumann_kernel(coeffs, eta, pvq->nodes[i]) * fv[i];
            double surf = 0.0;
            for (size_t i = 0; i < psq->size(); ++i)
                surf += neumann_kernel(coeffs, eta, psq->nodes[i]) * gv[i];
            return Complex(-(vol - surf), 0.0);
        },
        true);
}

SolutionReport solve_via_kernel(const NeumannProblem& prob, const KernelCoefficients& coeffs,
                                const SurfaceQuadrature& sq, const VolumeQuadrature& vq,
                                const SolveOptions& opts) {
    check_circular(prob);
    SolutionReport rep;
    rep.compat_gap = check_compat(prob, sq, vq);
    const ScalarField u_raw = kernel_solution_field(prob, coeffs, sq, vq);
    const double u0 = std::real(u_raw(identity_point(1)));
    ScalarField u = make_field(prob.n,
                               [u_raw, u0](const HPoint& p) { return u_raw(p) - u0; },
                               true);
    rep.probes = opts.probes;
    rep.u.reserve(rep.probes.size());
    for (const auto& p : rep.probes) rep.u.push_back(std::real(u(p)));
    rep.constant_mode_note = "anchored to u(e) = 0; solutions defined modulo constants";
    if (opts.compute_residuals) fill_residuals(rep, u, prob, opts);
    return rep;
}

ScalarField bie_solution_field(const NeumannProblem& prob, const SurfaceQuadrature& sq,
                               const VolumeQuadrature& vq, const SolveOptions& opts,
                               SolutionReport* report) {
    check_circular(prob);

    // Particular solution u1 with L_0 u1 = f.
    ScalarField u1 = constant_field(prob.n, Complex(0, 0));
    bool have_u1 = false;
    bool f_zero = true;
    for (const auto& p : interior_residual_probes(6))
        if (std::abs(prob.f(p)) > 1e-14) f_zero = false;
    if (!f_zero) {
        have_u1 = polynomial_particular_solution(prob.f, prob.n, 8, &u1);
        if (!have_u1) {
            // Newtonian-type volume potential: u1(η) = −∫ f(ξ) g_η(ξ) dv(ξ).
            std::vector<double> fv(vq.size());
            for (size_t i = 0; i < vq.size(); ++i)
                fv[i] = std::real(prob.f(vq.nodes[i])) * vq.weights[i];
            const VolumeQuadrature* pvq = &vq;
            u1 = make_field(prob.n,
                            [fv = std::move(fv), pvq](const HPoint& eta) {
                                double acc = 0.0;
                                for (size_t i = 0; i < pvq->size(); ++i) {
                                    const double d =
                                        std::abs(Complex(pvq->nodes[i].zmod2() + eta.zmod2(),
                                                         pvq->nodes[i].t - eta.t) -
                                                 2.0 * pvq->nodes[i].z[0] * std::conj(eta.z[0]));
                                    if (d < 1e-10) continue;  // punctured at coincident nodes
                                    acc += fv[i] * a0_constant(1) / d;
                                }
                                return Complex(-acc, 0.0);
                            },
                            true);
            have_u1 = true;
        }
    }

    // Reduced flux g' = g − ∂⊥u1 at the quadrature nodes.
    DensityVector gp;
    gp.quad = &sq;
    gp.values.resize(sq.size());
    const StencilParams st = opts.stencil;
    for (size_t i = 0; i < sq.size(); ++i) {
        Complex val = prob.g(sq.nodes[i]);
        if (!f_zero)
            val -= horizontal_normal_derivative(u1, sq.nodes[i], st, kDefaultCharThreshold,
                                                Complex(0, 0));
        gp.values[i] = val;
    }

    BieReport brep;
    DensityVector psi = solve_integral_equation(gp, sq, prob.tol_compat, &brep);
    if (report) report->bie = brep;

    auto psi_ptr = std::make_shared<DensityVector>(std::move(psi));
    ScalarField u = make_field(
        prob.n,
        [psi_ptr, u1, have_u1](const HPoint& eta) {
            Complex acc = bie_solution_value(*psi_ptr, eta);
            if (have_u1) acc += u1(eta);
            return acc;
        },
        true);
    return u;
}

SolutionReport solve_via_bie(const NeumannProblem& prob, const SurfaceQuadrature& sq,
                             const VolumeQuadrature& vq, const SolveOptions& opts) {
    SolutionReport rep;
    rep.compat_gap = check_compat(prob, sq, vq);
    ScalarField u_raw = bie_solution_field(prob, sq, vq, opts, &rep);
    const double u0 = std::real(u_raw(identity_point(1)));
    ScalarField u = make_field(prob.n,
                               [u_raw, u0](const HPoint& p) { return u_raw(p) - u0; },
                               true);
    rep.probes = opts.probes;
    rep.u.reserve(rep.probes.size());
    for (const auto& p : rep.probes) rep.u.push_back(std::real(u(p)));
    rep.constant_mode_note = "anchored to u(e) = 0; solutions defined modulo constants";
    if (opts.compute_residuals) fill_residuals(rep, u, prob, opts);
    return rep;
}

std::pair<double, double> verify_solution(const ScalarField& u, const NeumannProblem& prob,
                                          const StencilParams& s, int interior_probes,
                                          int boundary_probes) {
    double ir = 0.0;
    for (const auto& p : interior_residual_probes(interior_probes))
        ir = std::max(ir, std::abs(sublaplacian_L0(u, p, s) - prob.f(p)));
    double br = 0.0;
    for (const auto& p : boundary_residual_probes(boundary_probes))
        br = std::max(br,
                      std::abs(horizontal_normal_derivative(u, p, s) - prob.g(p)));
    return {ir, br};
}

std::string report_to_json(const SolutionReport& r) {
    nlohmann::json j;
    j["interior_residual"] = r.interior_residual;
    j["boundary_residual"] = r.boundary_residual;
    j["compat_gap"] = r.compat_gap;
    j["constant_mode_note"] = r.constant_mode_note;
    j["bie"] = {{"residual", r.bie.residual},
                {"null_gap", r.bie.null_gap},
                {"compat_gap", r.bie.compat_gap}};
    auto& samples = j["u_samples"];
    samples = nlohmann::json::array();
    for (size_t i = 0; i < r.probes.size(); ++i)
        samples.push_back({r.probes[i].z[0].real(), r.probes[i].z[0].imag(), r.probes[i].t,
                           r.u[i]});
    return j.dump(2);
}

std::string report_to_csv(const SolutionReport& r) {
    std::ostringstream out;
    out << "z_re,z_im,t,value,residual_interior,residual_boundary\n";
    out.precision(17);
    for (size_t i = 0; i < r.probes.size(); ++i) {
        out << r.probes[i].z[0].real() << "," << r.probes[i].z[0].imag() << ","
            << r.probes[i].t << "," << r.u[i] << "," << r.interior_residual << ","
            << r.boundary_residual << "\n";
    }
    return out.str();
}

} // namespace koranyi
