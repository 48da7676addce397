#include "koranyi/quadrature.hpp"
#include "koranyi/errors.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

namespace koranyi {

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(static_cast<size_t>(n), 0.0);
    w.assign(static_cast<size_t>(n), 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Newton from the Chebyshev-like initial guess
        double xi = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double p1 = 0.0;
        for (int it = 0; it < 100; ++it) {
            p1 = 1.0;
            double p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * xi * p2 - j * p3) / (j + 1.0);
            }
            const double dp = n * (xi * p1 - p2) / (xi * xi - 1.0);
            const double dx = p1 / dp;
            xi -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double p2 = 0.0;
        {
            p1 = 1.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * xi * p2 - j * p3) / (j + 1.0);
            }
        }
        const double dp = n * (xi * p1 - p2) / (xi * xi - 1.0);
        x[static_cast<size_t>(i)] = -xi;
        x[static_cast<size_t>(n - 1 - i)] = xi;
        w[static_cast<size_t>(i)] = 2.0 / ((1.0 - xi * xi) * dp * dp);
        w[static_cast<size_t>(n - 1 - i)] = w[static_cast<size_t>(i)];
    }
}

namespace {

double kahan_sum(const std::vector<double>& v) {
    double s = 0.0, c = 0.0;
    for (double x : v) {
        const double y = x - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

// α-rule on (-π/2, π/2): Gauss-Legendre in u with α = (π/2)sin u, which
// flattens the √cos α endpoint behavior of the surface measure.
void alpha_rule(int n_alpha, std::vector<double>& alpha, std::vector<double>& dalpha) {
    std::vector<double> x, w;
    gauss_legendre(n_alpha, x, w);
    alpha.resize(static_cast<size_t>(n_alpha));
    dalpha.resize(static_cast<size_t>(n_alpha));
    for (int i = 0; i < n_alpha; ++i) {
        const double u = x[static_cast<size_t>(i)] * M_PI / 2.0;
        alpha[static_cast<size_t>(i)] = (M_PI / 2.0) * std::sin(u);
        dalpha[static_cast<size_t>(i)] =
            w[static_cast<size_t>(i)] * (M_PI / 2.0) * (M_PI / 2.0) * std::cos(u);
    }
}

} // namespace

double SurfaceQuadrature::area() const { return kahan_sum(weights); }
double VolumeQuadrature::volume() const { return kahan_sum(weights); }

SurfaceQuadrature sphere_quadrature(int n, int n_phi, int n_alpha) {
    if (n != 1) throw RegimeError("sphere_quadrature: polar chart available for n = 1 only");
    if (n_phi < 8 || n_alpha < 8) throw RegimeError("sphere_quadrature: resolution too low");
    SurfaceQuadrature sq;
    sq.n = 1;
    sq.n_phi = n_phi;
    sq.n_alpha = n_alpha;
    std::vector<double> alpha, dalpha;
    alpha_rule(n_alpha, alpha, dalpha);
    sq.nodes.reserve(static_cast<size_t>(n_phi) * static_cast<size_t>(n_alpha));
    sq.weights.reserve(sq.nodes.capacity());
    for (int ia = 0; ia < n_alpha; ++ia) {
        const double a = alpha[static_cast<size_t>(ia)];
        const double rho = std::sqrt(std::cos(a));
        const double t = std::sin(a);
        const double wa = 0.25 * std::sqrt(std::cos(a)) * dalpha[static_cast<size_t>(ia)] *
                          (2.0 * M_PI / n_phi);
        for (int ip = 0; ip < n_phi; ++ip) {
            const double phi = 2.0 * M_PI * ip / n_phi;
            sq.nodes.emplace_back(std::polar(rho, phi), t);
            sq.weights.push_back(wa);
        }
    }
    return sq;
}

VolumeQuadrature ball_quadrature(int n, int n_r, int n_phi, int n_alpha) {
    if (n != 1) throw RegimeError("ball_quadrature: polar chart available for n = 1 only");
    if (n_r < 4 || n_phi < 8 || n_alpha < 8) throw RegimeError("ball_quadrature: resolution too low");
    VolumeQuadrature vq;
    vq.n = 1;
    vq.n_r = n_r;
    vq.n_phi = n_phi;
    vq.n_alpha = n_alpha;
    std::vector<double> xr, wr, alpha, dalpha;
    gauss_legendre(n_r, xr, wr);
    alpha_rule(n_alpha, alpha, dalpha);
    vq.nodes.reserve(static_cast<size_t>(n_r) * static_cast<size_t>(n_phi) *
                     static_cast<size_t>(n_alpha));
    vq.weights.reserve(vq.nodes.capacity());
    for (int ir = 0; ir < n_r; ++ir) {
        const double r = 0.5 * (xr[static_cast<size_t>(ir)] + 1.0);
        const double dr = 0.5 * wr[static_cast<size_t>(ir)];
        for (int ia = 0; ia < n_alpha; ++ia) {
            const double a = alpha[static_cast<size_t>(ia)];
            const double rho = r * std::sqrt(std::cos(a));
            const double t = r * r * std::sin(a);
            const double twist = std::tan(a) * std::log(r);  // chart scale a = 1
            // dv = r^3 dr dφ dα in the polar chart
            const double wv =
                r * r * r * dr * dalpha[static_cast<size_t>(ia)] * (2.0 * M_PI / n_phi);
            for (int ip = 0; ip < n_phi; ++ip) {
                const double theta = 2.0 * M_PI * ip / n_phi + twist;
                vq.nodes.emplace_back(std::polar(rho, theta), t);
                vq.weights.push_back(wv);
            }
        }
    }
    return vq;
}

double integrate(const SurfaceQuadrature& sq, const ScalarField& f) {
    std::vector<double> terms(sq.size());
    for (size_t i = 0; i < sq.size(); ++i)
        terms[i] = std::real(f(sq.nodes[i])) * sq.weights[i];
    return kahan_sum(terms);
}

double integrate(const VolumeQuadrature& vq, const ScalarField& f) {
    std::vector<double> terms(vq.size());
    for (size_t i = 0; i < vq.size(); ++i)
        terms[i] = std::real(f(vq.nodes[i])) * vq.weights[i];
    return kahan_sum(terms);
}

Complex integrate_complex(const SurfaceQuadrature& sq, const ScalarField& f) {
    std::vector<double> re(sq.size()), im(sq.size());
    for (size_t i = 0; i < sq.size(); ++i) {
        const Complex v = f(sq.nodes[i]) * sq.weights[i];
        re[i] = v.real();
        im[i] = v.imag();
    }
    return {kahan_sum(re), kahan_sum(im)};
}

double greens_identity_residual(const ScalarField& u, const ScalarField& v,
                                const SurfaceQuadrature& sq, const VolumeQuadrature& vq,
                                const StencilParams& s) {
    std::vector<double> vol(vq.size());
    for (size_t i = 0; i < vq.size(); ++i) {
        const HPoint& p = vq.nodes[i];
        const Complex lhs = u(p) * sublaplacian_L0(v, p, s) - v(p) * sublaplacian_L0(u, p, s);
        vol[i] = std::real(lhs) * vq.weights[i];
    }
    std::vector<double> surf(sq.size());
    for (size_t i = 0; i < sq.size(); ++i) {
        const HPoint& p = sq.nodes[i];
        const Complex du = horizontal_normal_derivative(u, p, s, kDefaultCharThreshold,
                                                        Complex(0.0, 0.0));
        const Complex dv = horizontal_normal_derivative(v, p, s, kDefaultCharThreshold,
                                                        Complex(0.0, 0.0));
        surf[i] = std::real(u(p) * dv - v(p) * du) * sq.weights[i];
    }
    return std::abs(kahan_sum(vol) - kahan_sum(surf));
}

SolvabilityResult solvability_check(const ScalarField& f, const ScalarField& g,
                                    const SurfaceQuadrature& sq, const VolumeQuadrature& vq,
                                    double tol) {
    SolvabilityResult r;
    r.gap = std::abs(integrate(vq, f) - integrate(sq, g));
    r.pass = r.gap <= tol;
    return r;
}

std::string surface_to_json(const SurfaceQuadrature& sq) {
    nlohmann::json j;
    auto& nodes = j["nodes"];
    for (const auto& p : sq.nodes)
        nodes.push_back({p.z[0].real(), p.z[0].imag(), p.t});
    j["weights"] = sq.weights;
    return j.dump();
}

std::string volume_to_json(const VolumeQuadrature& vq) {
    nlohmann::json j;
    auto& nodes = j["nodes"];
    for (const auto& p : vq.nodes)
        nodes.push_back({p.z[0].real(), p.z[0].imag(), p.t});
    j["weights"] = vq.weights;
    return j.dump();
}

} // namespace koranyi
