#include "koranyi/heisenberg.hpp"
#include "koranyi/errors.hpp"

#include <algorithm>
#include <cmath>

namespace koranyi {

double HPoint::zmod2() const {
    double s = 0.0;
    for (const auto& zj : z) s += std::norm(zj);
    return s;
}

HPoint identity_point(int n) {
    return HPoint(std::vector<Complex>(static_cast<size_t>(n), Complex(0.0, 0.0)), 0.0);
}

HPoint group_mul(const HPoint& p, const HPoint& q) {
    if (p.dim() != q.dim())
        throw DimensionMismatchError("group_mul: operands live in different H_n");
    HPoint r;
    r.z.resize(p.z.size());
    double im = 0.0;
    for (size_t j = 0; j < p.z.size(); ++j) {
        r.z[j] = p.z[j] + q.z[j];
        im += std::imag(p.z[j] * std::conj(q.z[j]));
    }
    r.t = p.t + q.t + 2.0 * im;
    return r;
}

HPoint inverse(const HPoint& p) {
    HPoint r = p;
    for (auto& zj : r.z) zj = -zj;
    r.t = -r.t;
    return r;
}

double gauge_norm(const HPoint& p) {
    const double z2 = p.zmod2();
    return std::pow(z2 * z2 + p.t * p.t, 0.25);
}

HPoint dilate(const HPoint& p, double lambda) {
    HPoint r = p;
    for (auto& zj : r.z) zj *= lambda;
    r.t *= lambda * lambda;
    return r;
}

HPoint gauge_rotate(const HPoint& p, double theta) {
    HPoint r = p;
    const Complex ph = std::polar(1.0, theta);
    for (auto& zj : r.z) zj *= ph;
    return r;
}

ScalarField make_field(int n, std::function<Complex(const HPoint&)> f, bool circular) {
    ScalarField s;
    s.eval = std::move(f);
    s.circular = circular;
    s.n = n;
    return s;
}

ScalarField constant_field(int n, Complex value) {
    return make_field(n, [value](const HPoint&) { return value; }, true);
}

namespace {

// Frozen Euclidean direction of the field at p: a step ds moves
// x_j by dx*ds, y_j by dy*ds and t by dt*ds.
struct Direction {
    int j = 0;        // 0-based coordinate index
    double dx = 0.0, dy = 0.0, dt = 0.0;
};

Direction direction_of(VectorField which, int j, const HPoint& p) {
    Direction d;
    d.j = j - 1;
    switch (which) {
        case VectorField::X:
            d.dx = 1.0;
            d.dt = 2.0 * std::imag(p.z[static_cast<size_t>(d.j)]);
            break;
        case VectorField::Y:
            d.dy = 1.0;
            d.dt = -2.0 * std::real(p.z[static_cast<size_t>(d.j)]);
            break;
        case VectorField::T:
            d.dt = 1.0;
            break;
        default:
            break;
    }
    return d;
}

HPoint step(const HPoint& p, const Direction& d, double s) {
    HPoint q = p;
    q.z[static_cast<size_t>(d.j)] += Complex(d.dx * s, d.dy * s);
    q.t += d.dt * s;
    return q;
}

Complex directional_first(const ScalarField& f, const HPoint& p, const Direction& d,
                          const StencilParams& sp) {
    const double h = sp.h;
    if (sp.order == 4) {
        const Complex fm2 = f(step(p, d, -2 * h)), fm1 = f(step(p, d, -h));
        const Complex fp1 = f(step(p, d, h)), fp2 = f(step(p, d, 2 * h));
        return (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
    }
    return (f(step(p, d, h)) - f(step(p, d, -h))) / (2.0 * h);
}

Complex directional_second(const ScalarField& f, const HPoint& p, const Direction& d,
                           const StencilParams& sp) {
    const double h = sp.h;
    const Complex f0 = f(p);
    if (sp.order == 4) {
        const Complex fm2 = f(step(p, d, -2 * h)), fm1 = f(step(p, d, -h));
        const Complex fp1 = f(step(p, d, h)), fp2 = f(step(p, d, 2 * h));
        return (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
    }
    return (f(step(p, d, h)) - 2.0 * f0 + f(step(p, d, -h))) / (h * h);
}

void check_index(VectorField which, int j, const HPoint& p) {
    if (which == VectorField::T) return;
    if (j < 1 || j > p.dim())
        throw DimensionMismatchError("apply_field: coordinate index out of range");
}

} // namespace

Complex apply_field(VectorField which, int j, const ScalarField& f, const HPoint& p,
                    const StencilParams& s) {
    check_index(which, j, p);
    switch (which) {
        case VectorField::X:
        case VectorField::Y:
        case VectorField::T:
            return directional_first(f, p, direction_of(which, j, p), s);
        case VectorField::Z: {
            const Complex xf = directional_first(f, p, direction_of(VectorField::X, j, p), s);
            const Complex yf = directional_first(f, p, direction_of(VectorField::Y, j, p), s);
            return 0.5 * (xf - Complex(0, 1) * yf);
        }
        case VectorField::Zbar: {
            const Complex xf = directional_first(f, p, direction_of(VectorField::X, j, p), s);
            const Complex yf = directional_first(f, p, direction_of(VectorField::Y, j, p), s);
            return 0.5 * (xf + Complex(0, 1) * yf);
        }
    }
    return Complex(0, 0);
}

ScalarField field_derivative(VectorField which, int j, const ScalarField& f,
                             const StencilParams& s) {
    return make_field(f.n,
                      [which, j, f, s](const HPoint& p) { return apply_field(which, j, f, p, s); },
                      false);
}

Complex sublaplacian_L0(const ScalarField& f, const HPoint& p, const StencilParams& s) {
    Complex acc(0, 0);
    for (int j = 1; j <= p.dim(); ++j) {
        acc += directional_second(f, p, direction_of(VectorField::X, j, p), s);
        acc += directional_second(f, p, direction_of(VectorField::Y, j, p), s);
    }
    return 0.25 * acc;
}

std::vector<Complex> horizontal_gradient(const ScalarField& f, const HPoint& p,
                                         const StencilParams& s) {
    std::vector<Complex> g;
    g.reserve(2 * static_cast<size_t>(p.dim()));
    for (int j = 1; j <= p.dim(); ++j) {
        g.push_back(directional_first(f, p, direction_of(VectorField::X, j, p), s));
        g.push_back(directional_first(f, p, direction_of(VectorField::Y, j, p), s));
    }
    return g;
}

double horizontal_gradient_norm(const ScalarField& f, const HPoint& p, const StencilParams& s) {
    double acc = 0.0;
    for (const Complex& c : horizontal_gradient(f, p, s)) acc += std::norm(c);
    return std::sqrt(acc);
}

Complex horizontal_normal_derivative(const ScalarField& f, const HPoint& p,
                                     const StencilParams& s, double eps_char,
                                     std::optional<Complex> characteristic_limit) {
    const double zmod = std::sqrt(p.zmod2());
    if (zmod < eps_char) {
        if (characteristic_limit) return *characteristic_limit;
        throw CharacteristicPointError(
            "horizontal_normal_derivative: |z| below the characteristic threshold");
    }
    Complex Ef(0, 0), Ebf(0, 0);
    for (int j = 1; j <= p.dim(); ++j) {
        const Complex zj = p.z[static_cast<size_t>(j - 1)];
        Ef += zj * apply_field(VectorField::Z, j, f, p, s);
        Ebf += std::conj(zj) * apply_field(VectorField::Zbar, j, f, p, s);
    }
    const Complex A(p.zmod2(), p.t);
    return (std::conj(A) * Ef + A * Ebf) / zmod;
}

HPoint gauge_inversion(const HPoint& p) {
    const double z2 = p.zmod2();
    const double n4 = z2 * z2 + p.t * p.t;
    if (n4 == 0.0) throw PoleError("gauge_inversion: pole at the identity");
    const Complex denom(z2, -p.t);
    HPoint r;
    r.z.resize(p.z.size());
    for (size_t j = 0; j < p.z.size(); ++j) r.z[j] = -p.z[j] / denom;
    r.t = -p.t / n4;
    return r;
}

ScalarField kelvin_transform(const ScalarField& f) {
    const int n = f.n;
    return make_field(n,
                      [f, n](const HPoint& p) {
                          const double N = gauge_norm(p);
                          if (N == 0.0) throw PoleError("kelvin_transform: pole at the identity");
                          return std::pow(N, -2.0 * n) * f(gauge_inversion(p));
                      },
                      f.circular);
}

HPoint polar_to_point(const PolarH1& c, double scale_a) {
    if (c.r <= 0.0) throw RegimeError("polar_to_point: requires r > 0");
    if (!(std::abs(c.alpha) < M_PI / 2))
        throw RegimeError("polar_to_point: alpha outside (-pi/2, pi/2)");
    const double rho = c.r * std::sqrt(std::cos(c.alpha));
    const double theta = c.phi + std::tan(c.alpha) * std::log(c.r / scale_a);
    return HPoint(std::polar(rho, theta), c.r * c.r * std::sin(c.alpha));
}

PolarH1 point_to_polar(const HPoint& p, double scale_a) {
    if (p.dim() != 1) throw DimensionMismatchError("point_to_polar: H_1 only");
    PolarH1 c;
    c.r = gauge_norm(p);
    if (c.r == 0.0) throw RegimeError("point_to_polar: undefined at the identity");
    c.alpha = std::asin(std::clamp(p.t / (c.r * c.r), -1.0, 1.0));
    const double theta = std::arg(p.z[0]);
    c.phi = theta - std::tan(c.alpha) * std::log(c.r / scale_a);
    c.phi = std::remainder(c.phi, 2 * M_PI);
    if (c.phi < 0) c.phi += 2 * M_PI;
    return c;
}

std::array<double, 3> horizontal_normal_direction_h1(const HPoint& p) {
    const double x = std::real(p.z[0]), y = std::imag(p.z[0]);
    const double z2 = x * x + y * y;
    const double zmod = std::sqrt(z2);
    if (zmod == 0.0)
        throw CharacteristicPointError("horizontal_normal_direction_h1: characteristic point");
    const double N2 = std::sqrt(z2 * z2 + p.t * p.t);
    return {(x * z2 + y * p.t) / (zmod * N2), (y * z2 - x * p.t) / (zmod * N2),
            2.0 * z2 * p.t / (zmod * N2)};
}

} // namespace koranyi
