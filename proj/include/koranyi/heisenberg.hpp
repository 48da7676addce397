#ifndef KORANYI_HEISENBERG_HPP
#define KORANYI_HEISENBERG_HPP

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <vector>

namespace koranyi {

using Complex = std::complex<double>;

// A point [z,t] of H_n, z in C^n.
struct HPoint {
    std::vector<Complex> z;
    double t = 0.0;

    HPoint() = default;
    HPoint(std::vector<Complex> z_, double t_) : z(std::move(z_)), t(t_) {}
    // n = 1 convenience
    HPoint(Complex z1, double t_) : z{z1}, t(t_) {}

    int dim() const { return static_cast<int>(z.size()); }
    double zmod2() const;           // |z|^2
};

HPoint identity_point(int n);
HPoint group_mul(const HPoint& p, const HPoint& q);
HPoint inverse(const HPoint& p);
double gauge_norm(const HPoint& p);               // (|z|^4 + t^2)^{1/4}
HPoint dilate(const HPoint& p, double lambda);    // [λz, λ²t], test utility
HPoint gauge_rotate(const HPoint& p, double theta); // [e^{iθ}z, t]

// Evaluatable field with circularity metadata.
struct ScalarField {
    std::function<Complex(const HPoint&)> eval;
    bool circular = false;
    int n = 1;

    Complex operator()(const HPoint& p) const { return eval(p); }
};

ScalarField make_field(int n, std::function<Complex(const HPoint&)> f, bool circular = false);
ScalarField constant_field(int n, Complex value);

struct StencilParams {
    double h = 1e-3;
    int order = 2;   // 2 or 4, central
};

enum class VectorField { X, Y, T, Z, Zbar };

// Central finite-difference application of a left-invariant field at p.
// j is the 1-based coordinate index (ignored for T).
Complex apply_field(VectorField which, int j, const ScalarField& f, const HPoint& p,
                    const StencilParams& s);

// Field-producing form, composable for nested derivatives.
ScalarField field_derivative(VectorField which, int j, const ScalarField& f,
                             const StencilParams& s);

// (1/4) Σ_j (X_j² + Y_j²) f at p. X_j² along the frozen direction is exact
// since X_j annihilates its own coefficient (X_j y_j = 0), likewise Y_j.
Complex sublaplacian_L0(const ScalarField& f, const HPoint& p, const StencilParams& s);

// The 2n coefficients (X_1 f, Y_1 f, ..., X_n f, Y_n f).
std::vector<Complex> horizontal_gradient(const ScalarField& f, const HPoint& p,
                                         const StencilParams& s);
double horizontal_gradient_norm(const ScalarField& f, const HPoint& p, const StencilParams& s);

inline constexpr double kDefaultCharThreshold = 1e-6;

// ∂⊥f = (1/|z|)(Ā E + A Ē)f with E = Σ z_j Z_j, A = |z|² + it.
// Below the characteristic threshold the declared limit is returned if given,
// otherwise CharacteristicPointError.
Complex horizontal_normal_derivative(const ScalarField& f, const HPoint& p,
                                     const StencilParams& s,
                                     double eps_char = kDefaultCharThreshold,
                                     std::optional<Complex> characteristic_limit = std::nullopt);

// Gauge inversion h([z,t]) = [-z/(|z|²-it), -t/(|z|⁴+t²)]; involution.
HPoint gauge_inversion(const HPoint& p);

// Kelvin transform Kf = N^{-2n} f∘h.
ScalarField kelvin_transform(const ScalarField& f);

// Polar coordinates on H_1: ρ = r cos^{1/2}α, t = r² sin α, θ = φ + tan α log(r/a).
struct PolarH1 {
    double r;
    double phi;
    double alpha;
};

HPoint polar_to_point(const PolarH1& c, double scale_a = 1.0);
PolarH1 point_to_polar(const HPoint& p, double scale_a = 1.0);

// Euclidean direction of the unit horizontal normal n_0 at a point of ∂B
// (components along x, y, t for n = 1).
std::array<double, 3> horizontal_normal_direction_h1(const HPoint& p);

} // namespace koranyi

#endif
