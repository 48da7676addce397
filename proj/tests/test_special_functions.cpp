#include <doctest.h>

#include <cmath>
#include <random>

#include "koranyi/errors.hpp"
#include "koranyi/kernels.hpp"
#include "koranyi/special_functions.hpp"

using namespace koranyi;

TEST_CASE("pochhammer values") {
    CHECK(pochhammer(Complex(2.7, -1.1), 0) == Complex(1, 0));
    CHECK(std::real(pochhammer(Complex(1, 0), 4)) == doctest::Approx(24.0));
    CHECK(std::real(pochhammer(Complex(0.5, 0), 2)) == doctest::Approx(0.75));
}

TEST_CASE("hyp2f1 reference values") {
    CHECK(std::real(hyp2f1(Complex(0.3, 0), Complex(1.2, 0), Complex(0.9, 0), 0.0).value) ==
          doctest::Approx(1.0));
    // F(1,1;2;x) = -log(1-x)/x
    const auto r = hyp2f1(Complex(1, 0), Complex(1, 0), Complex(2, 0), 0.5);
    CHECK(r.converged);
    CHECK(std::real(r.value) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("hyp2f1 against the brute-force partial sum") {
    for (int n : {1, 2, 3}) {
        for (double x : {0.1, 0.5, 0.9}) {
            // direct 200-term partial sum oracle
            double term = 1.0, sum = 1.0;
            for (int s = 0; s < 200; ++s) {
                term *= (0.5 * n + s) * (0.5 * n + s) / ((static_cast<double>(n) + s) * (1.0 + s)) * x;
                sum += term;
            }
            const auto r = hyp2f1(Complex(0.5 * n, 0), Complex(0.5 * n, 0),
                                  Complex(static_cast<double>(n), 0), x);
            CHECK(std::real(r.value) == doctest::Approx(sum).epsilon(1e-9));
        }
    }
}

TEST_CASE("hyp2f1 partial sums are monotone for positive parameters") {
    // all series terms are positive, so tighter tolerances only add mass
    const auto loose = hyp2f1(Complex(0.5, 0), Complex(0.5, 0), Complex(1, 0), 0.7, 1e-4);
    const auto tight = hyp2f1(Complex(0.5, 0), Complex(0.5, 0), Complex(1, 0), 0.7, 1e-13);
    CHECK(std::real(tight.value) >= std::real(loose.value));
    CHECK(std::real(tight.value) - std::real(loose.value) < 1e-3);
}

TEST_CASE("hyp2f1 domain errors") {
    CHECK_THROWS_AS(hyp2f1(Complex(1, 0), Complex(1, 0), Complex(2, 0), 1.0), RegimeError);
    CHECK_THROWS_AS(hyp2f1(Complex(1, 0), Complex(1, 0), Complex(-2, 0), 0.5), RegimeError);
    CHECK_THROWS_AS(hyp2f1(Complex(3, 0), Complex(3, 0), Complex(1, 0), 0.999999, 1e-12, 100),
                    ConvergenceError);
}

TEST_CASE("cab polynomial basic values") {
    CHECK(cab_poly({0, Complex(2.3, 0.7), Complex(-1, 0)}, Complex(0.4, 1.1)) == Complex(1, 0));
    // m=1, α=β=1, ς=i: ς̄ + ς = 0
    CHECK(std::abs(cab_poly({1, Complex(1, 0), Complex(1, 0)}, Complex(0, 1))) < 1e-15);
}

TEST_CASE("cab generating function") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> par(0.5, 3.0), arg(-1.0, 1.0);
    for (int it = 0; it < 20; ++it) {
        const Complex alpha(par(rng), 0), beta(par(rng), 0);
        Complex sig(arg(rng), arg(rng));
        Complex zv(arg(rng), arg(rng));
        const double cap = 0.8 / (std::abs(zv) * std::abs(sig) + 1e-12);
        if (cap < 1.0) zv *= cap;
        const int M = 40;
        Complex sum(0, 0), zp(1, 0);
        for (int m = 0; m <= M; ++m) {
            sum += zp * cab_poly({m, alpha, beta}, sig);
            zp *= zv;
        }
        const Complex target = std::pow(1.0 - zv * std::conj(sig), -alpha) *
                               std::pow(1.0 - zv * sig, -beta);
        const double rho = std::abs(zv) * std::abs(sig);
        // |C_m| ≤ ((α+β)_m/m!)|ς|^m via the generating function of (1-x)^{-α-β}
        const double kappa = std::real(alpha + beta);
        const double cM = std::abs(pochhammer(alpha + beta, M + 1)) / std::tgamma(M + 2.0);
        const double tail = 4.0 * cM * std::pow(rho, M + 1) / std::pow(1 - rho, kappa + 1);
        CHECK(std::abs(sum - target) <= tail + 1e-12);
    }
}

TEST_CASE("cab conjugate-swap symmetry") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int it = 0; it < 30; ++it) {
        const int m = static_cast<int>(rng() % 7);
        const Complex sig(u(rng), u(rng));
        const Complex a(u(rng), u(rng)), b(u(rng), u(rng));
        // swapping the parameters and conjugating the argument is the identity
        const Complex lhs = cab_poly({m, a, b}, sig);
        const Complex rhs = cab_poly({m, b, a}, std::conj(sig));
        CHECK(std::abs(lhs - rhs) < 1e-10 * (1 + std::abs(lhs)));
        // conjugating everything conjugates the value
        const Complex r2 = cab_poly({m, std::conj(a), std::conj(b)}, std::conj(sig));
        CHECK(std::abs(std::conj(lhs) - r2) < 1e-10 * (1 + std::abs(lhs)));
    }
}

TEST_CASE("cab symmetric fast path matches the general form") {
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> u(-2.0, 2.0), par(0.4, 4.0);
    for (int it = 0; it < 40; ++it) {
        const double a = par(rng);
        const Complex sig(u(rng), u(rng));
        const int m = static_cast<int>(rng() % 11);
        const double fast = cab_poly_sym(m, a, sig);
        const Complex ref = cab_poly({m, Complex(a, 0), Complex(a, 0)}, sig);
        CHECK(std::abs(ref.imag()) < 1e-10 * (1 + std::abs(ref)));
        CHECK(fast == doctest::Approx(ref.real()).epsilon(1e-10));
    }
}

TEST_CASE("cq coefficient reference values and recurrence") {
    CHECK(cq_coeffs({0, 0, 3}, false) == std::vector<double>{1.0});
    // general, k=l=1, n=2: c_1 = -1
    const auto c11 = cq_coeffs({1, 1, 2}, false);
    REQUIRE(c11.size() == 2);
    CHECK(c11[1] == doctest::Approx(-1.0));
    // circular, k=2, n=2: (2)^2 c_0 + 1·1·c_1 = 0
    const auto c2 = cq_coeffs({2, 2, 2}, true);
    CHECK(c2[1] == doctest::Approx(-4.0));
    // recurrence residual is zero for all stored q
    for (int n : {2, 3, 4}) {
        for (int k : {1, 2, 3, 5}) {
            const auto c = cq_coeffs({k, k, n}, true);
            for (size_t q = 0; q + 1 < c.size(); ++q) {
                const double res = (k - static_cast<double>(q)) * (k - static_cast<double>(q)) *
                                       c[q] +
                                   (static_cast<double>(q) + 1) * (n + static_cast<double>(q) - 1) *
                                       c[q + 1];
                CHECK(std::abs(res) < 1e-12 * (1 + std::abs(c[q])));
            }
        }
    }
    CHECK(cq_coeffs({3, 3, 1}, true) == std::vector<double>{1.0});  // n = 1 collapse
}

TEST_CASE("spherical harmonics: constants, circular average, harmonicity") {
    std::mt19937_64 rng(53);
    std::normal_distribution<double> g(0.0, 0.8);
    CHECK(spherical_harmonic({0, 0, 2}, {Complex(0.3, 1), Complex(-2, 0.4)}, false) ==
          Complex(1, 0));

    // circular average over θ of Y_{k,k;j}(e^{iθ}z) equals Y_{k;j}(z)
    for (int k : {1, 2, 3}) {
        std::vector<Complex> z = {Complex(g(rng), g(rng)), Complex(g(rng), g(rng))};
        Complex avg(0, 0);
        const int Q = 64;
        for (int i = 0; i < Q; ++i) {
            const Complex ph = std::polar(1.0, 2 * M_PI * i / Q);
            std::vector<Complex> zr = {z[0] * ph, z[1] * ph};
            avg += spherical_harmonic({k, k, 2}, zr, false);
        }
        avg /= static_cast<double>(Q);
        const Complex circ = spherical_harmonic({k, k, 2}, z, true);
        CHECK(std::abs(avg - circ) < 1e-10 * (1 + std::abs(circ)));
    }

    // Σ_j ∂²/∂z_j∂z̄_j Y_{1,1;j} = 0 via the Euclidean 4-Laplacian stencil
    const double h = 1e-4;
    auto Y11 = [](Complex z1, Complex z2) {
        return spherical_harmonic({1, 1, 2}, {z1, z2}, false);
    };
    for (int it = 0; it < 5; ++it) {
        const Complex z1(g(rng), g(rng)), z2(g(rng), g(rng));
        Complex lap(0, 0);
        // ∂²/∂z∂z̄ = (1/4)(∂_x² + ∂_y²) per complex coordinate
        lap += (Y11(z1 + h, z2) - 2.0 * Y11(z1, z2) + Y11(z1 - h, z2)) / (h * h);
        lap += (Y11(z1 + Complex(0, h), z2) - 2.0 * Y11(z1, z2) + Y11(z1 - Complex(0, h), z2)) /
               (h * h);
        lap += (Y11(z1, z2 + h) - 2.0 * Y11(z1, z2) + Y11(z1, z2 - h)) / (h * h);
        lap += (Y11(z1, z2 + Complex(0, h)) - 2.0 * Y11(z1, z2) + Y11(z1, z2 - Complex(0, h))) /
               (h * h);
        CHECK(std::abs(lap) * 0.25 < 1e-6);
    }

    // n = 1 reduction: Y_k = |z_1|^{2k}
    CHECK(std::real(spherical_harmonic({3, 3, 1}, {Complex(0.5, 0.5)}, true)) ==
          doctest::Approx(std::pow(0.5, 3)));
}

TEST_CASE("circular average: projection and reference values") {
    const ScalarField fcirc = make_field(1, [](const HPoint& p) {
        return Complex(p.zmod2() * p.t, 0.0);
    }, true);
    const HPoint p(Complex(0.3, 0.7), -0.4);
    CHECK(std::abs(circular_average(fcirc, p, 32) - fcirc(p)) < 1e-13);

    const ScalarField fz = make_field(1, [](const HPoint& q) { return q.z[0]; });
    CHECK(std::abs(circular_average(fz, p, 32)) < 1e-14);

    // averaging twice equals averaging once
    const ScalarField fmix = make_field(1, [](const HPoint& q) {
        return Complex(q.z[0].real() + q.zmod2(), 0.0);
    });
    const Complex once = circular_average(fmix, p, 64);
    const ScalarField favg =
        make_field(1, [fmix](const HPoint& q) { return circular_average(fmix, q, 64); }, true);
    CHECK(std::abs(circular_average(favg, p, 64) - once) < 1e-12);

    CHECK_THROWS_AS(circular_average(fmix, p, 4), RegimeError);
}

TEST_CASE("circular average of the fundamental solution matches the closed form") {
    std::mt19937_64 rng(59);
    std::uniform_real_distribution<double> u(-0.7, 0.7);
    int done = 0;
    while (done < 25) {
        const HPoint eta(Complex(u(rng), u(rng)), u(rng));
        const HPoint xi(Complex(u(rng), u(rng)), u(rng));
        // keep the 256-node oracle meaningful: orbit-regular pairs only
        const Complex C(xi.zmod2() + eta.zmod2(), xi.t - eta.t);
        const Complex P = 2.0 * xi.z[0] * std::conj(eta.z[0]);
        if (std::abs(P) > 0.9 * std::abs(C)) continue;
        if (gauge_norm(group_mul(inverse(xi), eta)) < 0.1) continue;
        const ScalarField geta =
            make_field(1, [eta](const HPoint& q) { return Complex(fundamental_solution(eta, q), 0.0); });
        const Complex avg = circular_average(geta, xi, 256);
        CHECK(std::abs(std::real(avg) - averaged_fundamental(eta, xi)) < 1e-8);
        ++done;
    }
}
