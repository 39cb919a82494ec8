#include <doctest.h>

#include <cmath>
#include <complex>

#include "armlab/maps.hpp"

using namespace armlab;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("half-strip boundary values") {
    CHECK(std::abs(halfstrip_f0(Cplx(1.0, 0.0))) < 1e-14);
    CHECK(std::abs(halfstrip_f0(Cplx(-1.0, 0.0)) - Cplx(0.0, kPi)) < 1e-14);
    // shifted strip
    CHECK(std::abs(halfstrip_f(2.5, Cplx(3.5, 0.0)) - Cplx(2.5, 0.0)) < 1e-13);
    CHECK(std::abs(halfstrip_f(2.5, Cplx(1.5, 0.0)) - Cplx(2.5, kPi)) < 1e-13);
}

TEST_CASE("half-strip closed-form value at z = 3") {
    // f(3) = 2 sqrt(2) + log(3 + 2 sqrt(2))
    double expected = 2.0 * std::sqrt(2.0) + std::log(3.0 + 2.0 * std::sqrt(2.0));
    CHECK(halfstrip_f0_real(3.0) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(expected == doctest::Approx(4.59117).epsilon(1e-5));
    CHECK(phi_threshold() == doctest::Approx(expected));
}

TEST_CASE("half-strip derivative formula vs finite differences") {
    // f'(z) = sqrt((z+1)/(z-1)); at z=2 this is sqrt(3)
    CHECK(std::abs(halfstrip_f0_deriv(Cplx(2.0, 0.0)) - std::sqrt(3.0)) < 1e-12);
    for (double re : {-3.0, -0.5, 0.4, 1.7, 5.0}) {
        for (double im : {0.2, 1.0, 3.0}) {
            Cplx z(re, im);
            double h = 1e-6;
            Cplx fd = (halfstrip_f0(z + h) - halfstrip_f0(z - h)) / (2.0 * h);
            CHECK(std::abs(fd - halfstrip_f0_deriv(z)) <= 1e-6 * std::abs(fd));
        }
    }
}

TEST_CASE("cauchy-riemann residuals on an interior grid") {
    double h = 1e-5;
    for (double re = -4.0; re <= 4.0; re += 0.8) {
        for (double im = 0.5; im <= 3.0; im += 0.5) {
            Cplx z(re, im);
            Cplx dx = (halfstrip_f0(z + h) - halfstrip_f0(z - h)) / (2.0 * h);
            Cplx dy = (halfstrip_f0(z + Cplx(0, h)) - halfstrip_f0(z - Cplx(0, h))) / (2.0 * h);
            // dy should equal i*dx
            CHECK(std::abs(dy - Cplx(0, 1) * dx) < 1e-6 * (1.0 + std::abs(dx)));
        }
    }
}

TEST_CASE("newton inverse round trip") {
    CHECK(std::abs(halfstrip_g(0.0, Cplx(0.0, 0.0)) - Cplx(1.0, 0.0)) < 1e-10);
    CHECK(std::abs(halfstrip_g(0.0, Cplx(0.0, kPi)) - Cplx(-1.0, 0.0)) < 1e-8);
    CHECK(std::abs(halfstrip_g(0.0, Cplx(4.5911739, 0.0)) - Cplx(3.0, 0.0)) < 1e-6);
    int checked = 0;
    for (double re = -6.0; re <= 6.0; re += 0.6) {
        for (double im = 0.1; im <= 4.0; im += 0.39) {
            Cplx z(re, im);
            Cplx w = halfstrip_f0(z);
            Cplx back = halfstrip_g(0.0, w);
            CHECK(std::abs(back - z) <= 1e-10 * (1.0 + std::abs(z)));
            ++checked;
        }
    }
    CHECK(checked >= 200);
}

TEST_CASE("asymptotics f(z) = z + log(2z) + O(1/z)") {
    for (double r : {10.0, 100.0, 1000.0, 10000.0}) {
        for (double arg : {0.3, 1.0, 2.6}) {
            Cplx z = r * Cplx(std::cos(arg), std::sin(arg));
            Cplx err = halfstrip_f0(z) - z - std::log(2.0 * z);
            CHECK(std::abs(err) <= 5.0 / std::abs(z));
        }
    }
}

TEST_CASE("phi definition branch and monotonicity") {
    CHECK(phi(4.0) == 0.0);
    CHECK(phi(phi_threshold() - 1e-9) == 0.0);
    CHECK(phi_iter(0, 7.3) == 7.3);
    double prev = 0.0;
    for (double x = phi_threshold() + 0.01; x < 60.0; x += 0.5) {
        double v = phi(x);
        CHECK(v > prev);
        CHECK(v < x);
        prev = v;
    }
}

TEST_CASE("phi iterate short-circuits at zero") {
    CHECK(phi_iter(3, 5.0) == 0.0);  // phi(5) ~ 0.56 < threshold, then 0
}

TEST_CASE("harmonic measure values from the paper's identities") {
    // strip side [y, y + i pi] has measure 2
    CHECK(hm_infinity(0.0, Cplx(0.0, 0.0), Cplx(0.0, kPi)) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(hm_infinity(1.5, Cplx(1.5, 0.0), Cplx(1.5, kPi)) == doctest::Approx(2.0).epsilon(1e-9));
    // [y, y'] on R has measure g0(y'-y) - 1
    for (double d : {0.5, 1.0, 3.0}) {
        double expected = halfstrip_g0_real(d) - 1.0;
        CHECK(hm_infinity(0.0, Cplx(0.0, 0.0), Cplx(d, 0.0)) ==
              doctest::Approx(expected).epsilon(1e-9));
    }
    CHECK_THROWS_AS(hm_infinity(0.0, Cplx(-1.0, 0.5), Cplx(0.0, 0.0)), std::domain_error);
}

TEST_CASE("semidisc map") {
    SemiDisc d{0.0, 1.0};
    CHECK(std::abs(semidisc_g(d, Cplx(0.0, 2.0)) - Cplx(0.0, 1.5)) < 1e-14);
    CHECK(semidisc_g(d, Cplx(2.0, 0.0)).real() == doctest::Approx(2.5));
    CHECK(semidisc_g(d, Cplx(-2.0, 0.0)).real() == doctest::Approx(-2.5));
    // boundary image interval is [-2, 2]
    CHECK(semidisc_g(d, Cplx(1.0, 0.0)).real() == doctest::Approx(2.0));
    CHECK_THROWS_AS(semidisc_g(d, Cplx(0.1, 0.2)), std::domain_error);
    // hcap r^2 from the expansion at large z
    SemiDisc d2{0.7, 1.3};
    Cplx z(0.0, 2000.0);
    Cplx g = semidisc_g(d2, z);
    CHECK(((g - z) * (z - Cplx(d2.x0, 0.0))).real() == doctest::Approx(1.69).epsilon(1e-5));
}

TEST_CASE("branch cut input rejected") {
    CHECK_THROWS_AS(halfstrip_f0(Cplx(0.3, 0.0)), std::domain_error);
}
