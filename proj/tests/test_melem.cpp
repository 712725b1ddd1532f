#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "ptspec/melem.hpp"
#include "ptspec/specfun.hpp"

using namespace ptspec;
using Complex = std::complex<double>;
using melem::BasisParams;
using melem::Epsilon;

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(BasisParams(-1.0, 0.0), DomainError);
    CHECK_THROWS_AS(BasisParams(1.0, std::nan("")), DomainError);
    CHECK_THROWS_AS(Epsilon(-1.0), DomainError);
    CHECK_NOTHROW(Epsilon(-1.0, true));
    CHECK_THROWS_AS(Epsilon(-1.2, true), DomainError);
}

TEST_CASE("diagonal integral reduces to a single cylinder value") {
    // J(0,0) = e^{u^2/2} 2^{-(eps+2)/2} D_{eps+2}(sqrt2 u)
    for (double eps_v : {-0.5, 0.0, 1.0, 2.7}) {
        for (double u : {-1.1, 0.0, 0.8}) {
            const Epsilon eps(eps_v);
            const Complex j = melem::pt_integral(0, 0, u, eps);
            const double nu = eps_v + 2.0;
            const double ref = std::exp(u * u / 2.0) *
                               std::pow(2.0, -nu / 2.0) *
                               specfun::d_nu(nu, std::sqrt(2.0) * u);
            CHECK(j.real() == doctest::Approx(ref).epsilon(1e-10));
            CHECK(std::abs(j.imag()) < 1e-10 * (1.0 + std::abs(ref)));
        }
    }
}

TEST_CASE("nearest-neighbour integral at eps = 0 is 2iu of the Gaussian moment") {
    // J(0,1) = i sqrt(2) u at eps = 0: vanishes iff u = 0
    const Epsilon eps(0.0);
    for (double u : {-0.9, -0.2, 0.0, 0.4, 1.3}) {
        const Complex j = melem::pt_integral(0, 1, u, eps);
        CHECK(std::abs(j - Complex{0.0, std::sqrt(2.0) * u}) < 1e-12);
    }
}

TEST_CASE("closed form of the (0,1) element") {
    // J(0,1) = -i e^{u^2/2} 2^{-(eps+2)/2} (D_{eps+3} - sqrt2 u D_{eps+2})
    for (double eps_v : {0.0, 1.0, 2.0}) {
        for (double u : {-1.2, 0.5, 1.0}) {
            const Epsilon eps(eps_v);
            const Complex j = melem::pt_integral(0, 1, u, eps);
            const double z = std::sqrt(2.0) * u;
            const double nu = eps_v + 2.0;
            const Complex ref =
                Complex{0.0, -1.0} * std::exp(u * u / 2.0) *
                std::pow(2.0, -nu / 2.0) *
                (specfun::d_nu(nu + 1.0, z) - z * specfun::d_nu(nu, z));
            CHECK(std::abs(j - ref) < 1e-10 * (1.0 + std::abs(ref)));
        }
    }
}

TEST_CASE("quadrature oracle trivial values") {
    const Epsilon zero(0.0);
    const Complex a = melem::pt_integral_quadrature(0, 0, 0.0, zero);
    CHECK(a.real() == doctest::Approx(-0.5).epsilon(1e-9));
    CHECK(std::abs(a.imag()) < 1e-10);
    const Complex b = melem::pt_integral_quadrature(0, 1, 0.0, zero);
    CHECK(std::abs(b) < 1e-10);
}

TEST_CASE("analytic vs quadrature across the grid") {
    for (int n = 0; n <= 8; n += 2) {
        for (int k = n; k <= 8; k += 3) {
            for (double u : {-1.0, -0.3, 0.0, 0.5, 1.2}) {
                for (double eps_v : {-0.9, -0.5, 0.0, 1.0, 2.0, 3.7}) {
                    CAPTURE(n);
                    CAPTURE(k);
                    CAPTURE(u);
                    CAPTURE(eps_v);
                    const Epsilon eps(eps_v);
                    const Complex a = melem::pt_integral(n, k, u, eps);
                    const Complex b =
                        melem::pt_integral_quadrature(n, k, u, eps);
                    CHECK(std::abs(a - b) <= 1e-8 * (1.0 + std::abs(a)));
                }
            }
        }
    }
}

TEST_CASE("parity of the integral: real for even n+k, imaginary for odd") {
    const Epsilon eps(1.3);
    for (int n = 0; n <= 5; ++n) {
        for (int k = n; k <= 5; ++k) {
            const Complex j = melem::pt_integral(n, k, 0.7, eps);
            const double scale = std::max(1.0, std::abs(j));
            if ((n + k) % 2 == 0)
                CHECK(std::abs(j.imag()) < 1e-8 * scale);
            else
                CHECK(std::abs(j.real()) < 1e-8 * scale);
        }
    }
}

TEST_CASE("harmonic exactness at eps = 0") {
    const Epsilon eps(0.0);
    const BasisParams p{1.0, 0.0};
    // the monomial reduction sums terms of size ~2^n n!; the achievable
    // floor at n = 12 in double precision is a few 1e-10
    for (int n = 0; n <= 12; ++n) {
        CHECK(std::abs(melem::h_diag(n, p, eps) -
                       Complex{2.0 * n + 1.0, 0.0}) < 5e-9);
        for (int k = 0; k <= 12; ++k)
            if (k != n)
                CHECK(std::abs(melem::h_offdiag(n, k, p, eps)) < 5e-9);
    }
}

TEST_CASE("quartic diagonal closed form") {
    // eps = 2: H00 = omega/2 - (4u^4 - 12u^2 + 3)/(4 omega^2)
    const Epsilon eps(2.0);
    for (double om : {0.8, 1.5, 2.4}) {
        for (double u : {-1.3, 0.0, 0.6}) {
            const BasisParams p{om, u};
            const double ref =
                om / 2.0 -
                (4.0 * u * u * u * u - 12.0 * u * u + 3.0) / (4.0 * om * om);
            const Complex v = melem::h_diag(0, p, eps);
            CHECK(v.real() == doctest::Approx(ref).epsilon(1e-10));
            CHECK(std::abs(v.imag()) < 1e-10 * (1.0 + std::abs(ref)));
        }
    }
}

TEST_CASE("alternating sign absorbs into the symmetric element") {
    const Epsilon eps(1.0);
    const BasisParams p{1.35, 0.71};
    for (int n = 0; n <= 6; ++n) {
        for (int k = 0; k <= 6; ++k) {
            if (k == n) continue;
            const double sign = (n % 2 == 0) ? 1.0 : -1.0;
            const Complex lhs = melem::sym_element(n, k, p, eps);
            const Complex rhs = sign * melem::h_offdiag(n, k, p, eps);
            CHECK(std::abs(lhs - rhs) < 1e-13 * (1.0 + std::abs(rhs)));
        }
    }
    // and the symmetric element is actually symmetric
    for (int n = 0; n <= 6; ++n)
        for (int k = n + 1; k <= 6; ++k)
            CHECK(std::abs(melem::sym_element(n, k, p, eps) -
                           melem::sym_element(k, n, p, eps)) <
                  1e-10 * (1.0 + std::abs(melem::sym_element(n, k, p, eps))));
}
